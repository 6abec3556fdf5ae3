"""Regenerates the bundled frost textures under src/oodbench/assets/frost.

Each texture is a 512x512 grayscale crystal pattern built from layered
diamond-square fields: a soft density base, ridge-transformed veins and
a sparse sparkle layer.  Seeds are fixed so the assets are reproducible
from this script; the shipped PNGs are the reference the corruption
goldens are defined against.
"""

from pathlib import Path

import numpy as np

from oodbench import pngio
from oodbench.ops import plasma_fractal
from oodbench.rng import Prng

SIZE = 512
RECIPES = [
    # (seed, base decay, vein decay, vein sharpness, sparkle quantile)
    (101, 1.9, 1.5, 5.0, 0.975),
    (202, 2.1, 1.6, 4.0, 0.985),
    (303, 1.7, 1.4, 6.0, 0.970),
    (404, 2.0, 1.5, 4.5, 0.980),
    (505, 1.8, 1.7, 5.5, 0.965),
]


def make_texture(seed: int, base_decay: float, vein_decay: float, sharp: float, q: float) -> np.ndarray:
    rng = Prng(seed)
    base = plasma_fractal(SIZE, base_decay, rng)
    veins = plasma_fractal(SIZE, vein_decay, rng)
    ridged = 1.0 - np.abs(2.0 * veins - 1.0)
    ridged = ridged**sharp
    grain = plasma_fractal(SIZE, 1.2, rng)
    sparkle = (grain > np.quantile(grain, q)).astype(np.float64)
    tex = 0.45 * base + 0.75 * ridged + 0.35 * sparkle
    tex = np.clip(tex, 0.0, 1.0)
    # lift midtones so the overlay reads as pale ice rather than smoke
    tex = tex**0.8
    return np.floor(tex * 255.0 + 0.5).astype(np.uint8)


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "src" / "oodbench" / "assets" / "frost"
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, (seed, bd, vd, sharp, q) in enumerate(RECIPES, start=1):
        tex = make_texture(seed, bd, vd, sharp, q)
        path = out_dir / f"frost_{i:02d}.png"
        path.write_bytes(pngio.write_png(tex))
        print(f"wrote {path} mean={tex.mean():.1f}")


if __name__ == "__main__":
    main()
