"""Freezes equivalence goldens for the wrapper package.

Builds 100 deterministic (image, kind, level, seed) tuples covering the
full 20x5 grid, runs the in-process corruption engine on each, and
stores the FNV-1a 64 digest of the raw RGB output bytes.  The wrapper's
test suite regenerates the same inputs, drives the engine through the
CLI instead, and compares digests.

Run from the repository root with the Python package installed:

    python frontend/tools/make_goldens.py
"""

import json
from pathlib import Path

import numpy as np

from oodbench.corruptions import apply_corruption
from oodbench.params import KIND_NAMES
from oodbench.pipeline import fnv1a64

MASK64 = (1 << 64) - 1


def pattern_image(width: int, height: int, variant: int) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width]
    img = np.empty((height, width, 3), dtype=np.uint8)
    for c in range(3):
        img[:, :, c] = (xx * 7 + yy * 13 + c * 29 + variant * 31) % 256
    return img


def main() -> None:
    cases = []
    for i in range(100):
        kind = KIND_NAMES[i % 20]
        level = (i // 20) % 5 + 1
        seed = (i * 0x9E3779B97F4A7C15) & MASK64
        width = 16 + (i * 13) % 48
        height = 16 + (i * 7) % 48
        img = pattern_image(width, height, i)
        out = apply_corruption(img, kind, level, seed)
        cases.append(
            {
                "kind": kind,
                "level": level,
                "seed": str(seed),
                "width": width,
                "height": height,
                "variant": i,
                "digest": f"{fnv1a64(out.tobytes()):016x}",
            }
        )
    dest = Path(__file__).resolve().parent.parent / "test" / "fixtures" / "goldens.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(cases, indent=2) + "\n")
    print(f"wrote {len(cases)} cases to {dest}")


if __name__ == "__main__":
    main()
