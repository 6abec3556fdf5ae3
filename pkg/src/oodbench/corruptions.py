"""The twenty corruption transforms and their dispatcher.

Each transform is a pure function of (pixels, parameters, generator
stream); calling it twice with the same arguments yields byte-identical
output.  Output dimensions always equal input dimensions.

Random draw order is part of each transform's contract and is noted in
the docstrings; changing it changes outputs for existing seeds.
"""

import functools
import math
import os
from pathlib import Path

import numpy as np

from . import jpegcodec, pngio
from .errors import MissingAssetError, ParameterError
from .image import from_float, to_float, validate_image
from .ops import (
    convolve,
    disk_kernel,
    gaussian_blur,
    hsv_to_rgb,
    motion_kernel,
    plasma_fractal,
    remap,
    resize,
    rgb_to_hsv,
    zoom_center,
)
from .params import CATEGORY_OF, KIND_NAMES, severity_params, validate_kind, validate_level
from .rng import Prng

NOISE_KINDS = ("gaussian_noise", "shot_noise", "impulse_noise", "speckle_noise", "salt_pepper_noise")
BLUR_KINDS = ("defocus_blur", "motion_blur", "zoom_blur")
PHOTOMETRIC_KINDS = ("brightness", "contrast", "saturate", "color_shift")
WEATHER_KINDS = ("fog", "frost", "snow", "spatter")
STRUCTURAL_KINDS = ("pixelate", "jpeg_compression", "facial_distortion", "random_occlusion")

# water droplets lean light gray-blue, mud blobs dark brown
_WATER_COLOR = np.array([0.69, 0.79, 0.86])
_MUD_COLOR = np.array([0.25, 0.16, 0.08])

_GRAY_WEIGHTS = np.array([0.299, 0.587, 0.114])

_OCCLUSION_MAX_TRIES = 100_000


def _check_params(kind: str, params: dict, family: tuple[str, ...]) -> None:
    if kind not in family:
        raise ParameterError(f"kind {kind!r} does not belong to this family")
    if params.get("kind") != kind:
        raise ParameterError(
            f"parameter set is for {params.get('kind')!r}, not {kind!r}"
        )


def apply_noise(img: np.ndarray, kind: str, params: dict, rng: Prng) -> np.ndarray:
    """Additive, multiplicative, counting and impulse noise.

    gaussian   x' = clamp(x + sigma * z)
    shot       x' = clamp(poisson(x * lam) / lam)
    impulse    per sample: u < d/2 -> 0, u < d -> 1, else unchanged
    speckle    x' = clamp(x + x * sigma * z)
    salt_pepper  exactly floor(density * H * W) distinct pixels forced to
                 pure black or pure white (fair coin per pixel); position
                 draws happen first, then the color draws
    """
    validate_image(img)
    _check_params(kind, params, NOISE_KINDS)
    if kind == "salt_pepper_noise":
        h, w, _ = img.shape
        count = int(math.floor(params["density"] * h * w))
        out = img.copy()
        if count == 0:
            return out
        positions = rng.sample_indices(h * w, count)
        whites = rng.uniforms(count) >= 0.5
        flat = out.reshape(-1, 3)
        for pos, white in zip(positions, whites):
            flat[pos] = 255 if white else 0
        return out
    f = to_float(img)
    if kind == "gaussian_noise":
        z = rng.gaussians(f.size).reshape(f.shape)
        out = f + params["sigma"] * z
    elif kind == "shot_noise":
        lam = params["lam"]
        counts = rng.poisson(f * lam).reshape(f.shape)
        out = counts / lam
    elif kind == "impulse_noise":
        amount = params["amount"]
        u = rng.uniforms(f.size).reshape(f.shape)
        out = np.where(u < amount / 2.0, 0.0, np.where(u < amount, 1.0, f))
    else:  # speckle
        z = rng.gaussians(f.size).reshape(f.shape)
        out = f + f * (params["sigma"] * z)
    return from_float(out)


def apply_blur(img: np.ndarray, kind: str, params: dict, rng: Prng) -> np.ndarray:
    """Defocus, directional motion and radial zoom blur.

    motion blur draws one uniform for the line angle in [-45, +45)
    degrees; zoom blur averages the original with center-crop rescales
    at factors z_start, z_start + 0.01, ... strictly below z_max.
    """
    validate_image(img)
    _check_params(kind, params, BLUR_KINDS)
    f = to_float(img)
    if kind == "defocus_blur":
        kernel = disk_kernel(int(params["radius"]), params["alias_sigma"])
        return from_float(convolve(f, kernel))
    if kind == "motion_blur":
        angle = -45.0 + 90.0 * rng.uniform()
        kernel = motion_kernel(int(params["radius"]), params["sigma"], angle)
        return from_float(convolve(f, kernel))
    steps = round((params["z_max"] - 1.0) * 100.0)
    factors = [1.0 + k / 100.0 for k in range(1, steps)]
    factors = [z for z in factors if z >= params["z_start"]]
    acc = f.copy()
    for z in factors:
        acc += zoom_center(f, z)
    return from_float(acc / (len(factors) + 1.0))


def apply_photometric(img: np.ndarray, kind: str, params: dict, rng: Prng) -> np.ndarray:
    """Brightness, contrast, saturation and hue shifts.

    brightness  V' = clamp(V + delta) in HSV
    contrast    x' = (x - mean_channel) * factor + mean_channel
    saturate    S' = clamp(S * factor + offset) in HSV
    color_shift H' = (H + delta) mod 180, delta uniform in [-m, +m];
                a zero delta returns the input bytes untouched
    """
    validate_image(img)
    _check_params(kind, params, PHOTOMETRIC_KINDS)
    f = to_float(img)
    if kind == "contrast":
        mu = f.mean(axis=(0, 1))
        return from_float((f - mu) * params["factor"] + mu)
    if kind == "color_shift":
        delta = (2.0 * rng.uniform() - 1.0) * params["max_shift"]
        if delta == 0.0:
            return img.copy()
        hsv = rgb_to_hsv(f)
        hsv[..., 0] = np.mod(hsv[..., 0] + delta, 180.0)
        return from_float(hsv_to_rgb(hsv))
    hsv = rgb_to_hsv(f)
    if kind == "brightness":
        hsv[..., 2] = np.clip(hsv[..., 2] + params["delta"], 0.0, 1.0)
    else:  # saturate
        hsv[..., 1] = np.clip(hsv[..., 1] * params["factor"] + params["offset"], 0.0, 1.0)
    return from_float(hsv_to_rgb(hsv))


def apply_weather(
    img: np.ndarray, kind: str, params: dict, rng: Prng, assets: list[np.ndarray] | None = None
) -> np.ndarray:
    """Fog, frost, snow and spatter overlays.

    fog     x' = clamp((x + a * field) * m / (m + a)), field a
            diamond-square height map, m the input maximum
    frost   x' = clamp(ai * x + af * T), T a random crop of a random
            texture (draw order: texture index, then row, then column)
    snow    thresholded gaussian field, zoomed and motion-blurred into
            streaks (angle uniform in [-135, -45) degrees), added on a
            whitened base together with its 180-degree rotation
    spatter blurred gaussian field thresholded into a droplet (water)
            or blob (mud) layer alpha-blended over the image
    """
    validate_image(img)
    _check_params(kind, params, WEATHER_KINDS)
    h, w, _ = img.shape
    f = to_float(img)
    if kind == "fog":
        amount = params["amount"]
        field = plasma_fractal(max(h, w), params["wibble_decay"], rng)[:h, :w]
        peak = f.max()
        out = (f + amount * field[..., None]) * (peak / (peak + amount))
        return from_float(out)
    if kind == "frost":
        if not assets:
            raise MissingAssetError("frost requires at least one texture asset")
        tex = assets[rng.randbelow(len(assets))].astype(np.float64) / 255.0
        th, tw = tex.shape
        if th < h or tw < w:
            scale = max(h / th, w / tw)
            tex = resize(tex, int(math.ceil(tw * scale)), int(math.ceil(th * scale)), "bilinear")
            th, tw = tex.shape
        oy = rng.randbelow(th - h + 1)
        ox = rng.randbelow(tw - w + 1)
        crop = tex[oy : oy + h, ox : ox + w]
        out = params["alpha_image"] * f + params["alpha_frost"] * crop[..., None]
        return from_float(out)
    if kind == "snow":
        field = rng.gaussians(h * w).reshape(h, w) * params["scale"] + params["loc"]
        field = zoom_center(field, params["zoom"])
        field = np.where(field < params["threshold"], 0.0, field)
        angle = -135.0 + 90.0 * rng.uniform()
        streaks = convolve(field, motion_kernel(int(params["blur_radius"]), params["blur_sigma"], angle))
        gray = f @ _GRAY_WEIGHTS
        mix = params["mix"]
        base = mix * f + (1.0 - mix) * np.maximum(f, (gray * 1.5 + 0.5)[..., None])
        out = base + streaks[..., None] + streaks[::-1, ::-1][..., None]
        return from_float(out)
    # spatter
    field = rng.gaussians(h * w).reshape(h, w) * params["scale"] + params["loc"]
    blurred = gaussian_blur(field, params["blur_sigma"])
    if int(params["mode"]) == 0:
        mask = np.maximum(blurred - params["threshold"], 0.0)
        peak = mask.max()
        if peak > 0:
            mask = mask / peak
        weight = np.clip(mask * params["intensity"], 0.0, 1.0)[..., None]
        out = f * (1.0 - weight) + _WATER_COLOR * weight
    else:
        binary = (blurred >= params["threshold"]).astype(np.float64)
        weight = np.clip(gaussian_blur(binary, params["blur_sigma"]) * params["intensity"], 0.0, 1.0)[
            ..., None
        ]
        out = f * (1.0 - weight) + _MUD_COLOR * weight
    return from_float(out)


def apply_structural(img: np.ndarray, kind: str, params: dict, rng: Prng) -> np.ndarray:
    """Resolution, compression, warp and occlusion corruptions.

    pixelate    box downscale to floor(side * scale) then nearest upscale
    jpeg        baseline encode at the level quality, decode, return pixels
    distortion  elastic warp; both displacement fields are smoothed
                uniform noise (x field drawn fully before the y field)
    occlusion   filled black ellipses (per ellipse: center x, center y,
                semi-axes, rotation) until the union reaches the target
                area fraction, stopping after the crossing ellipse
    """
    validate_image(img)
    _check_params(kind, params, STRUCTURAL_KINDS)
    h, w, _ = img.shape
    if kind == "pixelate":
        scale = params["scale"]
        nh = max(1, int(math.floor(h * scale)))
        nw = max(1, int(math.floor(w * scale)))
        f = to_float(img)
        small = resize(f, nw, nh, "box")
        return from_float(resize(small, w, h, "nearest"))
    if kind == "jpeg_compression":
        return jpegcodec.decode(jpegcodec.encode(img, int(params["quality"])))
    if kind == "facial_distortion":
        side = min(h, w)
        smooth_sigma = 0.1 * side
        alpha = params["magnitude"] * side
        ux = rng.uniforms(h * w).reshape(h, w) * 2.0 - 1.0
        uy = rng.uniforms(h * w).reshape(h, w) * 2.0 - 1.0
        dx = gaussian_blur(ux, smooth_sigma) * alpha
        dy = gaussian_blur(uy, smooth_sigma) * alpha
        return from_float(remap(to_float(img), dx, dy))
    # random occlusion
    target = params["area"] * h * w
    side = float(min(h, w))
    mask = np.zeros((h, w), dtype=bool)
    ys = np.arange(h, dtype=np.float64)[:, None]
    xs = np.arange(w, dtype=np.float64)[None, :]
    occluded = 0
    for _ in range(_OCCLUSION_MAX_TRIES):
        if occluded >= target:
            break
        cx = rng.uniform() * w
        cy = rng.uniform() * h
        a = (0.05 + 0.1 * rng.uniform()) * side
        b = (0.05 + 0.1 * rng.uniform()) * side
        theta = rng.uniform() * math.pi
        ct, st = math.cos(theta), math.sin(theta)
        u = (xs - cx) * ct + (ys - cy) * st
        v = -(xs - cx) * st + (ys - cy) * ct
        mask |= (u * u) / (a * a) + (v * v) / (b * b) <= 1.0
        occluded = int(mask.sum())
    out = img.copy()
    out[mask] = 0
    return out


@functools.lru_cache(maxsize=4)
def _load_frost_dir(path: str) -> tuple[np.ndarray, ...]:
    base = Path(path)
    if not base.is_dir():
        return ()
    textures = []
    for entry in sorted(base.glob("*.png")):
        px = pngio.read_png(entry.read_bytes())
        if px.ndim == 3:
            px = np.round(px.astype(np.float64) @ _GRAY_WEIGHTS).astype(np.uint8)
        textures.append(px)
    return tuple(textures)


def frost_textures(directory: str | None = None) -> list[np.ndarray]:
    """Bundled grayscale frost textures; OODBENCH_FROST_DIR overrides."""
    path = directory or os.environ.get("OODBENCH_FROST_DIR")
    if path is None:
        path = str(Path(__file__).parent / "assets" / "frost")
    return list(_load_frost_dir(path))


def apply_corruption(img: np.ndarray, kind: str, level: int, seed: int) -> np.ndarray:
    """Route one (kind, level, seed) cell to its transform family."""
    kind = validate_kind(kind)
    level = validate_level(level)
    validate_image(img)
    params = severity_params(kind, level)
    rng = Prng(seed)
    if kind in NOISE_KINDS:
        return apply_noise(img, kind, params, rng)
    if kind in BLUR_KINDS:
        return apply_blur(img, kind, params, rng)
    if kind in PHOTOMETRIC_KINDS:
        return apply_photometric(img, kind, params, rng)
    if kind in WEATHER_KINDS:
        assets = frost_textures() if kind == "frost" else None
        return apply_weather(img, kind, params, rng, assets)
    return apply_structural(img, kind, params, rng)


def corrupt(buffer, kind: str, level: int, seed: int) -> np.ndarray:
    """In-process entry point for array-like callers.

    Accepts anything exposing an (H, W, 3) uint8 buffer and returns a
    newly allocated array; the input is never written to.
    """
    arr = np.asarray(buffer)
    if arr.dtype != np.uint8:
        raise ParameterError("corrupt() expects uint8 samples")
    return apply_corruption(np.ascontiguousarray(arr), kind, level, seed)


def list_kinds() -> list[tuple[str, str]]:
    """All corruption kinds with their category, in canonical order."""
    return [(name, CATEGORY_OF[name]) for name in KIND_NAMES]
