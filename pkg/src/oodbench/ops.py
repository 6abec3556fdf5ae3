"""Core raster operations: kernels, convolution, resampling, warping,
color-space conversion and the diamond-square height field.

Everything here is a pure function of its inputs.  The per-pixel loops
are delegated to the active kernel backend; tap positions and weights
are computed once here so both backends consume identical numbers.
"""

import math

import numpy as np

from . import _backend
from .errors import InvalidKernelError, InvalidSizeError, ShapeError
from .rng import Prng


def _as_3d(f: np.ndarray) -> tuple[np.ndarray, bool]:
    f = np.ascontiguousarray(f, dtype=np.float64)
    if f.ndim == 2:
        return f[:, :, None], True
    if f.ndim == 3:
        return f, False
    raise ShapeError(f"expected 2-D or 3-D float image, got shape {f.shape}")


def convolve(f: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Per-channel 2-D correlation, mirrored borders (edge not repeated)."""
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    if kernel.ndim != 2:
        raise InvalidKernelError("kernel must be 2-D")
    kh, kw = kernel.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise InvalidKernelError(f"kernel sides must be odd, got {kh}x{kw}")
    if abs(float(kernel.sum()) - 1.0) > 1e-9:
        raise InvalidKernelError("kernel entries must sum to 1")
    src, squeeze = _as_3d(f)
    out = _backend.kernels.convolve2d_reflect(src, kernel)
    return out[:, :, 0] if squeeze else out


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Unit-sum Gaussian taps on [-ceil(3 sigma), +ceil(3 sigma)]."""
    if sigma <= 0:
        return np.array([1.0])
    half = max(1, int(math.ceil(3.0 * sigma)))
    xs = np.arange(-half, half + 1, dtype=np.float64)
    k = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(f: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing (two 1-D passes)."""
    k = gaussian_kernel1d(sigma)
    if k.shape[0] == 1:
        return np.array(f, dtype=np.float64, copy=True)
    out = convolve(f, k[None, :])
    return convolve(out, k[:, None])


def disk_kernel(radius: int, alias_sigma: float) -> np.ndarray:
    """Unit-sum disk, softened by a small Gaussian against aliasing."""
    margin = max(1, int(math.ceil(3.0 * alias_sigma)))
    half = radius + margin
    ax = np.arange(-half, half + 1, dtype=np.float64)
    xx, yy = np.meshgrid(ax, ax)
    disk = ((xx * xx + yy * yy) <= float(radius * radius)).astype(np.float64)
    disk /= disk.sum()
    if alias_sigma > 0:
        g = gaussian_kernel1d(alias_sigma)
        disk = convolve(disk, np.outer(g, g))
        disk = np.maximum(disk, 0.0)
        disk /= disk.sum()
    return disk


def motion_kernel(radius: int, sigma: float, angle_deg: float) -> np.ndarray:
    """Line of 2r+1 Gaussian-weighted samples splatted bilinearly."""
    size = 2 * radius + 1
    k = np.zeros((size, size), dtype=np.float64)
    ca = math.cos(math.radians(angle_deg))
    sa = math.sin(math.radians(angle_deg))
    for i in range(-radius, radius + 1):
        w = math.exp(-(i * i) / (2.0 * sigma * sigma)) if sigma > 0 else (1.0 if i == 0 else 0.0)
        x = radius + i * ca
        y = radius + i * sa
        x0, y0 = int(math.floor(x)), int(math.floor(y))
        fx, fy = x - x0, y - y0
        for dy, wy in ((0, 1.0 - fy), (1, fy)):
            for dx, wx in ((0, 1.0 - fx), (1, fx)):
                yy, xx = y0 + dy, x0 + dx
                if 0 <= yy < size and 0 <= xx < size:
                    k[yy, xx] += w * wy * wx
    return k / k.sum()


def _bilinear_taps(n_in: int, n_out: int):
    scale = n_in / n_out
    idx = np.arange(n_out, dtype=np.float64)
    x = (idx + 0.5) * scale - 0.5
    x = np.minimum(np.maximum(x, 0.0), float(n_in - 1))
    x0 = np.floor(x).astype(np.int32)
    fx = x - x0
    x1 = np.minimum(x0 + 1, n_in - 1).astype(np.int32)
    return x0, x1, fx


def _nearest_taps(n_in: int, n_out: int) -> np.ndarray:
    scale = n_in / n_out
    idx = np.arange(n_out, dtype=np.float64)
    return np.minimum(np.floor((idx + 0.5) * scale), n_in - 1).astype(np.int32)


def _box_taps(n_in: int, n_out: int):
    """Fractional-coverage taps for area-averaged resampling."""
    ratio = n_in / n_out
    starts = np.empty(n_out, dtype=np.int32)
    lengths = np.empty(n_out, dtype=np.int32)
    weights: list[float] = []
    for j in range(n_out):
        e0 = j * ratio
        e1 = (j + 1) * ratio
        i0 = int(math.floor(e0))
        i1 = min(int(math.ceil(e1)), n_in)
        ws = []
        first = i0
        for i in range(i0, i1):
            w = min(e1, i + 1.0) - max(e0, float(i))
            if w <= 0.0:
                if not ws:
                    first = i + 1
                continue
            ws.append(w)
        arr = np.asarray(ws, dtype=np.float64)
        arr /= arr.sum()
        starts[j] = first
        lengths[j] = arr.shape[0]
        weights.extend(arr.tolist())
    return starts, lengths, np.asarray(weights, dtype=np.float64)


def resize(f: np.ndarray, new_w: int, new_h: int, filter: str = "bilinear") -> np.ndarray:
    """Deterministic resampling with box, bilinear or nearest filtering."""
    if new_w < 1 or new_h < 1:
        raise InvalidSizeError(f"target size must be positive, got {new_w}x{new_h}")
    src, squeeze = _as_3d(f)
    h, w, _ = src.shape
    if filter == "bilinear":
        x0, x1, fx = _bilinear_taps(w, new_w)
        y0, y1, fy = _bilinear_taps(h, new_h)
        out = _backend.kernels.resize_bilinear(src, x0, x1, fx, y0, y1, fy)
    elif filter == "nearest":
        xi = _nearest_taps(w, new_w)
        yi = _nearest_taps(h, new_h)
        out = _backend.kernels.resize_nearest(src, xi, yi)
    elif filter == "box":
        sx, lx, wx = _box_taps(w, new_w)
        out = _backend.kernels.box_resize_axis1(src, sx, lx, wx)
        sy, ly, wy = _box_taps(h, new_h)
        out = _backend.kernels.box_resize_axis0(np.ascontiguousarray(out), sy, ly, wy)
    else:
        raise InvalidSizeError(f"unknown filter {filter!r}")
    return out[:, :, 0] if squeeze else out


def remap(f: np.ndarray, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Sample input at (x + dx, y + dy), mirroring outside the frame."""
    src, squeeze = _as_3d(f)
    h, w, _ = src.shape
    dx = np.ascontiguousarray(dx, dtype=np.float64)
    dy = np.ascontiguousarray(dy, dtype=np.float64)
    if dx.shape != (h, w) or dy.shape != (h, w):
        raise ShapeError("displacement fields must match the image size")
    base_x = np.arange(w, dtype=np.float64)[None, :]
    base_y = np.arange(h, dtype=np.float64)[:, None]
    xs = np.ascontiguousarray(base_x + dx)
    ys = np.ascontiguousarray(base_y + dy)
    out = _backend.kernels.remap_bilinear_reflect(src, xs, ys)
    return out[:, :, 0] if squeeze else out


def zoom_center(f: np.ndarray, factor: float) -> np.ndarray:
    """Crop the central 1/factor window and rescale it back to full size."""
    src, squeeze = _as_3d(f)
    h, w, _ = src.shape
    ch = max(1, int(math.ceil(h / factor)))
    cw = max(1, int(math.ceil(w / factor)))
    top = (h - ch) // 2
    left = (w - cw) // 2
    crop = np.ascontiguousarray(src[top : top + ch, left : left + cw])
    out = resize(crop, w, h, "bilinear")
    return out[:, :, 0] if squeeze else out


def rgb_to_hsv(f: np.ndarray) -> np.ndarray:
    """RGB [0,1] to HSV with hue on a 0-180 half-degree scale."""
    f = np.asarray(f, dtype=np.float64)
    r, g, b = f[..., 0], f[..., 1], f[..., 2]
    mx = np.max(f, axis=-1)
    mn = np.min(f, axis=-1)
    delta = mx - mn
    safe = np.where(delta > 0, delta, 1.0)
    h_r = np.mod((g - b) / safe, 6.0)
    h_g = (b - r) / safe + 2.0
    h_b = (r - g) / safe + 4.0
    h6 = np.select([mx == r, mx == g], [h_r, h_g], default=h_b)
    h = np.where(delta > 0, h6 * 30.0, 0.0)
    s = np.where(mx > 0, delta / np.where(mx > 0, mx, 1.0), 0.0)
    return np.stack([h, s, mx], axis=-1)


def hsv_to_rgb(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    h, s, v = f[..., 0], f[..., 1], f[..., 2]
    h6 = np.mod(h, 180.0) / 30.0
    c = v * s
    x = c * (1.0 - np.abs(np.mod(h6, 2.0) - 1.0))
    m = v - c
    sector = np.floor(h6).astype(np.int64) % 6
    z = np.zeros_like(c)
    rs = np.choose(sector, [c, x, z, z, x, c])
    gs = np.choose(sector, [x, c, c, x, z, z])
    bs = np.choose(sector, [z, z, x, c, c, x])
    return np.stack([rs + m, gs + m, bs + m], axis=-1)


def plasma_fractal(size: int, wibble_decay: float, rng: Prng) -> np.ndarray:
    """Diamond-square height field, normalized to [0, 1].

    The grid is the smallest (2^k + 1) square covering ``size`` and is
    cropped on return.  Each recursion level divides the perturbation
    amplitude by ``wibble_decay``; random offsets are consumed corner
    first, then per level diamond points before square points, both in
    row-major order.
    """
    if size < 1:
        raise InvalidSizeError("plasma size must be >= 1")
    k = 1
    while (1 << k) + 1 < size:
        k += 1
    g = (1 << k) + 1
    grid = np.zeros((g, g), dtype=np.float64)
    amp = 1.0
    u = rng.uniforms(4)
    grid[0, 0] = (2.0 * u[0] - 1.0) * amp
    grid[0, g - 1] = (2.0 * u[1] - 1.0) * amp
    grid[g - 1, 0] = (2.0 * u[2] - 1.0) * amp
    grid[g - 1, g - 1] = (2.0 * u[3] - 1.0) * amp
    step = g - 1
    while step > 1:
        half = step // 2
        amp /= wibble_decay
        corners = np.arange(0, g - 1, step)
        cr, cc = np.meshgrid(corners, corners, indexing="ij")
        mid_r = cr + half
        mid_c = cc + half
        mean4 = (
            grid[cr, cc]
            + grid[cr, cc + step]
            + grid[cr + step, cc]
            + grid[cr + step, cc + step]
        ) / 4.0
        u = rng.uniforms(mid_r.size).reshape(mid_r.shape)
        grid[mid_r, mid_c] = mean4 + (2.0 * u - 1.0) * amp
        mask = np.zeros((g, g), dtype=bool)
        mask[half::step, ::step] = True
        mask[::step, half::step] = True
        rr, cc2 = np.nonzero(mask)
        acc = np.zeros(rr.shape[0], dtype=np.float64)
        cnt = np.zeros(rr.shape[0], dtype=np.float64)
        for dr, dc in ((-half, 0), (half, 0), (0, -half), (0, half)):
            r2 = rr + dr
            c2 = cc2 + dc
            valid = (r2 >= 0) & (r2 < g) & (c2 >= 0) & (c2 < g)
            acc[valid] += grid[r2[valid], c2[valid]]
            cnt[valid] += 1.0
        u = rng.uniforms(rr.shape[0])
        grid[rr, cc2] = acc / cnt + (2.0 * u - 1.0) * amp
        step = half
    grid = grid[:size, :size]
    lo = grid.min()
    hi = grid.max()
    if hi > lo:
        return (grid - lo) / (hi - lo)
    return np.zeros_like(grid)
