"""Pure Python/NumPy fallback for the compiled kernel core.

This module and ``_kernels.pyx`` implement the same contract and must
produce bit-identical doubles.  The rules that make that possible:

* integer generator state is advanced with plain (masked) Python ints,
  mirroring the C uint64 arithmetic exactly;
* transcendental calls go through :mod:`math`, which binds to the same
  libm the compiled core links against;
* array arithmetic uses only elementwise ``+ - * /`` (exactly rounded
  per IEEE 754) with the accumulation order spelled out below.

Do not "optimise" accumulation orders here without mirroring the change
in the .pyx file; the parity test suite compares the two byte for byte.
"""

import math

import numpy as np

BACKEND_NAME = "python"

_MASK64 = (1 << 64) - 1
_PCG_MULT = 6364136223846793005
_U32_SCALE = 2.0**-32
_TWO_PI = 6.283185307179586


def _pcg32_next(state: int, inc: int) -> tuple[int, int]:
    """One PCG32 (XSH RR 64/32) step: returns (output u32, new state)."""
    old = state
    state = (old * _PCG_MULT + inc) & _MASK64
    xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
    rot = old >> 59
    out = ((xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))) & 0xFFFFFFFF
    return out, state


def uniform_fill(state: int, inc: int, out: np.ndarray) -> int:
    """Fill ``out`` with doubles in [0, 1); returns the new state."""
    flat = out.reshape(-1)
    for i in range(flat.shape[0]):
        u32, state = _pcg32_next(state, inc)
        flat[i] = u32 * _U32_SCALE
    return state


def gaussian_fill(
    state: int, inc: int, have_cache: int, cache: float, out: np.ndarray
) -> tuple[int, int, float]:
    """Fill ``out`` with standard normal variates.

    Box-Muller, two uniforms per pair; an unconsumed second variate is
    carried over in (have_cache, cache).
    """
    flat = out.reshape(-1)
    n = flat.shape[0]
    i = 0
    if have_cache and n > 0:
        flat[0] = cache
        have_cache = 0
        i = 1
    while i < n:
        u32, state = _pcg32_next(state, inc)
        u1 = (u32 + 1) * _U32_SCALE
        u32, state = _pcg32_next(state, inc)
        u2 = u32 * _U32_SCALE
        r = math.sqrt(-2.0 * math.log(u1))
        a = _TWO_PI * u2
        flat[i] = r * math.cos(a)
        i += 1
        if i < n:
            flat[i] = r * math.sin(a)
            i += 1
        else:
            cache = r * math.sin(a)
            have_cache = 1
    return state, have_cache, cache


def poisson_fill(state: int, inc: int, rates: np.ndarray, out: np.ndarray) -> int:
    """Per-element Poisson counts via Knuth's product-of-uniforms method."""
    rflat = rates.reshape(-1)
    oflat = out.reshape(-1)
    for i in range(rflat.shape[0]):
        limit = math.exp(-rflat[i])
        k = 0
        p = 1.0
        while True:
            u32, state = _pcg32_next(state, inc)
            p = p * (u32 * _U32_SCALE)
            if p <= limit:
                break
            k += 1
        oflat[i] = float(k)
    return state


def convolve2d_reflect(src: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Correlate (H, W, C) with (kh, kw), mirror padding without edge repeat.

    Accumulation order per output element: kernel rows then columns,
    ascending, starting from 0.0.
    """
    h, w, _ = src.shape
    kh, kw = kernel.shape
    ph, pw = kh // 2, kw // 2
    padded = np.pad(src, ((ph, ph), (pw, pw), (0, 0)), mode="reflect")
    out = np.zeros_like(src)
    for ki in range(kh):
        for kj in range(kw):
            out += kernel[ki, kj] * padded[ki : ki + h, kj : kj + w]
    return out


def _reflect_coords(x: np.ndarray, n: int) -> np.ndarray:
    """Fold real coordinates into [0, n-1] by mirroring (no edge repeat)."""
    if n == 1:
        return np.zeros_like(x)
    period = 2.0 * (n - 1)
    t = x - np.floor(x / period) * period
    t = np.where(t > n - 1.0, period - t, t)
    # division rounding can leave t an ulp outside [0, n-1]
    return np.minimum(np.maximum(t, 0.0), n - 1.0)


def remap_bilinear_reflect(src: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Sample (H, W, C) at absolute coordinates (xs, ys) per output pixel."""
    h, w, _ = src.shape
    tx = _reflect_coords(xs, w)
    ty = _reflect_coords(ys, h)
    x0 = np.floor(tx).astype(np.int64)
    y0 = np.floor(ty).astype(np.int64)
    fx = (tx - x0)[..., None]
    fy = (ty - y0)[..., None]
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    a = src[y0, x0]
    b = src[y0, x1]
    c = src[y1, x0]
    d = src[y1, x1]
    top = (1.0 - fx) * a + fx * b
    bot = (1.0 - fx) * c + fx * d
    return (1.0 - fy) * top + fy * bot


def resize_bilinear(
    src: np.ndarray,
    x0: np.ndarray,
    x1: np.ndarray,
    fx: np.ndarray,
    y0: np.ndarray,
    y1: np.ndarray,
    fy: np.ndarray,
) -> np.ndarray:
    """Separable bilinear gather with precomputed per-axis taps."""
    a = src[y0[:, None], x0[None, :]]
    b = src[y0[:, None], x1[None, :]]
    c = src[y1[:, None], x0[None, :]]
    d = src[y1[:, None], x1[None, :]]
    fxe = fx[None, :, None]
    fye = fy[:, None, None]
    top = (1.0 - fxe) * a + fxe * b
    bot = (1.0 - fxe) * c + fxe * d
    return (1.0 - fye) * top + fye * bot


def resize_nearest(src: np.ndarray, xi: np.ndarray, yi: np.ndarray) -> np.ndarray:
    return src[yi[:, None], xi[None, :]].copy()


def box_resize_axis1(
    src: np.ndarray, starts: np.ndarray, lengths: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    """Weighted column merge: out[:, j] = sum_k w * src[:, start_j + k]."""
    h, _, c = src.shape
    n_out = starts.shape[0]
    out = np.zeros((h, n_out, c), dtype=src.dtype)
    pos = 0
    for j in range(n_out):
        s = starts[j]
        for k in range(lengths[j]):
            out[:, j, :] += weights[pos] * src[:, s + k, :]
            pos += 1
    return out


def box_resize_axis0(
    src: np.ndarray, starts: np.ndarray, lengths: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    """Weighted row merge: out[i, :] = sum_k w * src[start_i + k, :]."""
    _, w, c = src.shape
    n_out = starts.shape[0]
    out = np.zeros((n_out, w, c), dtype=src.dtype)
    pos = 0
    for i in range(n_out):
        s = starts[i]
        for k in range(lengths[i]):
            out[i, :, :] += weights[pos] * src[s + k, :, :]
            pos += 1
    return out
