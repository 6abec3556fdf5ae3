# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel core.

Mirror of ``_kernels_py``: same function contract, bit-identical doubles.
Keep accumulation orders and floating point expressions in sync with the
fallback; the parity tests compare outputs byte for byte.  Compiled with
-ffp-contract=off so no FMA contraction changes roundings.
"""

from libc.math cimport cos, exp, floor, log, sin, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"

cdef extern from *:
    """
    #include <stdint.h>
    static const uint64_t PCG_MULT = 6364136223846793005ULL;
    """
    ctypedef unsigned long long uint64_t
    ctypedef unsigned int uint32_t
    const uint64_t PCG_MULT

cdef double U32_SCALE = 2.0 ** -32
cdef double TWO_PI = 6.283185307179586


cdef inline uint32_t pcg32_step(uint64_t *state, uint64_t inc) noexcept nogil:
    cdef uint64_t old = state[0]
    state[0] = old * PCG_MULT + inc
    cdef uint32_t xorshifted = <uint32_t>(((old >> 18) ^ old) >> 27)
    cdef uint32_t rot = <uint32_t>(old >> 59)
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))


def uniform_fill(state, inc, cnp.ndarray out):
    cdef uint64_t s = <uint64_t>state
    cdef uint64_t i_ = <uint64_t>inc
    cdef double[::1] flat = out.reshape(-1)
    cdef Py_ssize_t i, n = flat.shape[0]
    with nogil:
        for i in range(n):
            flat[i] = pcg32_step(&s, i_) * U32_SCALE
    return int(s)


def gaussian_fill(state, inc, have_cache, cache, cnp.ndarray out):
    cdef uint64_t s = <uint64_t>state
    cdef uint64_t i_ = <uint64_t>inc
    cdef int hc = have_cache
    cdef double cv = cache
    cdef double[::1] flat = out.reshape(-1)
    cdef Py_ssize_t i = 0, n = flat.shape[0]
    cdef double u1, u2, r, a
    with nogil:
        if hc and n > 0:
            flat[0] = cv
            hc = 0
            i = 1
        while i < n:
            u1 = (<double>pcg32_step(&s, i_) + 1) * U32_SCALE
            u2 = pcg32_step(&s, i_) * U32_SCALE
            r = sqrt(-2.0 * log(u1))
            a = TWO_PI * u2
            flat[i] = r * cos(a)
            i += 1
            if i < n:
                flat[i] = r * sin(a)
                i += 1
            else:
                cv = r * sin(a)
                hc = 1
    return int(s), hc, cv


def poisson_fill(state, inc, cnp.ndarray rates, cnp.ndarray out):
    cdef uint64_t s = <uint64_t>state
    cdef uint64_t i_ = <uint64_t>inc
    cdef double[::1] rflat = rates.reshape(-1)
    cdef double[::1] oflat = out.reshape(-1)
    cdef Py_ssize_t i, n = rflat.shape[0]
    cdef double limit, p
    cdef long k
    with nogil:
        for i in range(n):
            limit = exp(-rflat[i])
            k = 0
            p = 1.0
            while True:
                p = p * (pcg32_step(&s, i_) * U32_SCALE)
                if p <= limit:
                    break
                k += 1
            oflat[i] = <double>k
    return int(s)


cdef inline Py_ssize_t reflect_index(Py_ssize_t i, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t period, m
    if n == 1:
        return 0
    period = 2 * (n - 1)
    m = i % period
    if m < 0:
        m += period
    if m >= n:
        m = period - m
    return m


def convolve2d_reflect(double[:, :, ::1] src, double[:, ::1] kernel):
    # Taps with an exactly-zero weight are skipped: a +-0.0 product can
    # never change the running sum (beyond the sign of a zero, which
    # compares equal), so the result matches the fallback's dense
    # accumulation bit for bit while line-shaped kernels run ~10x less.
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], c = src.shape[2]
    cdef Py_ssize_t kh = kernel.shape[0], kw = kernel.shape[1]
    cdef Py_ssize_t ph = kh // 2, pw = kw // 2
    taps = []
    cdef Py_ssize_t ki, kj
    for ki in range(kh):
        for kj in range(kw):
            if kernel[ki, kj] != 0.0:
                taps.append((ki, kj, kernel[ki, kj]))
    tki_arr = np.array([tap[0] for tap in taps], dtype=np.intp)
    tkj_arr = np.array([tap[1] for tap in taps], dtype=np.intp)
    tkv_arr = np.array([tap[2] for tap in taps], dtype=np.float64)
    cdef Py_ssize_t[::1] tki = tki_arr
    cdef Py_ssize_t[::1] tkj = tkj_arr
    cdef double[::1] tkv = tkv_arr
    cdef Py_ssize_t ntaps = tkv.shape[0]

    padded_arr = np.empty((h + 2 * ph, w + 2 * pw, c), dtype=np.float64)
    cdef double[:, :, ::1] padded = padded_arr
    out_arr = np.zeros((h, w, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch, t, si, sj
    cdef double acc
    with nogil:
        for i in range(h + 2 * ph):
            si = reflect_index(i - ph, h)
            for j in range(w + 2 * pw):
                sj = reflect_index(j - pw, w)
                for ch in range(c):
                    padded[i, j, ch] = src[si, sj, ch]
        for i in range(h):
            for j in range(w):
                for ch in range(c):
                    acc = 0.0
                    for t in range(ntaps):
                        acc = acc + tkv[t] * padded[i + tki[t], j + tkj[t], ch]
                    out[i, j, ch] = acc
    return out_arr


cdef inline double reflect_coord(double x, Py_ssize_t n) noexcept nogil:
    cdef double period, t, hi
    if n == 1:
        return 0.0
    period = 2.0 * (n - 1)
    hi = <double>(n - 1)
    t = x - floor(x / period) * period
    if t > hi:
        t = period - t
    if t < 0.0:
        t = 0.0
    if t > hi:
        t = hi
    return t


def remap_bilinear_reflect(double[:, :, ::1] src, double[:, ::1] xs, double[:, ::1] ys):
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], c = src.shape[2]
    out_arr = np.empty((h, w, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch, x0, y0, x1, y1
    cdef double tx, ty, fx, fy, top, bot
    with nogil:
        for i in range(h):
            for j in range(w):
                tx = reflect_coord(xs[i, j], w)
                ty = reflect_coord(ys[i, j], h)
                x0 = <Py_ssize_t>floor(tx)
                y0 = <Py_ssize_t>floor(ty)
                fx = tx - x0
                fy = ty - y0
                x1 = x0 + 1
                if x1 > w - 1:
                    x1 = w - 1
                y1 = y0 + 1
                if y1 > h - 1:
                    y1 = h - 1
                for ch in range(c):
                    top = (1.0 - fx) * src[y0, x0, ch] + fx * src[y0, x1, ch]
                    bot = (1.0 - fx) * src[y1, x0, ch] + fx * src[y1, x1, ch]
                    out[i, j, ch] = (1.0 - fy) * top + fy * bot
    return out_arr


def resize_bilinear(
    double[:, :, ::1] src,
    int[::1] x0,
    int[::1] x1,
    double[::1] fx,
    int[::1] y0,
    int[::1] y1,
    double[::1] fy,
):
    cdef Py_ssize_t h = y0.shape[0], w = x0.shape[0], c = src.shape[2]
    out_arr = np.empty((h, w, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch
    cdef double top, bot, fxe, fye
    with nogil:
        for i in range(h):
            fye = fy[i]
            for j in range(w):
                fxe = fx[j]
                for ch in range(c):
                    top = (1.0 - fxe) * src[y0[i], x0[j], ch] + fxe * src[y0[i], x1[j], ch]
                    bot = (1.0 - fxe) * src[y1[i], x0[j], ch] + fxe * src[y1[i], x1[j], ch]
                    out[i, j, ch] = (1.0 - fye) * top + fye * bot
    return out_arr


def resize_nearest(double[:, :, ::1] src, int[::1] xi, int[::1] yi):
    cdef Py_ssize_t h = yi.shape[0], w = xi.shape[0], c = src.shape[2]
    out_arr = np.empty((h, w, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch
    with nogil:
        for i in range(h):
            for j in range(w):
                for ch in range(c):
                    out[i, j, ch] = src[yi[i], xi[j], ch]
    return out_arr


def box_resize_axis1(double[:, :, ::1] src, int[::1] starts, int[::1] lengths, double[::1] weights):
    cdef Py_ssize_t h = src.shape[0], c = src.shape[2]
    cdef Py_ssize_t n_out = starts.shape[0]
    out_arr = np.zeros((h, n_out, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch, k, pos0, pos = 0
    cdef int s, ln
    with nogil:
        for j in range(n_out):
            s = starts[j]
            ln = lengths[j]
            pos0 = pos
            for i in range(h):
                for ch in range(c):
                    for k in range(ln):
                        out[i, j, ch] = out[i, j, ch] + weights[pos0 + k] * src[i, s + k, ch]
            pos = pos0 + ln
    return out_arr


def box_resize_axis0(double[:, :, ::1] src, int[::1] starts, int[::1] lengths, double[::1] weights):
    cdef Py_ssize_t w = src.shape[1], c = src.shape[2]
    cdef Py_ssize_t n_out = starts.shape[0]
    out_arr = np.zeros((n_out, w, c), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, ch, k, pos0, pos = 0
    cdef int s, ln
    with nogil:
        for i in range(n_out):
            s = starts[i]
            ln = lengths[i]
            pos0 = pos
            for j in range(w):
                for ch in range(c):
                    for k in range(ln):
                        out[i, j, ch] = out[i, j, ch] + weights[pos0 + k] * src[s + k, j, ch]
            pos = pos0 + ln
    return out_arr
