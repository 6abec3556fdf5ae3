"""The compiled kernels and the pure Python fallback must agree bit for
bit: same random streams, same doubles out of every kernel, same bytes
out of every corruption."""

import numpy as np
import pytest

from oodbench import _backend, ops
from oodbench.corruptions import apply_corruption
from oodbench.params import KIND_NAMES
from oodbench.rng import Prng

pytestmark = pytest.mark.skipif(
    not _backend.compiled_available(), reason="compiled kernels not built"
)


@pytest.fixture(autouse=True)
def restore_backend():
    yield
    _backend.use_backend("auto")


def _with_backend(name, fn):
    _backend.use_backend(name)
    try:
        return fn()
    finally:
        _backend.use_backend("auto")


def test_random_streams_identical():
    def draw():
        r = Prng(2024)
        return (
            r.uniforms(4097),
            r.gaussians(333),
            r.poisson(np.linspace(0.0, 60.0, 777)),
            r.gaussians(2),
        )

    a = _with_backend("python", draw)
    b = _with_backend("compiled", draw)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_kernels_identical(small_random_image):
    f = small_random_image.astype(np.float64) / 255.0
    h, w, _ = f.shape
    dx = np.sin(np.arange(h * w).reshape(h, w) * 0.013) * 4.2

    def run():
        k = ops.gaussian_kernel1d(1.9)
        return (
            ops.convolve(f, np.outer(k, k)),
            ops.resize(f, 19, 23, "bilinear"),
            ops.resize(f, 95, 11, "nearest"),
            ops.resize(f, 13, 17, "box"),
            ops.remap(f, dx, -dx),
            ops.plasma_fractal(64, 1.7, Prng(3)),
        )

    for x, y in zip(_with_backend("python", run), _with_backend("compiled", run)):
        assert np.array_equal(x, y)


@pytest.mark.parametrize("kind", KIND_NAMES)
def test_corruptions_byte_identical(kind, small_random_image):
    for level, seed in ((1, 11), (3, 42), (5, 7)):
        a = _with_backend("python", lambda: apply_corruption(small_random_image, kind, level, seed))
        b = _with_backend("compiled", lambda: apply_corruption(small_random_image, kind, level, seed))
        assert np.array_equal(a, b), (kind, level, seed)
