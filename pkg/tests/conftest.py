import numpy as np
import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one PASS/FAIL line per acceptance criterion."""
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.module.__name__ == "test_acceptance":
        tr = item.config.pluginmanager.get_plugin("terminalreporter")
        if tr is not None:
            verdict = "PASS" if rep.passed else "FAIL"
            tr.write_line(f"[criterion] {item.name}: {verdict}")


@pytest.fixture
def ref_image() -> np.ndarray:
    """Structured 112x112 RGB image: ramps crossed with a checkerboard."""
    yy, xx = np.mgrid[0:112, 0:112]
    checker = ((xx // 8 + yy // 8) % 2) * 40
    r = (xx * 2.0 + checker) % 256
    g = (yy * 2.0 + checker) % 256
    b = ((xx + yy) * 1.3) % 256
    return np.stack([r, g, b], axis=-1).astype(np.uint8)


@pytest.fixture
def gray_image() -> np.ndarray:
    return np.full((112, 112, 3), 128, dtype=np.uint8)


@pytest.fixture
def small_random_image() -> np.ndarray:
    rng = np.random.default_rng(7)
    return rng.integers(0, 256, size=(37, 53, 3), dtype=np.uint8)
