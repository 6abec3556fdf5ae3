"""Compare the compiled kernel core against the pure Python fallback.

Times every corruption kind at level 3 plus the full 100-cell sweep on
a 112x112 image, per backend, and verifies the outputs stay byte
identical while doing so.

Run:  python benchmarks/bench_backends.py [--size 112] [--repeat 3]
"""

import argparse
import time

import numpy as np

from oodbench import _backend
from oodbench.corruptions import apply_corruption
from oodbench.params import KIND_NAMES


def make_image(size: int) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size]
    checker = ((xx // 8 + yy // 8) % 2) * 40
    return np.stack(
        [(xx * 2 + checker) % 256, (yy * 2 + checker) % 256, ((xx + yy) * 1.3) % 256],
        axis=-1,
    ).astype(np.uint8)


def bench_kind(img, kind, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = apply_corruption(img, kind, 3, 42)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=112)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _backend.compiled_available():
        print("compiled backend not built; nothing to compare")
        return

    img = make_image(args.size)
    results = {}
    for backend in ("compiled", "python"):
        _backend.use_backend(backend)
        results[backend] = {k: bench_kind(img, k, args.repeat) for k in KIND_NAMES}

    print(f"{'kind':22s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}  identical")
    total_c = total_p = 0.0
    for kind in KIND_NAMES:
        tc, oc = results["compiled"][kind]
        tp, op = results["python"][kind]
        total_c += tc
        total_p += tp
        same = np.array_equal(oc, op)
        print(f"{kind:22s} {tc * 1e3:9.2f}ms {tp * 1e3:9.2f}ms {tp / tc:7.1f}x  {same}")
        assert same, f"backend outputs diverge for {kind}"
    print(f"{'TOTAL (level 3)':22s} {total_c * 1e3:9.2f}ms {total_p * 1e3:9.2f}ms {total_p / total_c:7.1f}x")

    for backend in ("compiled", "python"):
        _backend.use_backend(backend)
        t0 = time.perf_counter()
        for kind in KIND_NAMES:
            for level in (1, 2, 3, 4, 5):
                apply_corruption(img, kind, level, 42)
        print(f"full 100-cell sweep [{backend}]: {time.perf_counter() - t0:.2f}s")
    _backend.use_backend("auto")


if __name__ == "__main__":
    main()
