"""Compare the compiled kernel core against the pure-numpy fallback.

Usage: python benchmarks/kernel_backends.py [--repeats N]

Times the direct power sums and the log-domain sums over a grid of problem
shapes spanning the low-dimensional synthetic regime and the wide embedding
regime, and reports the native/python speed ratio plus the worst relative
disagreement between the two implementations.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sidmetrics import backend

SHAPES = [
    # (queries, centers, dim)  -- sweeps at 2-D, mid, and embedding width
    (128, 500, 2),
    (128, 5000, 2),
    (128, 500, 64),
    (128, 5000, 2048),
    (32, 1000, 3072),
]


def run_once(impl, fn_name, x, c, p):
    fn = getattr(impl, fn_name)
    start = time.perf_counter()
    out = fn(x, c, p, 1.0, 1e-12)
    return time.perf_counter() - start, out


def bench(fn_name: str, p: float, repeats: int) -> None:
    print(f"\n{fn_name} (p={p:g})")
    print(f"{'shape':>22} {'python':>10} {'native':>10} {'speedup':>8} {'rel diff':>10}")
    rng = np.random.default_rng(0)
    for m, n, d in SHAPES:
        x = rng.standard_normal((m, d))
        c = rng.standard_normal((n, d))
        times = {}
        outs = {}
        for name in backend.available_backends():
            impl = backend.get(name)
            run_once(impl, fn_name, x[:2], c[:16], p)  # warm up
            best = min(run_once(impl, fn_name, x, c, p)[0] for _ in range(repeats))
            times[name] = best
            outs[name] = run_once(impl, fn_name, x, c, p)[1]
        if len(times) < 2:
            print(f"{f'{m}x{n}x{d}':>22} native backend not built; nothing to compare")
            return
        scale = np.abs(outs["python"]).max()
        rel = float(np.abs(outs["python"] - outs["native"]).max() / max(scale, 1e-300))
        speed = times["python"] / times["native"]
        print(
            f"{f'{m}x{n}x{d}':>22} {times['python'] * 1e3:>8.2f}ms {times['native'] * 1e3:>8.2f}ms"
            f" {speed:>7.2f}x {rel:>10.2e}"
        )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    print(f"backends available: {backend.available_backends()}")
    bench("power_sums", -1.0, args.repeats)
    bench("power_sums", -3.0, args.repeats)
    bench("log_power_sums", -2000.0, args.repeats)


if __name__ == "__main__":
    main()
