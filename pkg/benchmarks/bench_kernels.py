"""Benchmark: compiled vs pure-Python polynomial kernel.

Times the two hot operations (sparse product, Poisson bracket) on the
workloads the identity suite actually generates: dense-coefficient
random polynomials of bounded degree, including the large intermediates
that appear inside triple-nested identities.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from hamalg.kernels import poly_py

try:
    from hamalg.kernels import poly_cy
except ImportError:
    poly_cy = None

from hamalg.elements import monomials_up_to_degree


def random_poly(rng, num_pairs, degree):
    return {e: rng.uniform(-1.0, 1.0)
            for e in monomials_up_to_degree(2 * num_pairs, degree)}


def timeit(fn, *args, repeat=5):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    rng = np.random.default_rng(0)
    cases = [
        ("1 pair, deg 3 x deg 3", 1, 3, 3),
        ("2 pairs, deg 3 x deg 3", 2, 3, 3),
        ("2 pairs, deg 6 x deg 6", 2, 6, 6),
        ("3 pairs, deg 4 x deg 4", 3, 4, 4),
    ]
    backends = [("python", poly_py)] + ([("cython", poly_cy)] if poly_cy else [])
    print(f"{'case':<26} {'op':<8}" + "".join(f"{name:>12}" for name, _ in backends)
          + ("     speedup" if poly_cy else ""))
    for label, pairs, d1, d2 in cases:
        a = random_poly(rng, pairs, d1)
        b = random_poly(rng, pairs, d2)
        for op in ("mul", "poisson"):
            times = []
            results = []
            for _, mod in backends:
                fn = getattr(mod, op)
                arg = 2 * pairs if op == "mul" else pairs
                t, r = timeit(fn, a, b, arg)
                times.append(t)
                results.append(r)
            if len(results) == 2:
                keys = set(results[0]) | set(results[1])
                worst = max(abs(results[0].get(k, 0.0) - results[1].get(k, 0.0))
                            for k in keys)
                assert worst < 1e-12, f"backend mismatch on {label}/{op}: {worst}"
            row = f"{label:<26} {op:<8}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>10.1f}x"
            print(row)


if __name__ == "__main__":
    main()
