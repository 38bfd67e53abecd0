"""Pure-Python sparse polynomial kernel.

Polynomials are finite maps from exponent tuples to real coefficients.
The exponent tuple lists the canonical variables in the order
(x1, p1, x2, p2, ...), so a polynomial over ``num_pairs`` canonical pairs
uses tuples of length ``2 * num_pairs``.

This module is the reference semantics for the kernel API; a compiled
Cython twin (:mod:`hamalg.kernels.poly_cy`) implements the same two
functions and is preferred at import time when available.
"""

from __future__ import annotations

BACKEND = "python"


def mul(a: dict, b: dict, nvars: int) -> dict:
    """Exact product of two sparse polynomials (no degree truncation)."""
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            ec = tuple(ea[i] + eb[i] for i in range(nvars))
            out[ec] = out.get(ec, 0.0) + ca * cb
    return {e: c for e, c in out.items() if c != 0.0}


def poisson(a: dict, b: dict, num_pairs: int) -> dict:
    """Poisson bracket sum_k (df/dx_k dg/dp_k - df/dp_k dg/dx_k).

    Both cross terms for a canonical pair k land on the same exponent
    vector (one less x_k and one less p_k than the plain product), so the
    bracket is accumulated pairwise with a single combined coefficient.
    """
    out: dict = {}
    nvars = 2 * num_pairs
    for ea, ca in a.items():
        for eb, cb in b.items():
            for k in range(num_pairs):
                ix, ip = 2 * k, 2 * k + 1
                w = ea[ix] * eb[ip] - ea[ip] * eb[ix]
                if w == 0:
                    continue
                ec = tuple(
                    ea[i] + eb[i] - (1 if i in (ix, ip) else 0)
                    for i in range(nvars)
                )
                out[ec] = out.get(ec, 0.0) + ca * cb * w
    return {e: c for e, c in out.items() if c != 0.0}
