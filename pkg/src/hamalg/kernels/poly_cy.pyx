# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse polynomial kernel.

Same API and semantics as hamalg.kernels.poly_py, tuned for the inner
loops of nested identity checks: exponent tuples are packed into single
integers (16 bits per variable) so that the pairwise term loop does one
integer add and one dict update per product term instead of building
tuples element by element.

16 bits per variable bounds each exponent at 65535, far above anything a
triple-nested product of the default degree-3 random polynomials reaches.
"""

EXP_BITS = 16
_MASK = (1 << EXP_BITS) - 1


cdef object _pack(tuple e, Py_ssize_t nvars):
    cdef object key = 0
    cdef Py_ssize_t i
    for i in range(nvars):
        key = (key << EXP_BITS) | <long> e[i]
    return key


cdef tuple _unpack(object key, Py_ssize_t nvars):
    cdef list out = [0] * nvars
    cdef Py_ssize_t i
    for i in range(nvars - 1, -1, -1):
        out[i] = key & _MASK
        key = key >> EXP_BITS
    return tuple(out)


cdef dict _pack_poly(dict a, Py_ssize_t nvars):
    cdef dict out = {}
    for e, c in a.items():
        out[_pack(<tuple> e, nvars)] = c
    return out


def mul(dict a, dict b, Py_ssize_t nvars):
    """Exact product of two sparse polynomials (no degree truncation)."""
    cdef dict pa = _pack_poly(a, nvars)
    cdef dict pb = _pack_poly(b, nvars)
    cdef dict acc = {}
    cdef double ca, cb, c
    for ka, va in pa.items():
        ca = <double> va
        for kb, vb in pb.items():
            key = ka + kb
            prev = acc.get(key)
            if prev is None:
                acc[key] = ca * (<double> vb)
            else:
                acc[key] = (<double> prev) + ca * (<double> vb)
    cdef dict out = {}
    for key, v in acc.items():
        c = <double> v
        if c != 0.0:
            out[_unpack(key, nvars)] = c
    return out


def poisson(dict a, dict b, Py_ssize_t num_pairs):
    """Poisson bracket sum_k (df/dx_k dg/dp_k - df/dp_k dg/dx_k)."""
    cdef Py_ssize_t nvars = 2 * num_pairs
    cdef dict pa = _pack_poly(a, nvars)
    cdef dict pb = _pack_poly(b, nvars)
    # per-pair bit shifts for x_k / p_k, plus the packed decrement of one
    # x_k and one p_k; deltas stay Python ints so wide shifts cannot
    # overflow C arithmetic
    cdef list shifts_x = [(nvars - 1 - 2 * k) * EXP_BITS for k in range(num_pairs)]
    cdef list shifts_p = [(nvars - 2 - 2 * k) * EXP_BITS for k in range(num_pairs)]
    cdef list deltas = [(1 << sx) + (1 << sp) for sx, sp in zip(shifts_x, shifts_p)]
    cdef dict acc = {}
    cdef double ca, cb, c
    cdef long wx, wp, w
    cdef Py_ssize_t k
    for ka, va in pa.items():
        ca = <double> va
        for kb, vb in pb.items():
            cb = <double> vb
            for k in range(num_pairs):
                sx = shifts_x[k]
                sp = shifts_p[k]
                wx = <long> ((ka >> sx) & _MASK) * <long> ((kb >> sp) & _MASK)
                wp = <long> ((ka >> sp) & _MASK) * <long> ((kb >> sx) & _MASK)
                w = wx - wp
                if w == 0:
                    continue
                key = ka + kb - deltas[k]
                c = ca * cb * w
                prev = acc.get(key)
                if prev is None:
                    acc[key] = c
                else:
                    acc[key] = (<double> prev) + c
    cdef dict out = {}
    for key, v in acc.items():
        c = <double> v
        if c != 0.0:
            out[_unpack(key, nvars)] = c
    return out
