"""Restriction of composed products to their components, and the
resulting pin on the quantum constant.

Restricting the composed bracket to one component (other factor held at
its unit) always yields a scalar multiple of that component's bracket;
the scalar is sqrt(a_k / a12).  The standard restriction requirement --
that a composed product restrict to the component product with unit
factor -- therefore forces a1 = a12 and a2 = a12: one constant for every
composable pair.

The factor is measured numerically by a least-squares fit over random
embedded pairs, so the scaling law itself is validated rather than
assumed; the closed form enters only as the expected value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import OperatorAlgebra
from .compose import ComposedAlgebra, simple_tensor
from .errors import AlgebraError
from .serialize import canon_float

DEFAULT_FACTOR_TOLERANCE = 1e-8
FIT_RESIDUAL_TOLERANCE = 1e-10
MIN_FIT_PAIRS = 8


@dataclass
class RestrictionResult:
    component: str           # "left" or "right"
    product: str             # "alpha" or "sigma"
    measured_factor: float
    expected_factor: float
    fit_residual: float      # relative to the reference magnitude
    satisfies_requirement: bool

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "product": self.product,
            "measured_factor": canon_float(self.measured_factor),
            "expected_factor": canon_float(self.expected_factor),
            "fit_residual": canon_float(self.fit_residual),
            "satisfies_requirement": self.satisfies_requirement,
        }


def _require_qq(c: ComposedAlgebra):
    if c.kind != "qq" or c.a1 <= 0 or c.a2 <= 0:
        raise AlgebraError("restriction analysis needs quantum (x) quantum with "
                           "positive constants")


def _restrict_fit(c: ComposedAlgebra, component: str, product: str,
                  n_pairs: int, seed: int, tolerance: float) -> RestrictionResult:
    """Least-squares scalar lambda with composed(f (x) e, g (x) e) =
    lambda * (component product)(f, g) (x) e, over >= n_pairs random
    draws.  A residual above tolerance means the restricted product is
    not proportional to the embedded one, which is an internal error."""
    _require_qq(c)
    if component == "left":
        comp, other = c.left, c.right
        expected = np.sqrt(c.a1 / c.a12) if product == "alpha" else 1.0
    elif component == "right":
        comp, other = c.right, c.left
        expected = np.sqrt(c.a2 / c.a12) if product == "alpha" else 1.0
    else:
        raise AlgebraError(f"component must be 'left' or 'right', got {component!r}")

    def embed(f):
        return (simple_tensor(f, other.unit()) if component == "left"
                else simple_tensor(other.unit(), f))

    composed_op = c.alpha if product == "alpha" else c.sigma
    component_op = comp.alpha if product == "alpha" else comp.sigma

    rng = np.random.default_rng(seed)
    num = 0.0
    den = 0.0
    samples = []
    drawn = 0
    while drawn < max(n_pairs, MIN_FIT_PAIRS):
        f, g = comp.random_element(rng), comp.random_element(rng)
        ref = embed(component_op(f, g))
        scale = 1.0 + f.norm() * g.norm()
        if ref.norm() < 1e-12 * scale:
            continue  # degenerate pair (component bracket vanished): resample
        val = composed_op(embed(f), embed(g))
        num += float(np.real(np.vdot(ref.entries, val.entries)))
        den += float(np.real(np.vdot(ref.entries, ref.entries)))
        samples.append((ref, val))
        drawn += 1
    lam = num / den
    resid_sq = sum((val - ref.scale(lam)).norm() ** 2 for ref, val in samples)
    ref_sq = sum(ref.norm() ** 2 for ref, _ in samples)
    residual = np.sqrt(resid_sq) / np.sqrt(ref_sq)
    if residual > FIT_RESIDUAL_TOLERANCE:
        raise AlgebraError(
            f"restricted {product} is not proportional to the component product "
            f"(residual {residual:.3e}); composition is inconsistent"
        )
    return RestrictionResult(
        component=component,
        product=product,
        measured_factor=lam,
        expected_factor=float(expected),
        fit_residual=float(residual),
        satisfies_requirement=abs(lam - 1.0) <= tolerance,
    )


def restrict_alpha(c: ComposedAlgebra, component: str, n_pairs: int = MIN_FIT_PAIRS,
                   seed: int = 0,
                   tolerance: float = DEFAULT_FACTOR_TOLERANCE) -> RestrictionResult:
    """Scaling factor of the composed bracket on one component."""
    return _restrict_fit(c, component, "alpha", n_pairs, seed, tolerance)


def restrict_sigma(c: ComposedAlgebra, component: str, n_pairs: int = MIN_FIT_PAIRS,
                   seed: int = 0,
                   tolerance: float = DEFAULT_FACTOR_TOLERANCE) -> RestrictionResult:
    """Scaling factor of the composed symmetric product on one component;
    unit for all constants (the cross term dies on embedded pairs because
    the bracket of the unit with itself vanishes)."""
    return _restrict_fit(c, component, "sigma", n_pairs, seed, tolerance)


def uniqueness_check(a1: float, a2: float, a12: float,
                     tolerance: float = DEFAULT_FACTOR_TOLERANCE,
                     dims: tuple = (2, 2), n_pairs: int = MIN_FIT_PAIRS,
                     seed: int = 0) -> dict:
    """Verdict on one constant triple: passes iff both restriction
    factors are unit within tolerance, i.e. iff a1 = a12 = a2."""
    if min(a1, a2, a12) <= 0:
        raise AlgebraError("uniqueness analysis needs positive constants")
    c = ComposedAlgebra(OperatorAlgebra(dims[0], hbar=2.0 * np.sqrt(a1)),
                        OperatorAlgebra(dims[1], hbar=2.0 * np.sqrt(a2)),
                        a12=a12)
    left = restrict_alpha(c, "left", n_pairs, seed, tolerance)
    right = restrict_alpha(c, "right", n_pairs, seed + 1, tolerance)
    return {
        "a1": canon_float(a1),
        "a2": canon_float(a2),
        "a12": canon_float(a12),
        "left": left.to_json(),
        "right": right.to_json(),
        "passed": left.satisfies_requirement and right.satisfies_requirement,
    }


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def scan_constants(values, tolerance: float = DEFAULT_FACTOR_TOLERANCE,
                   dims: tuple = (2, 2), n_pairs: int = MIN_FIT_PAIRS,
                   seed: int = 0) -> list:
    """Verdict table over a grid: every (a1, a2, a12) triple from
    `values` if it is a flat list, or the triples themselves if given."""
    values = list(values)
    if values and not np.iterable(values[0]):
        triples = [(a1, a2, a12) for a1 in values for a2 in values for a12 in values]
    else:
        triples = [tuple(v) for v in values]
    return [uniqueness_check(a1, a2, a12, tolerance, dims, n_pairs, seed)
            for a1, a2, a12 in triples]
