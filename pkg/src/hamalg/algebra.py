"""Hamilton algebras: two-product algebras with a symmetric (Jordan-type)
product ``sigma`` and an antisymmetric (Lie-type) bracket ``alpha``,
classified by a quantum constant a >= 0.

Concrete realizations:

* :class:`OperatorAlgebra` (a > 0): Hermitian matrices with
  sigma(f, g) = (fg + gf)/2 and alpha(f, g) = (fg - gf)/(i*hbar),
  hbar = 2*sqrt(a).
* :class:`PhaseSpaceAlgebra` (a = 0): phase-space polynomials with the
  pointwise product and the Poisson bracket.

The complexified envelope product tau = sigma + sqrt(-a)*alpha is
associative; sigma and alpha are recovered from tau as its symmetric and
antisymmetric parts.
"""

from __future__ import annotations

import math

import numpy as np

from .elements import (
    OperatorElement,
    PhaseSpacePoly,
    QuantumConstant,
    monomials_up_to_degree,
)
from .errors import AlgebraError

# Default sweep used by the verification suites.
DEFAULT_OPERATOR_DIMS = (2, 3, 4, 6)
DEFAULT_HBARS = (1.0, 2.0, 0.5)
DEFAULT_RANDOM_DEGREE = 3


def relative_defect(diff_norm: float, arg_norms) -> float:
    """Defect normalization: ||LHS - RHS|| / (1 + prod of argument norms)."""
    scale = 1.0
    for n in arg_norms:
        scale *= n
    return diff_norm / (1.0 + scale)


class HamiltonAlgebra:
    """Common surface shared by all realizations.

    Subclasses provide sigma, alpha, unit, zero and random_element; the
    envelope product and the operations derived from it live here.
    """

    constant: QuantumConstant

    def __init__(self, constant: QuantumConstant, rng_seed: int = 0):
        self.constant = constant
        self.rng_seed = int(rng_seed)

    # -- products -----------------------------------------------------

    def sigma(self, f, g):
        raise NotImplementedError

    def alpha(self, f, g):
        raise NotImplementedError

    def tau(self, f, g):
        """Envelope product sigma + sqrt(-a)*alpha, with sqrt(-a) = i*hbar/2."""
        s = self.sigma(f, g)
        if self.constant.is_classical:
            return s
        return s + self.alpha(f, g).scale(0.5j * self.constant.hbar)

    def derive_products_from_tau(self, f, g):
        """Recover (sigma, alpha) as the symmetric/antisymmetric parts of tau.

        Only defined for a > 0: the antisymmetric part carries a factor
        1/(2*sqrt(-a)).
        """
        if self.constant.is_classical:
            raise AlgebraError("product recovery from tau needs a > 0")
        tfg = self.tau(f, g)
        tgf = self.tau(g, f)
        sig = (tfg + tgf).scale(0.5)
        alp = (tfg - tgf).scale(1.0 / (1j * self.constant.hbar))
        return sig, alp

    def associator_sigma(self, f, g, h):
        """(f sigma g) sigma h - f sigma (g sigma h)."""
        return self.sigma(self.sigma(f, g), h) - self.sigma(f, self.sigma(g, h))

    # -- elements -----------------------------------------------------

    def unit(self):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def random_element(self, rng: np.random.Generator):
        raise NotImplementedError

    def default_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)

    def describe(self) -> dict:
        raise NotImplementedError


class OperatorAlgebra(HamiltonAlgebra):
    """Quantum realization on dim x dim Hermitian matrices."""

    def __init__(self, dim: int, hbar: float = 1.0, rng_seed: int = 0):
        if dim < 1:
            raise AlgebraError(f"dim must be >= 1, got {dim}")
        constant = QuantumConstant.from_hbar(hbar)
        if constant.is_classical:
            raise AlgebraError("operator realization needs a > 0 (hbar > 0)")
        super().__init__(constant, rng_seed)
        self.dim = int(dim)

    def sigma(self, f: OperatorElement, g: OperatorElement) -> OperatorElement:
        f._check_like(g)
        if f.dim != self.dim:
            raise AlgebraError(f"element dim {f.dim} does not match algebra dim {self.dim}")
        return OperatorElement._trusted(
            0.5 * (f.entries @ g.entries + g.entries @ f.entries),
            f.hermitian and g.hermitian)

    def alpha(self, f: OperatorElement, g: OperatorElement) -> OperatorElement:
        f._check_like(g)
        if f.dim != self.dim:
            raise AlgebraError(f"element dim {f.dim} does not match algebra dim {self.dim}")
        hbar = self.constant.hbar
        return OperatorElement._trusted(
            (f.entries @ g.entries - g.entries @ f.entries) / (1j * hbar),
            f.hermitian and g.hermitian)

    def unit(self) -> OperatorElement:
        return OperatorElement.identity(self.dim)

    def zero(self) -> OperatorElement:
        return OperatorElement.zero(self.dim)

    def random_element(self, rng: np.random.Generator) -> OperatorElement:
        m = rng.standard_normal((self.dim, self.dim)) + 1j * rng.standard_normal(
            (self.dim, self.dim)
        )
        return OperatorElement(0.5 * (m + m.conj().T), hermitian=True)

    def describe(self) -> dict:
        return {
            "realization": "operator",
            "dim": self.dim,
            "a": self.constant.a,
            "hbar": self.constant.hbar,
        }


class PhaseSpaceAlgebra(HamiltonAlgebra):
    """Classical realization (a = 0) on phase-space polynomials."""

    def __init__(self, num_pairs: int, max_random_degree: int = DEFAULT_RANDOM_DEGREE,
                 rng_seed: int = 0):
        super().__init__(QuantumConstant(0.0), rng_seed)
        if num_pairs < 1:
            raise AlgebraError(f"num_pairs must be >= 1, got {num_pairs}")
        if max_random_degree < 0:
            raise AlgebraError(f"max_random_degree must be >= 0, got {max_random_degree}")
        self.num_pairs = int(num_pairs)
        self.max_random_degree = int(max_random_degree)

    def sigma(self, f: PhaseSpacePoly, g: PhaseSpacePoly) -> PhaseSpacePoly:
        if f.num_pairs != self.num_pairs:
            raise AlgebraError(
                f"element num_pairs {f.num_pairs} does not match algebra {self.num_pairs}"
            )
        return f.product(g)

    def alpha(self, f: PhaseSpacePoly, g: PhaseSpacePoly) -> PhaseSpacePoly:
        if f.num_pairs != self.num_pairs:
            raise AlgebraError(
                f"element num_pairs {f.num_pairs} does not match algebra {self.num_pairs}"
            )
        return f.poisson(g)

    def unit(self) -> PhaseSpacePoly:
        return PhaseSpacePoly.unit(self.num_pairs)

    def zero(self) -> PhaseSpacePoly:
        return PhaseSpacePoly.zero(self.num_pairs)

    def random_element(self, rng: np.random.Generator) -> PhaseSpacePoly:
        terms = {}
        for e in monomials_up_to_degree(2 * self.num_pairs, self.max_random_degree):
            terms[e] = rng.uniform(-1.0, 1.0)
        return PhaseSpacePoly(self.num_pairs, terms)

    def describe(self) -> dict:
        return {
            "realization": "phase-space",
            "num_pairs": self.num_pairs,
            "max_random_degree": self.max_random_degree,
            "a": 0.0,
        }


class CorruptedAlgebra(HamiltonAlgebra):
    """Wrapper that rescales the products of a base algebra.

    Used by the suite-sensitivity checks: a scaled bracket must make the
    canonical-relation check fail loudly, proving the suite is not
    vacuously green.
    """

    def __init__(self, base: HamiltonAlgebra, alpha_scale: float = 1.0,
                 sigma_scale: float = 1.0):
        super().__init__(base.constant, base.rng_seed)
        self.base = base
        self.alpha_scale = float(alpha_scale)
        self.sigma_scale = float(sigma_scale)

    def sigma(self, f, g):
        return self.base.sigma(f, g).scale(self.sigma_scale)

    def alpha(self, f, g):
        return self.base.alpha(f, g).scale(self.alpha_scale)

    def unit(self):
        return self.base.unit()

    def zero(self):
        return self.base.zero()

    def random_element(self, rng, **kwargs):
        return self.base.random_element(rng, **kwargs)

    def describe(self) -> dict:
        d = dict(self.base.describe())
        d["corruption"] = {"alpha_scale": self.alpha_scale, "sigma_scale": self.sigma_scale}
        return d


def centrality_report(alg: OperatorAlgebra, rtol: float = 1e-10) -> dict:
    """Check that the bracket-commutant of the full matrix algebra is the
    span of the unit: alpha(f, x) = 0 for all f forces x = c*e.

    Computed as the nullspace of x -> [stack of alpha(E_ij, x)] over the
    matrix-unit basis.  Only meaningful for the full matrix realization;
    the result is reported, not assumed elsewhere.
    """
    d = alg.dim
    rows = []
    for i in range(d):
        for j in range(d):
            basis = np.zeros((d, d), dtype=np.complex128)
            basis[i, j] = 1.0
            # action of x -> (basis x - x basis) as a d^2 x d^2 matrix
            op = np.kron(basis, np.eye(d)) - np.kron(np.eye(d), basis.T)
            rows.append(op)
    full = np.vstack(rows)
    svals = np.linalg.svd(full, compute_uv=False)
    tol = rtol * svals[0]
    nullity = int(np.sum(svals <= tol))
    _, _, vh = np.linalg.svd(full)
    kernel_vec = vh[-1].reshape(d, d)
    # kernel vector should be proportional to the identity
    coeff = np.trace(kernel_vec) / d
    off_identity = float(np.linalg.norm(kernel_vec - coeff * np.eye(d)))
    return {
        "dim": d,
        "nullity": nullity,
        "kernel_off_identity_norm": off_identity,
        "central": nullity == 1 and off_identity <= 1e-10,
    }
