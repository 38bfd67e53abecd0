"""Tensor-product composition of Hamilton algebras.

Two component algebras with constants a1, a2 compose into an algebra on
the tensor space with a free constant a12.  On simple tensors the
composed products are

    sigma12(f1 (x) f2, g1 (x) g2) = (f sigma g)1 (x) (f sigma g)2
                                    - sqrt(a1*a2) (f alpha g)1 (x) (f alpha g)2
    alpha12(f1 (x) f2, g1 (x) g2) = sqrt(a1/a12) (f alpha g)1 (x) (f sigma g)2
                                    + sqrt(a2/a12) (f sigma g)1 (x) (f alpha g)2

and extend bilinearly to sums of simple tensors.  Composed elements are
stored in canonical forms (a Kronecker matrix, or a polynomial with
matrix coefficients) so equality and norms are well defined; the
products below are the bilinear extensions computed directly on those
canonical forms.  The envelope product tau12 is implemented as an
independent route (plain associative multiplication of canonical forms)
and serves as a cross-check against the sigma/alpha composition path.

Supported pairings: quantum (x) quantum, quantum (x) classical, and
classical (x) classical.  The classical pair composes to an ordinary
phase-space algebra on the disjoint union of canonical pairs.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import HamiltonAlgebra, OperatorAlgebra, PhaseSpaceAlgebra
from .elements import (
    OperatorElement,
    PhaseSpacePoly,
    QuantumConstant,
    is_hermitian,
)
from .errors import AlgebraError, ShapeError


class KroneckerElement:
    """Element of quantum (x) quantum: a (l*r) x (l*r) complex matrix in
    Kronecker layout, entry [(i1*r + i2), (j1*r + j2)] = A[i1,j1] B[i2,j2]
    on simple tensors."""

    __slots__ = ("left_dim", "right_dim", "entries", "hermitian")

    def __init__(self, left_dim: int, right_dim: int, entries, hermitian: bool | None = None):
        arr = np.array(entries, dtype=np.complex128, copy=True)
        n = left_dim * right_dim
        if arr.shape != (n, n):
            raise ShapeError(f"expected shape {(n, n)}, got {arr.shape}")
        arr.setflags(write=False)
        if hermitian is None:
            hermitian = is_hermitian(arr)
        elif hermitian and not is_hermitian(arr):
            raise AlgebraError("entries flagged Hermitian but are not (beyond tolerance)")
        self.left_dim = int(left_dim)
        self.right_dim = int(right_dim)
        self.entries = arr
        self.hermitian = bool(hermitian)

    @classmethod
    def _trusted(cls, left_dim: int, right_dim: int, entries: np.ndarray,
                 hermitian: bool) -> "KroneckerElement":
        """Internal constructor for derived values; skips re-validation
        (see OperatorElement._trusted for why)."""
        self = object.__new__(cls)
        arr = np.asarray(entries, dtype=np.complex128)
        if arr.flags.writeable:
            arr.setflags(write=False)
        self.left_dim = int(left_dim)
        self.right_dim = int(right_dim)
        self.entries = arr
        self.hermitian = hermitian
        return self

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def _check_like(self, other: "KroneckerElement"):
        if not isinstance(other, KroneckerElement):
            raise ShapeError(f"expected KroneckerElement, got {type(other).__name__}")
        if (other.left_dim, other.right_dim) != (self.left_dim, self.right_dim):
            raise ShapeError("component dimensions mismatch")

    def __add__(self, other):
        self._check_like(other)
        return KroneckerElement._trusted(self.left_dim, self.right_dim,
                                         self.entries + other.entries,
                                         self.hermitian and other.hermitian)

    def __sub__(self, other):
        self._check_like(other)
        return KroneckerElement._trusted(self.left_dim, self.right_dim,
                                         self.entries - other.entries,
                                         self.hermitian and other.hermitian)

    def __neg__(self):
        return self.scale(-1.0)

    def scale(self, c: complex):
        herm = self.hermitian and complex(c).imag == 0.0
        return KroneckerElement._trusted(self.left_dim, self.right_dim,
                                         c * self.entries, herm)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __repr__(self):
        return (f"KroneckerElement({self.left_dim}x{self.right_dim}, "
                f"hermitian={self.hermitian})")


class HybridElement:
    """Element of quantum (x) classical: a polynomial in the classical
    canonical pairs whose coefficients are dim x dim complex matrices.

    The Hermitian flag means every matrix coefficient is Hermitian, i.e.
    the element is an observable-valued function.  Zero coefficients are
    never stored.
    """

    __slots__ = ("dim", "num_pairs", "terms", "hermitian")

    def __init__(self, dim: int, num_pairs: int, terms: dict | None = None,
                 hermitian: bool | None = None):
        if dim < 1 or num_pairs < 1:
            raise ShapeError(f"invalid dim={dim} / num_pairs={num_pairs}")
        self.dim = int(dim)
        self.num_pairs = int(num_pairs)
        nvars = 2 * self.num_pairs
        clean: dict = {}
        for exps, mat in (terms or {}).items():
            e = tuple(int(v) for v in exps)
            if len(e) != nvars or any(v < 0 for v in e):
                raise ShapeError(f"exponent tuple {exps} invalid for {nvars} variables")
            arr = np.array(mat, dtype=np.complex128, copy=True)
            if arr.shape != (dim, dim):
                raise ShapeError(f"coefficient at {exps} has shape {arr.shape}")
            if np.any(arr != 0):
                arr.setflags(write=False)
                clean[e] = arr
        self.terms = clean
        if hermitian is None:
            hermitian = all(is_hermitian(m) for m in clean.values())
        elif hermitian and not all(is_hermitian(m) for m in clean.values()):
            raise AlgebraError("terms flagged Hermitian but some coefficient is not")
        self.hermitian = bool(hermitian)

    @classmethod
    def _trusted(cls, dim: int, num_pairs: int, terms: dict,
                 hermitian: bool) -> "HybridElement":
        """Internal constructor for derived values: prunes exact zeros but
        skips per-coefficient Hermitian re-validation."""
        self = object.__new__(cls)
        self.dim = int(dim)
        self.num_pairs = int(num_pairs)
        clean = {}
        for e, mat in terms.items():
            arr = np.asarray(mat, dtype=np.complex128)
            if np.any(arr != 0):
                if arr.flags.writeable:
                    arr.setflags(write=False)
                clean[e] = arr
        self.terms = clean
        self.hermitian = hermitian
        return self

    @property
    def nvars(self) -> int:
        return 2 * self.num_pairs

    def norm(self) -> float:
        return math.sqrt(sum(float(np.linalg.norm(m)) ** 2 for m in self.terms.values()))

    def _check_like(self, other: "HybridElement"):
        if not isinstance(other, HybridElement):
            raise ShapeError(f"expected HybridElement, got {type(other).__name__}")
        if (other.dim, other.num_pairs) != (self.dim, self.num_pairs):
            raise ShapeError("dim/num_pairs mismatch")

    def __add__(self, other):
        self._check_like(other)
        out = dict(self.terms)
        for e, m in other.terms.items():
            out[e] = out[e] + m if e in out else m
        return HybridElement._trusted(self.dim, self.num_pairs, out,
                                      self.hermitian and other.hermitian)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def __neg__(self):
        return self.scale(-1.0)

    def scale(self, c: complex):
        herm = self.hermitian and complex(c).imag == 0.0
        return HybridElement._trusted(self.dim, self.num_pairs,
                                      {e: c * m for e, m in self.terms.items()}, herm)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def partial(self, var: int) -> "HybridElement":
        """Derivative with respect to canonical variable index var
        (0-based in the order x1, p1, x2, p2, ...)."""
        out = {}
        for e, m in self.terms.items():
            if e[var] == 0:
                continue
            de = list(e)
            de[var] -= 1
            out[tuple(de)] = e[var] * m
        return HybridElement._trusted(self.dim, self.num_pairs, out, False)

    def assoc_product(self, other: "HybridElement") -> "HybridElement":
        """Associative product: matrix coefficients multiply in written
        order, classical monomials multiply commutatively."""
        self._check_like(other)
        out: dict = {}
        for ea, ma in self.terms.items():
            for eb, mb in other.terms.items():
                ec = tuple(a + b for a, b in zip(ea, eb))
                prod = ma @ mb
                if ec in out:
                    out[ec] = out[ec] + prod
                else:
                    out[ec] = prod
        return HybridElement._trusted(self.dim, self.num_pairs, out, False)

    def classical_poly(self) -> PhaseSpacePoly | None:
        """If every coefficient is a real multiple of the identity, return
        the underlying scalar polynomial; otherwise None."""
        terms = {}
        eye = np.eye(self.dim)
        for e, m in self.terms.items():
            c = complex(np.trace(m)) / self.dim
            if np.linalg.norm(m - c * eye) > 1e-12 * max(1.0, np.linalg.norm(m)) or abs(c.imag) > 1e-14:
                return None
            terms[e] = c.real
        return PhaseSpacePoly(self.num_pairs, terms)

    def __repr__(self):
        return (f"HybridElement(dim={self.dim}, num_pairs={self.num_pairs}, "
                f"nterms={len(self.terms)}, hermitian={self.hermitian})")


# ---------------------------------------------------------------------------
# simple tensors and the switching map
# ---------------------------------------------------------------------------

def simple_tensor(f, g):
    """Embed a pair of component elements as a canonical tensor element.

    quantum (x) quantum   -> KroneckerElement
    quantum (x) classical -> HybridElement
    classical (x) classical -> PhaseSpacePoly on the disjoint variables
    """
    if isinstance(f, OperatorElement) and isinstance(g, OperatorElement):
        return KroneckerElement._trusted(f.dim, g.dim, np.kron(f.entries, g.entries),
                                         f.hermitian and g.hermitian)
    if isinstance(f, OperatorElement) and isinstance(g, PhaseSpacePoly):
        return HybridElement._trusted(f.dim, g.num_pairs,
                                      {e: c * f.entries for e, c in g.terms.items()},
                                      f.hermitian)
    if isinstance(f, PhaseSpacePoly) and isinstance(g, PhaseSpacePoly):
        terms = {}
        for ea, ca in f.terms.items():
            for eb, cb in g.terms.items():
                terms[ea + eb] = ca * cb
        return PhaseSpacePoly(f.num_pairs + g.num_pairs, terms)
    raise AlgebraError(
        f"unsupported tensor pairing {type(f).__name__} (x) {type(g).__name__}; "
        "put the quantum factor on the left"
    )


def switching_map(u_terms, v_terms):
    """Reorder the pairing of two sums of simple tensors.

    Inputs are term lists [(f1, f2), ...] and [(g1, g2), ...]; the output
    pairs factors side by side: [((f1, g1), (f2, g2)), ...] for every
    combination of a u-term with a v-term (bilinearity).
    """
    return [((f1, g1), (f2, g2)) for (f1, f2) in u_terms for (g1, g2) in v_terms]


def compose_product_on_terms(op1, op2, u_terms, v_terms):
    """Literal composition route: apply component products factorwise
    across the switching map and sum the resulting simple tensors.

    op1, op2 are binary maps on the component algebras.  This is the
    definitional form of (op1 (x) op2) o S; the ComposedAlgebra methods
    compute the same bilinear extension directly on canonical forms.
    """
    out = None
    for (f1, g1), (f2, g2) in switching_map(u_terms, v_terms):
        term = simple_tensor(op1(f1, g1), op2(f2, g2))
        out = term if out is None else out + term
    if out is None:
        raise AlgebraError("empty term lists")
    return out


# ---------------------------------------------------------------------------
# the composed algebra
# ---------------------------------------------------------------------------

def _lr_table(u: KroneckerElement, v: KroneckerElement):
    """Factorwise products of two Kronecker-form elements.

    Writing L/R for left/right multiplication order in a factor, returns
    (LL, LR, RL, RR) where e.g. LR(u, v) multiplies the left factors in
    order u.v and the right factors in order v.u.  Every composed product
    is a linear combination of these four; evaluating them with einsum on
    the 4-index reshape is exactly the bilinear extension of the
    factorwise component products over matrix-unit decompositions.
    """
    l, r = u.left_dim, u.right_dim
    U = u.entries.reshape(l, r, l, r)
    V = v.entries.reshape(l, r, l, r)
    LL = u.entries @ v.entries
    RR = v.entries @ u.entries
    LR = np.einsum("iakb,kjla->ijlb", U, V).reshape(l * r, l * r)
    RL = np.einsum("iakb,kjla->ijlb", V, U).reshape(l * r, l * r)
    return LL, LR, RL, RR


class ComposedAlgebra(HamiltonAlgebra):
    """Tensor product of two Hamilton algebras with constant a12.

    a12 is a free parameter.  It must be given explicitly for
    quantum (x) quantum; for quantum (x) classical it defaults to the
    quantum component's constant; classical (x) classical requires
    a12 = 0 (the composition is the ordinary joint phase-space algebra).
    """

    def __init__(self, left: HamiltonAlgebra, right: HamiltonAlgebra,
                 a12: float | None = None, rng_seed: int = 0, max_random_terms: int = 3):
        if isinstance(left, PhaseSpaceAlgebra) and isinstance(right, OperatorAlgebra):
            raise AlgebraError("classical (x) quantum unsupported; put the quantum factor first")
        if isinstance(left, OperatorAlgebra) and isinstance(right, OperatorAlgebra):
            self.kind = "qq"
            if a12 is None:
                raise AlgebraError("quantum (x) quantum composition needs an explicit a12")
        elif isinstance(left, OperatorAlgebra) and isinstance(right, PhaseSpaceAlgebra):
            self.kind = "qc"
            if a12 is None:
                a12 = left.constant.a
        elif isinstance(left, PhaseSpaceAlgebra) and isinstance(right, PhaseSpaceAlgebra):
            self.kind = "cc"
            if a12 is None:
                a12 = 0.0
            if a12 != 0.0:
                raise AlgebraError("classical (x) classical composes to a classical algebra; "
                                   "a12 must be 0")
        else:
            raise AlgebraError(
                f"unsupported component algebras {type(left).__name__}, {type(right).__name__}"
            )
        constant = QuantumConstant(float(a12))
        if constant.is_classical and self.kind != "cc":
            raise AlgebraError("a12 must be > 0 when a component is quantum")
        super().__init__(constant, rng_seed)
        self.left = left
        self.right = right
        self.max_random_terms = int(max_random_terms)

    # -- coefficients of the composition law ---------------------------

    @property
    def a1(self) -> float:
        return self.left.constant.a

    @property
    def a2(self) -> float:
        return self.right.constant.a

    @property
    def a12(self) -> float:
        return self.constant.a

    def _check_element(self, u):
        if self.kind == "qq":
            if not isinstance(u, KroneckerElement):
                raise ShapeError(f"expected KroneckerElement, got {type(u).__name__}")
            if (u.left_dim, u.right_dim) != (self.left.dim, self.right.dim):
                raise ShapeError("element does not match component dimensions")
        elif self.kind == "qc":
            if not isinstance(u, HybridElement):
                raise ShapeError(f"expected HybridElement, got {type(u).__name__}")
            if (u.dim, u.num_pairs) != (self.left.dim, self.right.num_pairs):
                raise ShapeError("element does not match component shapes")
        else:
            if not isinstance(u, PhaseSpacePoly):
                raise ShapeError(f"expected PhaseSpacePoly, got {type(u).__name__}")
            if u.num_pairs != self.left.num_pairs + self.right.num_pairs:
                raise ShapeError("element does not match the joint variable count")

    # -- composed products ---------------------------------------------

    def sigma(self, u, v):
        self._check_element(u)
        self._check_element(v)
        herm = u.hermitian and v.hermitian if self.kind != "cc" else None
        if self.kind == "qq":
            h1, h2 = self.left.constant.hbar, self.right.constant.hbar
            LL, LR, RL, RR = _lr_table(u, v)
            sig_sig = 0.25 * (LL + LR + RL + RR)
            alp_alp = -(LL - LR - RL + RR) / (h1 * h2)
            ent = sig_sig - math.sqrt(self.a1 * self.a2) * alp_alp
            return KroneckerElement._trusted(u.left_dim, u.right_dim, ent, herm)
        if self.kind == "qc":
            # cross term carries sqrt(a1 * a2) = 0 for a classical right
            # component, so only the factorwise symmetric products remain
            out: dict = {}
            for ea, ma in u.terms.items():
                for eb, mb in v.terms.items():
                    ec = tuple(a + b for a, b in zip(ea, eb))
                    prod = 0.5 * (ma @ mb + mb @ ma)
                    out[ec] = out[ec] + prod if ec in out else prod
            return HybridElement._trusted(u.dim, u.num_pairs, out, herm)
        return u.product(v)

    def alpha(self, u, v):
        self._check_element(u)
        self._check_element(v)
        if self.kind == "cc":
            # equal-constant classical law: the joint Poisson bracket
            return u.poisson(v)
        if self.a12 <= 0:
            raise AlgebraError("alpha12 needs a12 > 0")
        herm = u.hermitian and v.hermitian
        c1 = math.sqrt(self.a1 / self.a12)
        c2 = math.sqrt(self.a2 / self.a12)
        if self.kind == "qq":
            h1, h2 = self.left.constant.hbar, self.right.constant.hbar
            LL, LR, RL, RR = _lr_table(u, v)
            alp_sig = (LL + LR - RL - RR) / (2j * h1)
            sig_alp = (LL - LR + RL - RR) / (2j * h2)
            ent = c1 * alp_sig + c2 * sig_alp
            return KroneckerElement._trusted(u.left_dim, u.right_dim, ent, herm)
        # quantum (x) classical: c2 = 0 kills the classical-bracket term,
        # which is the algebraic root of the no-back-reaction result
        h1 = self.left.constant.hbar
        out: dict = {}
        for ea, ma in u.terms.items():
            for eb, mb in v.terms.items():
                ec = tuple(a + b for a, b in zip(ea, eb))
                brack = c1 * (ma @ mb - mb @ ma) / (1j * h1)
                out[ec] = out[ec] + brack if ec in out else brack
        return HybridElement._trusted(u.dim, u.num_pairs, out, herm)

    def tau(self, u, v):
        """Envelope product, computed on the independent route: plain
        associative multiplication of canonical forms."""
        self._check_element(u)
        self._check_element(v)
        if self.kind == "qq":
            return KroneckerElement._trusted(u.left_dim, u.right_dim,
                                             u.entries @ v.entries, False)
        if self.kind == "qc":
            return u.assoc_product(v)
        return u.product(v)

    def equal_constant_compose(self, u, v):
        """Fast path for a1 = a2 = a12 = a: returns (sigma12, alpha12)
        computed with unit coefficients on the bracket terms.

        The alpha law here has no dependence on a at all; the sigma law
        keeps an explicit -a on the double-bracket term.
        """
        a = self.a12
        if not (self.a1 == self.a2 == a):
            raise AlgebraError("equal-constant path needs a1 == a2 == a12")
        self._check_element(u)
        self._check_element(v)
        herm = u.hermitian and v.hermitian if self.kind != "cc" else None
        if self.kind == "qq":
            h1, h2 = self.left.constant.hbar, self.right.constant.hbar
            LL, LR, RL, RR = _lr_table(u, v)
            sig_sig = 0.25 * (LL + LR + RL + RR)
            alp_alp = -(LL - LR - RL + RR) / (h1 * h2)
            alp_sig = (LL + LR - RL - RR) / (2j * h1)
            sig_alp = (LL - LR + RL - RR) / (2j * h2)
            sig = KroneckerElement._trusted(u.left_dim, u.right_dim,
                                            sig_sig - a * alp_alp, herm)
            alp = KroneckerElement._trusted(u.left_dim, u.right_dim,
                                            alp_sig + sig_alp, herm)
            return sig, alp
        if self.kind == "cc":
            return u.product(v), u.poisson(v)
        raise AlgebraError("equal-constant path applies to qq or cc compositions")

    # -- elements -------------------------------------------------------

    def unit(self):
        return simple_tensor(self.left.unit(), self.right.unit())

    def zero(self):
        if self.kind == "qq":
            n = self.left.dim * self.right.dim
            return KroneckerElement(self.left.dim, self.right.dim, np.zeros((n, n)),
                                    hermitian=True)
        if self.kind == "qc":
            return HybridElement(self.left.dim, self.right.num_pairs, {}, hermitian=True)
        return PhaseSpacePoly.zero(self.left.num_pairs + self.right.num_pairs)

    def random_simple_terms(self, rng: np.random.Generator, n_terms: int):
        """Draw n_terms random simple-tensor factor pairs."""
        return [(self.left.random_element(rng), self.right.random_element(rng))
                for _ in range(n_terms)]

    def embed_terms(self, terms):
        out = None
        for f1, f2 in terms:
            t = simple_tensor(f1, f2)
            out = t if out is None else out + t
        return self.zero() if out is None else out

    def random_element(self, rng: np.random.Generator, n_terms: int | None = None):
        """Random sum of simple tensors (at most max_random_terms)."""
        if n_terms is None:
            n_terms = int(rng.integers(1, self.max_random_terms + 1))
        return self.embed_terms(self.random_simple_terms(rng, n_terms))

    def describe(self) -> dict:
        return {
            "realization": "composed",
            "kind": self.kind,
            "a1": self.a1,
            "a2": self.a2,
            "a12": self.a12,
            "left": self.left.describe(),
            "right": self.right.describe(),
        }
