"""Published mixed quantum-classical brackets and their defect profiles.

All brackets act on observable-valued functions (HybridElement): matrix
coefficients on classical monomials.  Writing [A,B]- = (AB - BA)/(i*hbar),
[A,B]+ = (AB + BA)/2 and {.,.}_P for the Poisson bracket:

* product_rule    : defined on simple products Xx and extended bilinearly,
                    {Xx, Yy} -> xy [X,Y]- + {x,y}_P [X,Y]+
                    (the composition rule valid only at equal constants,
                    misapplied to a classical factor)
* symmetrized     : [U,V]- + ({U,V}_P - {V,U}_P)/2 on whole elements,
                    with matrix coefficients multiplied in written order
* unsymmetrized   : [U,V]- + {U,V}_P, written order (not antisymmetric;
                    the written-order choice is itself an interpretation,
                    flagged in reports)
* hybrid          : [U,V]- with classical parts multiplied pointwise; the
                    bracket of the quantum (x) classical Hamilton algebra

Every bracket is scored against the three dynamics desiderata:
antisymmetry, the Jacobi identity, and the derivation identity over the
associative product.  The hybrid bracket satisfies all three; the
product_rule/symmetrized pair is antisymmetric but breaks Jacobi and
derivation; the unsymmetrized bracket breaks all three.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import relative_defect
from .compose import HybridElement
from .elements import monomials_up_to_degree
from .errors import AlgebraError
from .kernels import poisson as _poly_poisson
from .serialize import canon_float, element_from_json, element_to_json

#: defect above this (relative) counts as a genuine violation; three
#: orders of magnitude above the identity-suite pass tolerance
VIOLATION_THRESHOLD = 1e-6
PASS_TOLERANCE = 1e-10


class MixedBracketKind(str, Enum):
    BOUCHER_TRASCHEN = "boucher_traschen"
    ALEKSANDROV = "aleksandrov"
    ANDERSON = "anderson"
    HYBRID_PAPER = "hybrid_paper"


DESIDERATA = ("antisymmetry", "jacobi", "derivation")

#: which desiderata each bracket is expected to satisfy (True = clean)
EXPECTED_CLEAN = {
    MixedBracketKind.HYBRID_PAPER: {"antisymmetry": True, "jacobi": True, "derivation": True},
    MixedBracketKind.BOUCHER_TRASCHEN: {"antisymmetry": True, "jacobi": False,
                                        "derivation": False},
    MixedBracketKind.ALEKSANDROV: {"antisymmetry": True, "jacobi": False, "derivation": False},
    MixedBracketKind.ANDERSON: {"antisymmetry": False, "jacobi": False, "derivation": False},
}


def _commutator_bracket(u: HybridElement, v: HybridElement, hbar: float) -> HybridElement:
    """[U,V]- : commutator/(i*hbar) on coefficients, pointwise classical
    product.  This is also the hybrid Hamilton-algebra bracket."""
    u._check_like(v)
    out: dict = {}
    for ea, ma in u.terms.items():
        for eb, mb in v.terms.items():
            ec = tuple(a + b for a, b in zip(ea, eb))
            val = (ma @ mb - mb @ ma) / (1j * hbar)
            out[ec] = out[ec] + val if ec in out else val
    return HybridElement._trusted(u.dim, u.num_pairs, out,
                                  u.hermitian and v.hermitian)


def ordered_poisson(u: HybridElement, v: HybridElement) -> HybridElement:
    """{U,V}_P with matrix coefficients multiplied in written order:
    sum_k dU/dx_k . dV/dp_k - dU/dp_k . dV/dx_k."""
    u._check_like(v)
    out = None
    for k in range(u.num_pairs):
        ix, ip = 2 * k, 2 * k + 1
        term = (u.partial(ix).assoc_product(v.partial(ip))
                - u.partial(ip).assoc_product(v.partial(ix)))
        out = term if out is None else out + term
    return out


def _product_rule_bracket(u: HybridElement, v: HybridElement, hbar: float) -> HybridElement:
    """Simple-product definition extended bilinearly: each monomial term
    A x^m is a simple product, so
    {U,V} = sum (x^m x^n)[A,B]- + {x^m, x^n}_P [A,B]+ ."""
    u._check_like(v)
    nvars = u.nvars
    out: dict = {}

    def _acc(exps, mat):
        if exps in out:
            out[exps] = out[exps] + mat
        else:
            out[exps] = mat

    for ea, ma in u.terms.items():
        for eb, mb in v.terms.items():
            comm = (ma @ mb - mb @ ma) / (1j * hbar)
            anti = 0.5 * (ma @ mb + mb @ ma)
            _acc(tuple(a + b for a, b in zip(ea, eb)), comm)
            pb = _poly_poisson({ea: 1.0}, {eb: 1.0}, u.num_pairs)
            for ec, c in pb.items():
                _acc(ec, c * anti)
    return HybridElement._trusted(u.dim, u.num_pairs, out,
                                  u.hermitian and v.hermitian)


def _symmetrized_bracket(u: HybridElement, v: HybridElement, hbar: float) -> HybridElement:
    """Whole-element form: [U,V]- + half the antisymmetrized ordered
    Poisson bracket.  Coincides with the simple-product rule on all
    inputs; kept as a distinct code path (cross-checked in tests)."""
    sym = (ordered_poisson(u, v) - ordered_poisson(v, u)).scale(0.5)
    return _commutator_bracket(u, v, hbar) + sym


def _unsymmetrized_bracket(u: HybridElement, v: HybridElement, hbar: float) -> HybridElement:
    """[U,V]- + {U,V}_P with the ordered Poisson term taken as written."""
    return _commutator_bracket(u, v, hbar) + ordered_poisson(u, v)


_BRACKETS = {
    MixedBracketKind.BOUCHER_TRASCHEN: _product_rule_bracket,
    MixedBracketKind.ALEKSANDROV: _symmetrized_bracket,
    MixedBracketKind.ANDERSON: _unsymmetrized_bracket,
    MixedBracketKind.HYBRID_PAPER: _commutator_bracket,
}


def mixed_bracket(kind: MixedBracketKind, u: HybridElement, v: HybridElement,
                  hbar: float = 1.0) -> HybridElement:
    """Evaluate one mixed bracket on two hybrid observables."""
    if hbar <= 0:
        raise AlgebraError(f"hbar must be > 0, got {hbar}")
    return _BRACKETS[MixedBracketKind(kind)](u, v, hbar)


# ---------------------------------------------------------------------------
# desiderata defects
# ---------------------------------------------------------------------------

def desideratum_defect(kind: MixedBracketKind, desideratum: str, elements,
                       hbar: float = 1.0) -> float:
    """Relative defect of one dynamics desideratum on one input tuple."""
    kind = MixedBracketKind(kind)
    if desideratum == "antisymmetry":
        u, v = elements
        diff = mixed_bracket(kind, u, v, hbar) + mixed_bracket(kind, v, u, hbar)
        norms = (u.norm(), v.norm())
    elif desideratum == "jacobi":
        u, v, w = elements
        diff = (mixed_bracket(kind, mixed_bracket(kind, u, v, hbar), w, hbar)
                + mixed_bracket(kind, mixed_bracket(kind, v, w, hbar), u, hbar)
                + mixed_bracket(kind, mixed_bracket(kind, w, u, hbar), v, hbar))
        norms = (u.norm(), v.norm(), w.norm())
    elif desideratum == "derivation":
        u, v, w = elements
        diff = (mixed_bracket(kind, u, v.assoc_product(w), hbar)
                - mixed_bracket(kind, u, v, hbar).assoc_product(w)
                - v.assoc_product(mixed_bracket(kind, u, w, hbar)))
        norms = (u.norm(), v.norm(), w.norm())
    else:
        raise ValueError(f"unknown desideratum {desideratum!r}")
    return relative_defect(diff.norm(), norms)


def random_hybrid_observable(rng: np.random.Generator, dim: int = 2, num_pairs: int = 1,
                             degree: int = 2) -> HybridElement:
    """Hermitian-coefficient random hybrid element of bounded degree."""
    terms = {}
    for e in monomials_up_to_degree(2 * num_pairs, degree):
        m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        terms[e] = 0.5 * (m + m.conj().T)
    return HybridElement(dim, num_pairs, terms, hermitian=True)


@dataclass
class DefectTriple:
    kind: MixedBracketKind
    antisymmetry_defect: float = 0.0
    jacobi_defect: float = 0.0
    derivation_defect: float = 0.0
    witnesses: dict = field(default_factory=dict)
    trials: int = 0
    seed: int = 0

    def defect(self, desideratum: str) -> float:
        return getattr(self, f"{desideratum}_defect")

    def matches_expected_pattern(self) -> bool:
        expected = EXPECTED_CLEAN[self.kind]
        for name in DESIDERATA:
            if expected[name] and self.defect(name) > PASS_TOLERANCE:
                return False
            if not expected[name] and self.defect(name) <= VIOLATION_THRESHOLD:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "trials": self.trials,
            "seed": self.seed,
            "antisymmetry_defect": canon_float(self.antisymmetry_defect),
            "jacobi_defect": canon_float(self.jacobi_defect),
            "derivation_defect": canon_float(self.derivation_defect),
            "witnesses": self.witnesses,
            "matches_expected_pattern": self.matches_expected_pattern(),
            "notes": self._notes(),
        }

    def _notes(self) -> list:
        notes = ["simple-product bracket extended bilinearly to general elements"] \
            if self.kind is MixedBracketKind.BOUCHER_TRASCHEN else []
        if self.kind is MixedBracketKind.ANDERSON:
            notes.append("Poisson term orders matrix coefficients left-to-right as written; "
                         "the source rule fixes no ordering")
        return notes


def measure_defects(kind: MixedBracketKind, trials: int = 200, seed: int = 0,
                    dim: int = 2, num_pairs: int = 1, degree: int = 2,
                    hbar: float = 1.0) -> DefectTriple:
    """Max relative defect of each desideratum over random hybrid triples,
    with the worst witness kept per desideratum."""
    kind = MixedBracketKind(kind)
    result = DefectTriple(kind=kind, trials=trials, seed=seed)
    for di, name in enumerate(DESIDERATA):
        rng = np.random.default_rng([seed, di])
        arity = 2 if name == "antisymmetry" else 3
        worst, worst_witness = 0.0, None
        for _ in range(trials):
            elements = [random_hybrid_observable(rng, dim, num_pairs, degree)
                        for _ in range(arity)]
            d = desideratum_defect(kind, name, elements, hbar)
            if d >= worst:
                worst = d
                worst_witness = [element_to_json(e) for e in elements]
        setattr(result, f"{name}_defect", worst)
        result.witnesses[name] = {"defect": canon_float(worst), "elements": worst_witness}
    return result


def find_violation_witness(kind: MixedBracketKind, desideratum: str, budget: int,
                           seed: int = 0, threshold: float = VIOLATION_THRESHOLD,
                           dim: int = 2, num_pairs: int = 1, degree: int = 2,
                           hbar: float = 1.0):
    """First random tuple whose defect exceeds the violation threshold;
    None if the budget is exhausted."""
    if budget < 1:
        raise AlgebraError(f"budget must be >= 1, got {budget}")
    kind = MixedBracketKind(kind)
    di = DESIDERATA.index(desideratum)
    rng = np.random.default_rng([seed, di])
    arity = 2 if desideratum == "antisymmetry" else 3
    for trial in range(budget):
        elements = [random_hybrid_observable(rng, dim, num_pairs, degree)
                    for _ in range(arity)]
        d = desideratum_defect(kind, desideratum, elements, hbar)
        if d > threshold:
            return {
                "kind": kind.value,
                "desideratum": desideratum,
                "trial": trial,
                "defect": canon_float(d),
                "elements": [element_to_json(e) for e in elements],
            }
    return None


def find_jacobi_witness(kind: MixedBracketKind, budget: int, seed: int = 0, **kw):
    """Search for a Jacobi-identity violation (None for a sound bracket)."""
    return find_violation_witness(kind, "jacobi", budget, seed, **kw)


def replay_witness_defect(witness: dict, hbar: float = 1.0) -> float:
    """Recompute a serialized witness's defect through the main path."""
    elements = [element_from_json(e) for e in witness["elements"]]
    return desideratum_defect(MixedBracketKind(witness["kind"]),
                              witness["desideratum"], elements, hbar)
