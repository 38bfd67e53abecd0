"""Randomized defect measurement for Hamilton-algebra identities.

Any object exposing ``sigma``, ``alpha``, ``tau``, ``random_element`` and
``constant`` can be checked.  Each identity is evaluated on random input
tuples; the reported defect is ||LHS - RHS|| / (1 + prod of input norms).
A failing identity is a reported result, never an exception, so the same
machinery certifies honest algebras and exposes corrupted ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

import numpy as np

from .algebra import HamiltonAlgebra, relative_defect
from .serialize import canon_float, element_from_json, element_to_json


class Identity(str, Enum):
    ANTISYMMETRY = "antisymmetry"
    JACOBI = "jacobi"
    SYMMETRY = "symmetry"
    DERIVATION = "derivation"
    CANONICAL_RELATION = "canonical_relation"
    JORDAN = "jordan"
    TAU_ASSOCIATIVITY = "tau_associativity"


#: identities defining a Hamilton algebra (the axioms), in defining order
AXIOM_IDENTITIES = (
    Identity.ANTISYMMETRY,
    Identity.JACOBI,
    Identity.SYMMETRY,
    Identity.DERIVATION,
    Identity.CANONICAL_RELATION,
)

#: composed-algebra lemma number -> identity it asserts
LEMMA_IDENTITIES = {
    1: Identity.ANTISYMMETRY,
    2: Identity.SYMMETRY,
    3: Identity.JACOBI,
    4: Identity.DERIVATION,
    5: Identity.CANONICAL_RELATION,
}

_ARITY = {
    Identity.ANTISYMMETRY: 2,
    Identity.JACOBI: 3,
    Identity.SYMMETRY: 2,
    Identity.DERIVATION: 3,
    Identity.CANONICAL_RELATION: 3,
    Identity.JORDAN: 2,
    Identity.TAU_ASSOCIATIVITY: 3,
}


def identity_defect(alg: HamiltonAlgebra, identity: Identity, elements) -> float:
    """Relative defect of one identity on one input tuple."""
    identity = Identity(identity)
    if identity is Identity.ANTISYMMETRY:
        f, g = elements
        diff = alg.alpha(f, g) + alg.alpha(g, f)
        norms = (f.norm(), g.norm())
    elif identity is Identity.JACOBI:
        f, g, h = elements
        diff = (alg.alpha(f, alg.alpha(g, h))
                + alg.alpha(g, alg.alpha(h, f))
                + alg.alpha(h, alg.alpha(f, g)))
        norms = (f.norm(), g.norm(), h.norm())
    elif identity is Identity.SYMMETRY:
        f, g = elements
        diff = alg.sigma(f, g) - alg.sigma(g, f)
        norms = (f.norm(), g.norm())
    elif identity is Identity.DERIVATION:
        f, g, h = elements
        diff = (alg.alpha(f, alg.sigma(g, h))
                - alg.sigma(alg.alpha(f, g), h)
                - alg.sigma(g, alg.alpha(f, h)))
        norms = (f.norm(), g.norm(), h.norm())
    elif identity is Identity.CANONICAL_RELATION:
        f, g, h = elements
        rhs = alg.alpha(alg.alpha(f, h), g).scale(alg.constant.a)
        diff = alg.associator_sigma(f, g, h) - rhs
        norms = (f.norm(), g.norm(), h.norm())
    elif identity is Identity.JORDAN:
        f, g = elements
        fsq = alg.sigma(f, f)
        diff = alg.sigma(fsq, alg.sigma(g, f)) - alg.sigma(alg.sigma(fsq, g), f)
        norms = (f.norm(), f.norm(), g.norm(), f.norm())
    elif identity is Identity.TAU_ASSOCIATIVITY:
        f, g, h = elements
        diff = alg.tau(alg.tau(f, g), h) - alg.tau(f, alg.tau(g, h))
        norms = (f.norm(), g.norm(), h.norm())
    else:  # pragma: no cover
        raise ValueError(f"unknown identity {identity}")
    return relative_defect(diff.norm(), norms)


@dataclass(frozen=True)
class IdentityCheck:
    identity: Identity
    trials: int = 200
    tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")


@dataclass
class CheckResult:
    identity: Identity
    trials: int
    tolerance: float
    seed: int
    max_relative_defect: float
    mean_relative_defect: float
    worst_witness: list
    passed: bool

    def to_json(self) -> dict:
        return {
            "identity": self.identity.value,
            "trials": self.trials,
            "tolerance": canon_float(self.tolerance),
            "seed": self.seed,
            "max_relative_defect": canon_float(self.max_relative_defect),
            "mean_relative_defect": canon_float(self.mean_relative_defect),
            "worst_witness": self.worst_witness,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    algebra: dict
    checks: list = field(default_factory=list)
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "report_kind": "verify",
            "algebra": self.algebra,
            "checks": [c.to_json() for c in self.checks],
            "passed": self.passed,
            "timestamp": self.timestamp,
        }


def _draw_elements(alg, rng, arity, max_terms=None):
    if max_terms is not None:
        return [alg.random_element(rng, n_terms=int(rng.integers(1, max_terms + 1)))
                for _ in range(arity)]
    return [alg.random_element(rng) for _ in range(arity)]


def check_identity(alg: HamiltonAlgebra, check: IdentityCheck,
                   max_terms: int | None = None) -> CheckResult:
    """Run one identity check: `trials` random tuples, worst case kept.

    Deterministic given the check's seed; the RNG stream is salted with
    the identity so the checks of a suite draw independent inputs.
    """
    identity = Identity(check.identity)
    arity = _ARITY[identity]
    salt = list(Identity).index(identity)
    rng = np.random.default_rng([check.seed, salt])
    worst = 0.0
    worst_witness: list = []
    total = 0.0
    for _ in range(check.trials):
        elements = _draw_elements(alg, rng, arity, max_terms)
        defect = identity_defect(alg, identity, elements)
        total += defect
        if defect >= worst:
            worst = defect
            worst_witness = [element_to_json(e) for e in elements]
    return CheckResult(
        identity=identity,
        trials=check.trials,
        tolerance=check.tolerance,
        seed=check.seed,
        max_relative_defect=worst,
        mean_relative_defect=total / check.trials,
        worst_witness=worst_witness,
        passed=worst <= check.tolerance,
    )


def run_axiom_suite(alg: HamiltonAlgebra, trials: int = 200, tolerance: float = 1e-9,
                    seed: int = 0, identities=tuple(Identity)) -> VerificationReport:
    """All identity checks against one algebra; aggregate pass is their
    conjunction."""
    report = VerificationReport(algebra=alg.describe())
    for identity in identities:
        check = IdentityCheck(identity=Identity(identity), trials=trials,
                              tolerance=tolerance, seed=seed)
        report.checks.append(check_identity(alg, check))
    return report


def check_lemma(composed, lemma_id: int, trials: int = 200, tolerance: float = 1e-9,
                seed: int = 0) -> CheckResult:
    """Check one composition lemma (1..5) on a composed algebra, drawing
    random simple tensors and 2-term sums."""
    if lemma_id not in LEMMA_IDENTITIES:
        raise ValueError(f"lemma_id must be 1..5, got {lemma_id}")
    check = IdentityCheck(identity=LEMMA_IDENTITIES[lemma_id], trials=trials,
                          tolerance=tolerance, seed=seed)
    return check_identity(composed, check, max_terms=2)


def replay_witness(alg: HamiltonAlgebra, identity: Identity, witness: list) -> float:
    """Recompute the defect of a serialized witness tuple."""
    elements = [element_from_json(w) for w in witness]
    return identity_defect(alg, Identity(identity), elements)
