"""hamalg: quantum and classical Hamilton algebras, their tensor
composition, mixed quantum-classical brackets, measurement dynamics, and
the restriction argument pinning the quantum constant -- all exposed as
tolerance-checked, replayable verification suites.
"""

from .algebra import (
    CorruptedAlgebra,
    DEFAULT_HBARS,
    DEFAULT_OPERATOR_DIMS,
    HamiltonAlgebra,
    OperatorAlgebra,
    PhaseSpaceAlgebra,
    centrality_report,
    relative_defect,
)
from .brackets import (
    DefectTriple,
    MixedBracketKind,
    find_jacobi_witness,
    find_violation_witness,
    measure_defects,
    mixed_bracket,
)
from .compose import (
    ComposedAlgebra,
    HybridElement,
    KroneckerElement,
    compose_product_on_terms,
    simple_tensor,
    switching_map,
)
from .elements import OperatorElement, PhaseSpacePoly, QuantumConstant
from .errors import AlgebraError, HamalgError, ShapeError
from .identities import (
    Identity,
    IdentityCheck,
    VerificationReport,
    check_identity,
    check_lemma,
    run_axiom_suite,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .measurement import (
    MeasurementConfig,
    Regime,
    Trajectory,
    back_reaction_gap,
    build_hamiltonian,
    classical_freezing_defect,
    eom_generator,
    evolve,
)
from .serialize import element_from_json, element_to_json
from .uniqueness import (
    RestrictionResult,
    restrict_alpha,
    restrict_sigma,
    scan_constants,
    uniqueness_check,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "ComposedAlgebra",
    "CorruptedAlgebra",
    "DEFAULT_HBARS",
    "DEFAULT_OPERATOR_DIMS",
    "DefectTriple",
    "HamalgError",
    "HamiltonAlgebra",
    "HybridElement",
    "Identity",
    "IdentityCheck",
    "KERNEL_BACKEND",
    "KroneckerElement",
    "MeasurementConfig",
    "MixedBracketKind",
    "OperatorAlgebra",
    "OperatorElement",
    "PhaseSpaceAlgebra",
    "PhaseSpacePoly",
    "QuantumConstant",
    "Regime",
    "RestrictionResult",
    "ShapeError",
    "Trajectory",
    "VerificationReport",
    "back_reaction_gap",
    "build_hamiltonian",
    "centrality_report",
    "check_identity",
    "check_lemma",
    "classical_freezing_defect",
    "compose_product_on_terms",
    "element_from_json",
    "element_to_json",
    "eom_generator",
    "evolve",
    "find_jacobi_witness",
    "find_violation_witness",
    "measure_defects",
    "mixed_bracket",
    "relative_defect",
    "restrict_alpha",
    "restrict_sigma",
    "run_axiom_suite",
    "scan_constants",
    "simple_tensor",
    "switching_map",
    "uniqueness_check",
]
