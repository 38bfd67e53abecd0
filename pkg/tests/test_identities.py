import json
import math

import jsonschema
import numpy as np
import pytest

from hamalg import (
    ComposedAlgebra,
    CorruptedAlgebra,
    Identity,
    IdentityCheck,
    OperatorAlgebra,
    PhaseSpaceAlgebra,
    check_identity,
    check_lemma,
    run_axiom_suite,
)
from hamalg.cli import _load_schema
from hamalg.identities import AXIOM_IDENTITIES, LEMMA_IDENTITIES, replay_witness


def composed(a1, a2, a12, d1=2, d2=2):
    return ComposedAlgebra(OperatorAlgebra(d1, hbar=2 * math.sqrt(a1)),
                           OperatorAlgebra(d2, hbar=2 * math.sqrt(a2)), a12=a12)


class TestCheckIdentity:
    def test_operator_canonical_relation_passes(self):
        alg = OperatorAlgebra(3, hbar=1.0)
        res = check_identity(alg, IdentityCheck(Identity.CANONICAL_RELATION, trials=200))
        assert res.passed
        assert res.max_relative_defect <= 1e-10

    def test_phase_space_canonical_relation_is_associativity(self):
        alg = PhaseSpaceAlgebra(1, max_random_degree=3)
        res = check_identity(alg, IdentityCheck(Identity.CANONICAL_RELATION, trials=100))
        assert res.passed

    def test_corrupted_algebra_fails_loudly(self):
        base = OperatorAlgebra(3, hbar=1.0)
        bad = CorruptedAlgebra(base, alpha_scale=1.1)
        honest = check_identity(base, IdentityCheck(Identity.CANONICAL_RELATION, trials=50))
        broken = check_identity(bad, IdentityCheck(Identity.CANONICAL_RELATION, trials=50))
        assert not broken.passed
        # scaling the bracket by 1.1 scales the double-bracket side by 1.21,
        # leaving a defect of order 0.21 * a * (input scale)
        assert broken.max_relative_defect > 1e-2
        assert broken.max_relative_defect >= 1e3 * honest.max_relative_defect

    def test_corruption_spares_homogeneous_identities(self):
        bad = CorruptedAlgebra(OperatorAlgebra(3, hbar=1.0), alpha_scale=1.1)
        for identity in (Identity.ANTISYMMETRY, Identity.JACOBI, Identity.SYMMETRY,
                         Identity.DERIVATION):
            res = check_identity(bad, IdentityCheck(identity, trials=30))
            assert res.passed, identity

    def test_determinism_bit_identical(self):
        alg = OperatorAlgebra(4, hbar=2.0)
        check = IdentityCheck(Identity.JACOBI, trials=25, seed=77)
        a = check_identity(alg, check)
        b = check_identity(alg, check)
        assert a.max_relative_defect == b.max_relative_defect
        assert a.mean_relative_defect == b.mean_relative_defect
        assert a.worst_witness == b.worst_witness

    def test_different_seeds_draw_different_inputs(self):
        alg = OperatorAlgebra(4, hbar=2.0)
        a = check_identity(alg, IdentityCheck(Identity.JACOBI, trials=5, seed=0))
        b = check_identity(alg, IdentityCheck(Identity.JACOBI, trials=5, seed=1))
        assert a.worst_witness != b.worst_witness

    def test_witness_replay_reproduces_defect(self):
        alg = PhaseSpaceAlgebra(2, max_random_degree=2)
        res = check_identity(alg, IdentityCheck(Identity.DERIVATION, trials=20))
        replayed = replay_witness(alg, res.identity, res.worst_witness)
        assert replayed == pytest.approx(res.max_relative_defect, rel=1e-12, abs=1e-15)

    def test_check_validation(self):
        with pytest.raises(ValueError):
            IdentityCheck(Identity.JACOBI, trials=0)
        with pytest.raises(ValueError):
            IdentityCheck(Identity.JACOBI, tolerance=0.0)


class TestAxiomSuite:
    @pytest.mark.parametrize("dim,hbar", [(2, 2.0), (3, 1.0), (4, 0.5)])
    def test_operator_suites_pass(self, dim, hbar):
        report = run_axiom_suite(OperatorAlgebra(dim, hbar=hbar), trials=60)
        assert report.passed
        assert {c.identity for c in report.checks} == set(Identity)

    def test_classical_suite_passes(self):
        report = run_axiom_suite(PhaseSpaceAlgebra(1, max_random_degree=3), trials=40)
        assert report.passed

    def test_composed_suite_passes_theorem(self):
        report = run_axiom_suite(composed(1.0, 4.0, 9.0), trials=40)
        assert report.passed

    def test_report_json_validates_against_schema(self):
        report = run_axiom_suite(OperatorAlgebra(2, hbar=1.0), trials=5)
        doc = json.loads(json.dumps(report.to_json()))
        jsonschema.validate(doc, _load_schema())

    def test_aggregate_pass_is_conjunction(self):
        bad = CorruptedAlgebra(OperatorAlgebra(2, hbar=1.0), alpha_scale=1.1)
        report = run_axiom_suite(bad, trials=20)
        assert not report.passed
        assert any(c.passed for c in report.checks)
        assert any(not c.passed for c in report.checks)


class TestLemmas:
    def test_lemma_identity_mapping(self):
        assert LEMMA_IDENTITIES[1] is Identity.ANTISYMMETRY
        assert LEMMA_IDENTITIES[2] is Identity.SYMMETRY
        assert LEMMA_IDENTITIES[3] is Identity.JACOBI
        assert LEMMA_IDENTITIES[4] is Identity.DERIVATION
        assert LEMMA_IDENTITIES[5] is Identity.CANONICAL_RELATION
        assert set(LEMMA_IDENTITIES.values()) == set(AXIOM_IDENTITIES)

    @pytest.mark.parametrize("lemma", [1, 2, 3, 4, 5])
    def test_lemmas_on_unequal_constants(self, lemma):
        res = check_lemma(composed(1.0, 1.0, 2.0), lemma, trials=50)
        assert res.passed, (lemma, res.max_relative_defect)

    def test_lemma_on_hybrid(self):
        hybrid = ComposedAlgebra(OperatorAlgebra(2, hbar=2.0),
                                 PhaseSpaceAlgebra(1, max_random_degree=2), a12=1.0)
        res = check_lemma(hybrid, 5, trials=50)
        assert res.passed

    def test_lemma5_fails_on_scaled_bracket(self):
        bad = CorruptedAlgebra(composed(1.0, 1.0, 2.0), alpha_scale=1.1)
        res = check_lemma(bad, 5, trials=30)
        assert not res.passed

    def test_lemma1_fails_on_symmetric_admixture(self):
        # plant a bug that actually breaks antisymmetry: leak a bit of the
        # symmetric product into the bracket
        base = composed(1.0, 1.0, 2.0)

        class Leaky:
            constant = base.constant
            random_element = staticmethod(base.random_element)
            describe = staticmethod(base.describe)

            @staticmethod
            def alpha(u, v):
                return base.alpha(u, v) + base.sigma(u, v).scale(0.1)

            sigma = staticmethod(base.sigma)
            tau = staticmethod(base.tau)
            associator_sigma = staticmethod(base.associator_sigma)

        res = check_lemma(Leaky(), 1, trials=20)
        assert not res.passed
        assert res.max_relative_defect > 1e-3

    def test_invalid_lemma_id(self):
        with pytest.raises(ValueError):
            check_lemma(composed(1.0, 1.0, 1.0), 6)


class TestMutationMonotonicity:
    @pytest.mark.parametrize("factory", [
        lambda: OperatorAlgebra(2, hbar=2.0),
        lambda: OperatorAlgebra(6, hbar=0.5),
        lambda: composed(1.0, 4.0, 9.0),
        lambda: ComposedAlgebra(OperatorAlgebra(2, hbar=2.0),
                                PhaseSpaceAlgebra(1, max_random_degree=2), a12=1.0),
    ])
    def test_scaled_bracket_breaks_canonical_relation(self, factory):
        base = factory()
        bad = CorruptedAlgebra(base, alpha_scale=1.1)
        honest = check_identity(base, IdentityCheck(Identity.CANONICAL_RELATION, trials=30))
        broken = check_identity(bad, IdentityCheck(Identity.CANONICAL_RELATION, trials=30))
        assert honest.passed
        assert not broken.passed
        assert broken.max_relative_defect >= 1e3 * broken.tolerance
        assert broken.max_relative_defect >= 1e3 * max(honest.max_relative_defect, 1e-300)
