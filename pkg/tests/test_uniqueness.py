import math

import numpy as np
import pytest

from hamalg import (
    AlgebraError,
    ComposedAlgebra,
    OperatorAlgebra,
    PhaseSpaceAlgebra,
    restrict_alpha,
    restrict_sigma,
    scan_constants,
    simple_tensor,
    uniqueness_check,
)
from hamalg.uniqueness import log_grid


def composed(a1, a2, a12, d1=2, d2=2):
    return ComposedAlgebra(OperatorAlgebra(d1, hbar=2 * math.sqrt(a1)),
                           OperatorAlgebra(d2, hbar=2 * math.sqrt(a2)), a12=a12)


class TestRestrictAlpha:
    def test_left_factor_matches_closed_form(self):
        res = restrict_alpha(composed(1.0, 4.0, 4.0), "left")
        assert res.expected_factor == pytest.approx(0.5)
        assert res.measured_factor == pytest.approx(0.5, abs=1e-10)
        assert not res.satisfies_requirement

    def test_unit_factor_when_constants_match(self):
        res = restrict_alpha(composed(2.25, 1.0, 2.25), "left")
        assert res.measured_factor == pytest.approx(1.0, abs=1e-10)
        assert res.satisfies_requirement

    def test_right_component(self):
        res = restrict_alpha(composed(1.0, 9.0, 9.0), "right")
        assert res.measured_factor == pytest.approx(1.0, abs=1e-10)
        res = restrict_alpha(composed(1.0, 4.0, 9.0), "right")
        assert res.measured_factor == pytest.approx(2.0 / 3.0, abs=1e-10)

    def test_factor_law_over_grid(self):
        for a1 in (0.25, 1.0):
            for a12 in (0.5, 2.0):
                res = restrict_alpha(composed(a1, 1.0, a12), "left")
                assert abs(res.measured_factor - math.sqrt(a1 / a12)) <= 1e-10

    def test_fit_residual_small(self):
        res = restrict_alpha(composed(0.25, 2.0, 5.0), "left")
        assert res.fit_residual <= 1e-10

    def test_rejects_hybrid_composition(self):
        hybrid = ComposedAlgebra(OperatorAlgebra(2, hbar=1.0),
                                 PhaseSpaceAlgebra(1))
        with pytest.raises(AlgebraError):
            restrict_alpha(hybrid, "left")

    def test_rejects_bad_component_name(self):
        with pytest.raises(AlgebraError):
            restrict_alpha(composed(1, 1, 1), "middle")


class TestRestrictSigma:
    @pytest.mark.parametrize("constants", [(1, 1, 1), (1, 4, 9), (0.25, 2, 5)])
    def test_unit_factor_for_all_constants(self, constants):
        c = composed(*constants)
        left = restrict_sigma(c, "left")
        right = restrict_sigma(c, "right")
        assert left.measured_factor == pytest.approx(1.0, abs=1e-12)
        assert right.measured_factor == pytest.approx(1.0, abs=1e-12)
        assert left.expected_factor == right.expected_factor == 1.0

    def test_unit_pair_maps_to_unit(self):
        c = composed(1.0, 4.0, 9.0)
        e = c.unit()
        assert (c.sigma(e, e) - e).norm() <= 1e-14


class TestTauRestriction:
    def test_tau_restricts_to_component_product(self, rng):
        c = composed(1.0, 4.0, 9.0)
        e2 = c.right.unit()
        f, g = c.left.random_element(rng), c.left.random_element(rng)
        got = c.tau(simple_tensor(f, e2), simple_tensor(g, e2))
        expected = simple_tensor(c.left.tau(f, g), e2)
        assert (got - expected).norm() <= 1e-12 * (1 + f.norm() * g.norm())


class TestUniquenessCheck:
    def test_diagonal_passes(self):
        assert uniqueness_check(1.0, 1.0, 1.0)["passed"]
        assert uniqueness_check(2.25, 2.25, 2.25)["passed"]

    def test_off_diagonal_fails_with_known_factors(self):
        v = uniqueness_check(1.0, 4.0, 9.0)
        assert not v["passed"]
        assert v["left"]["measured_factor"] == pytest.approx(1 / 3, abs=1e-10)
        assert v["right"]["measured_factor"] == pytest.approx(2 / 3, abs=1e-10)

    def test_verdict_equivalence(self):
        # passes iff both constants match a12 within tolerance
        for a1, a2, a12 in [(1, 1, 1.0000000001), (1, 1, 2), (2, 1, 2), (1, 2, 2)]:
            v = uniqueness_check(a1, a2, a12, tolerance=1e-8)
            expected = (abs(math.sqrt(a1 / a12) - 1) <= 1e-8
                        and abs(math.sqrt(a2 / a12) - 1) <= 1e-8)
            assert v["passed"] == expected, (a1, a2, a12)

    def test_rejects_nonpositive_constants(self):
        with pytest.raises(AlgebraError):
            uniqueness_check(0.0, 1.0, 1.0)


class TestScan:
    def test_pass_set_is_exactly_the_diagonal(self):
        values = log_grid(0.25, 4.0, 3)  # 27 triples, keeps the test fast
        verdicts = scan_constants(values)
        for v in verdicts:
            on_diagonal = v["a1"] == v["a2"] == v["a12"]
            assert v["passed"] == on_diagonal, v
        assert sum(v["passed"] for v in verdicts) == 3

    def test_explicit_triples(self):
        verdicts = scan_constants([(1.0, 1.0, 1.0), (1.0, 4.0, 9.0)])
        assert [v["passed"] for v in verdicts] == [True, False]
