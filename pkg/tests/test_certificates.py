import math

import numpy as np
import pytest

from vpa import (DEFAULT_CONFIG, Problem, mfcq_probe, parse, rabier_value,
                 tangency_membership)
from vpa.errors import InfeasiblePointError


def unconstrained(expr_list, n):
    return Problem(n=n, objectives=tuple(parse(e, n) for e in expr_list))


class TestRabierValue:
    @pytest.mark.parametrize("t", [1.0, 5.0, 100.0, -3.0])
    def test_degenerate_line_closed_form(self, degenerate_line, t):
        prob, _ = degenerate_line
        result = rabier_value(prob, [0.0, 0.0, t])
        assert result.value == pytest.approx(math.sqrt(2) / 2 * abs(t), rel=1e-6)

    def test_single_objective_gradient_norm(self):
        prob = unconstrained(["x1"], 3)
        result = rabier_value(prob, [4.0, -1.0, 2.0])
        assert result.value == 1.0
        assert result.minimizer.tau == (1.0,)

    def test_vanishing_gradients_give_zero(self, motzkin):
        prob, _ = motzkin
        assert rabier_value(prob, [1.0, 1.0]).value <= 1e-9

    def test_p_equals_one_unconstrained_is_exact(self):
        prob = unconstrained(["x1^2 + x2^2"], 2)
        x = [0.7, -1.2]
        expected = float(np.linalg.norm(prob.jac_f(x)[0]))
        assert rabier_value(prob, x).value == expected

    def test_infeasible_point_rejected(self, motzkin):
        prob, _ = motzkin
        with pytest.raises(InfeasiblePointError):
            rabier_value(prob, [-1.0, 1.0])

    def test_value_is_nonnegative_and_matches_minimizer(self, hyperbola):
        prob, _ = hyperbola
        for x in ([2.0, 0.5, -1.0], [10.0, 0.1, 0.3], [0.0, 0.0, 5.0]):
            result = rabier_value(prob, x)
            assert result.value >= 0.0
            tau, lam, nu, mu = result.minimizer.as_arrays()
            assert mu == 0.0
            assert np.sum(tau) == pytest.approx(1.0, abs=1e-9)
            assert np.all(tau >= -1e-12) and np.all(nu >= -1e-12)
            residual = tau @ prob.jac_f(x) - nu @ prob.jac_h(x)
            assert np.linalg.norm(residual) == pytest.approx(result.value,
                                                             rel=1e-6, abs=1e-9)

    def test_complementarity_of_minimizer(self, hyperbola):
        prob, _ = hyperbola
        result = rabier_value(prob, [3.0, 2.0, 0.0])   # both h strictly positive
        assert result.minimizer.nu == (0.0, 0.0)

    def test_invariant_under_objective_permutation(self, hyperbola):
        prob, _ = hyperbola
        flipped = Problem(n=3, objectives=prob.objectives[::-1],
                          inequalities=prob.inequalities)
        for x in ([5.0, 0.2, -1.0], [1.0, 1.0, 1.0]):
            assert rabier_value(prob, x).value == pytest.approx(
                rabier_value(flipped, x).value, rel=1e-6, abs=1e-10)

    def test_invariant_under_constraint_permutation(self, hyperbola):
        prob, _ = hyperbola
        flipped = Problem(n=3, objectives=prob.objectives,
                          inequalities=prob.inequalities[::-1])
        x = [0.0, 0.5, -2.0]
        assert rabier_value(prob, x).value == pytest.approx(
            rabier_value(flipped, x).value, rel=1e-6, abs=1e-10)


class TestTangencyMembership:
    def test_degenerate_line_is_all_tangent(self, degenerate_line):
        prob, _ = degenerate_line
        result = tangency_membership(prob, [0.0, 0.0, 7.0])
        assert result.is_member
        assert result.witness is not None

    def test_critical_point_is_member(self):
        prob = unconstrained(["x1^2"], 4)
        result = tangency_membership(prob, [0.0, 0.0, 0.0, 0.0])
        assert result.is_member and result.residual <= 1e-12

    def test_off_axis_linear_objective_is_not_member(self):
        # minimum of ||tau e1 - mu x|| over tau + |mu| = 1 is sqrt(2)/2 > 0
        prob = unconstrained(["x1"], 3)
        result = tangency_membership(prob, [0.0, 1.0, 0.0])
        assert not result.is_member
        assert result.residual == pytest.approx(math.sqrt(2) / 2, rel=1e-6)

    def test_gradient_parallel_to_point_is_member(self):
        prob = unconstrained(["x1^2 + x2^2"], 2)
        result = tangency_membership(prob, [3.0, 4.0])
        assert result.is_member   # gradient 2x is parallel to x

    def test_witness_satisfies_complementarity(self, hyperbola):
        prob, _ = hyperbola
        result = tangency_membership(prob, [2.0, 0.0, -1.0])
        if result.is_member:
            nu = result.witness.nu
            hv = prob.h([2.0, 0.0, -1.0])
            for j, val in enumerate(hv):
                if abs(val) > DEFAULT_CONFIG.tol_active:
                    assert nu[j] == 0.0


class TestMfcqProbe:
    @pytest.mark.parametrize("t", [10.0, 100.0, -4.0])
    def test_degenerate_equalities_fail(self, degenerate_line, t):
        prob, _ = degenerate_line
        report = mfcq_probe(prob, [0.0, 0.0, t])
        assert not report.holds
        assert report.gradient_rank < prob.l

    def test_orthant_boundary_holds_with_unit_margin(self, motzkin):
        prob, _ = motzkin
        report = mfcq_probe(prob, [0.0, 3.0])
        assert report.holds
        assert report.active == (0,)
        assert report.margin == pytest.approx(1.0, abs=1e-9)
        assert np.allclose(report.witness, [1.0, 0.0], atol=1e-9)

    def test_orthant_corner_holds(self, motzkin):
        prob, _ = motzkin
        report = mfcq_probe(prob, [0.0, 0.0])
        assert report.holds and set(report.active) == {0, 1}
        assert report.margin > 0

    def test_unconstrained_holds_vacuously(self):
        prob = unconstrained(["x1"], 2)
        report = mfcq_probe(prob, [5.0, -1.0])
        assert report.holds
        assert report.gradient_rank == 0
        assert report.margin == math.inf

    def test_verdict_invariant_under_positive_rescaling(self, motzkin):
        prob, _ = motzkin
        scaled = Problem(n=2, objectives=prob.objectives,
                         inequalities=tuple(7.0 * h for h in prob.inequalities))
        for x in ([0.0, 3.0], [0.0, 0.0], [2.0, 0.0]):
            assert mfcq_probe(prob, x).holds == mfcq_probe(scaled, x).holds

    def test_interior_with_equality(self):
        prob = Problem(n=2, objectives=(parse("x1", 2),),
                       equalities=(parse("x1 + x2 - 1", 2),))
        report = mfcq_probe(prob, [0.5, 0.5])
        assert report.holds and report.gradient_rank == 1
