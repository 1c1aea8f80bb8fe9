import json
import math

import numpy as np
import pytest

from vpa import (DEFAULT_CONFIG, Problem, check_feasible, load_problem,
                 parse, problem_from_dict, project_to_sphere_slice,
                 sample_feasible_ray)
from vpa.errors import (ProblemValidationError, ProjectionError, RayError)
from vpa.problem import parse_ybar


def empty_feasible_problem():
    # x1 = 0 together with x1 >= 1 is empty
    return Problem(n=2, objectives=(parse("x1", 2),),
                   equalities=(parse("x1", 2),),
                   inequalities=(parse("x1 - 1", 2),))


class TestProblemValidation:
    def test_objective_required(self):
        with pytest.raises(ProblemValidationError):
            Problem(n=1, objectives=())

    def test_num_vars_must_match(self):
        with pytest.raises(ProblemValidationError):
            Problem(n=2, objectives=(parse("x1", 1),))

    def test_counts(self, hyperbola):
        prob, _ = hyperbola
        assert (prob.n, prob.p, prob.l, prob.m) == (3, 2, 0, 2)


class TestCheckFeasible:
    def test_degenerate_line_point(self, degenerate_line):
        prob, _ = degenerate_line
        report = check_feasible(prob, [0.0, 0.0, 9.0], 1e-8)
        assert report.feasible
        assert report.active == (0,)
        assert report.max_equality_violation == 0.0

    def test_interior_point_has_no_active_set(self, motzkin):
        prob, _ = motzkin
        report = check_feasible(prob, [1.0, 1.0])
        assert report.feasible and report.active == ()

    def test_violated_inequality(self, motzkin):
        prob, _ = motzkin
        report = check_feasible(prob, [-1.0, 0.0])
        assert not report.feasible
        assert report.max_inequality_violation == pytest.approx(1.0)
        # x2 = 0 is exactly active even though x1 is violated
        assert 1 in report.active

    def test_scale_consistency_at_exact_zero(self, motzkin):
        prob, _ = motzkin
        doubled = Problem(n=2, objectives=prob.objectives,
                          inequalities=tuple(2.0 * h for h in prob.inequalities))
        for x in ([0.0, 3.0], [1.0, 1.0], [-0.5, 2.0]):
            assert (check_feasible(prob, x).feasible
                    == check_feasible(doubled, x).feasible)

    def test_active_set_monotone_in_tolerance(self, motzkin):
        prob, _ = motzkin
        x = [1e-5, 2.0]
        small = set(check_feasible(prob, x, tol_active=1e-8).active)
        large = set(check_feasible(prob, x, tol_active=1e-3).active)
        assert small <= large
        assert 0 in large and 0 not in small

    def test_tolerance_must_be_positive(self, motzkin):
        prob, _ = motzkin
        with pytest.raises(ValueError):
            check_feasible(prob, [1.0, 1.0], tol_feas=0.0)


class TestProjection:
    def test_degenerate_slice_lands_on_axis(self, degenerate_line):
        prob, _ = degenerate_line
        x = project_to_sphere_slice(prob, 5.0, [0.1, 0.1, 4.0])
        assert abs(x[0]) < 1e-3 and abs(x[1]) < 1e-3
        assert abs(abs(x[2]) - 5.0) < 1e-6
        assert check_feasible(prob, x).feasible

    def test_pure_sphere_rescales_start(self):
        prob = Problem(n=3, objectives=(parse("x1", 3),))
        x = project_to_sphere_slice(prob, 2.0, [1.0, 0.0, 0.0])
        assert np.allclose(x, [2.0, 0.0, 0.0])

    def test_empty_slice_fails_with_residual(self):
        cfg = DEFAULT_CONFIG.replace(projection_restarts=2)
        with pytest.raises(ProjectionError) as err:
            project_to_sphere_slice(empty_feasible_problem(), 3.0,
                                    [1.0, 1.0], cfg)
        assert err.value.best_residual > 0

    def test_radius_must_be_positive(self, motzkin):
        prob, _ = motzkin
        with pytest.raises(ValueError):
            project_to_sphere_slice(prob, -1.0, [1.0, 1.0])


class TestRays:
    def test_degenerate_line_ray(self, degenerate_line):
        prob, _ = degenerate_line
        ray = sample_feasible_ray(prob, [10.0, 100.0, 1000.0], seed=3)
        assert ray.radii == [10.0, 100.0, 1000.0]
        for r, x in ray.points:
            assert abs(x[0]) < 1e-3 and abs(x[1]) < 1e-3
            assert abs(abs(x[2]) - r) < 1e-5 * r

    def test_unconstrained_ray_hits_exact_norms(self):
        prob = Problem(n=4, objectives=(parse("x1", 4),))
        ray = sample_feasible_ray(prob, [2.0, 8.0, 32.0], seed=1)
        for r, x in ray.points:
            assert np.linalg.norm(x) == pytest.approx(r, rel=1e-8)

    def test_every_ray_point_is_feasible(self, hyperbola):
        prob, _ = hyperbola
        ray = sample_feasible_ray(prob, [10.0, 40.0, 160.0], seed=5)
        for _, x in ray.points:
            assert check_feasible(prob, x).feasible

    def test_empty_set_raises(self):
        cfg = DEFAULT_CONFIG.replace(projection_restarts=1)
        with pytest.raises(RayError, match="all radii failed"):
            sample_feasible_ray(empty_feasible_problem(), [1.0, 2.0], seed=1,
                                cfg=cfg)

    def test_radii_must_increase(self, motzkin):
        prob, _ = motzkin
        with pytest.raises(ValueError):
            sample_feasible_ray(prob, [10.0, 5.0], seed=1)


class TestProblemFiles:
    def test_fixture_round_trip(self, motzkin):
        prob, ybar = motzkin
        assert ybar == (0.0, 0.0)
        assert prob.f([1.0, 1.0]) == pytest.approx([0.0, 0.0])

    def test_infinite_ybar_tokens(self, degenerate_line):
        _, ybar = degenerate_line
        assert ybar == (math.inf, math.inf)

    def test_missing_n_rejected(self):
        with pytest.raises(ProblemValidationError, match="'n'"):
            problem_from_dict({"objectives": ["x1"]})

    def test_missing_objectives_rejected(self):
        with pytest.raises(ProblemValidationError, match="objectives"):
            problem_from_dict({"n": 2})

    def test_ybar_length_checked(self):
        with pytest.raises(ProblemValidationError, match="entries"):
            problem_from_dict({"n": 1, "objectives": ["x1"], "ybar": [1, 2]})

    def test_ybar_token_validation(self):
        with pytest.raises(ProblemValidationError, match="neither a number"):
            parse_ybar(["huge"], 1)
        assert parse_ybar(["+inf", "-3.5"], 2) == (math.inf, -3.5)

    def test_bad_json_reported(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ProblemValidationError, match="invalid JSON"):
            load_problem(path)
