"""Problem data and the feasible set S = {g_i = 0, h_j >= 0}.

Feasibility checks, projection onto sphere slices S intersect {||x|| = r},
and feasible-ray sampling along a growing radius schedule.  Inequality
indices are 0-based positions into ``Problem.inequalities`` throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig
from .errors import (DimensionMismatchError, ProblemValidationError,
                     ProjectionError, RayError)
from .polynomials import Polynomial, parse
from .solvers import gauss_newton, random_unit_vector


@dataclass(eq=False)
class Problem:
    """A vector polynomial program: minimize (f_1..f_p) over S."""

    n: int
    objectives: tuple[Polynomial, ...]
    equalities: tuple[Polynomial, ...] = ()
    inequalities: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        self.objectives = tuple(self.objectives)
        self.equalities = tuple(self.equalities)
        self.inequalities = tuple(self.inequalities)
        if len(self.objectives) < 1:
            raise ProblemValidationError("at least one objective is required")
        for poly in (*self.objectives, *self.equalities, *self.inequalities):
            if poly.num_vars != self.n:
                raise ProblemValidationError(
                    f"polynomial has num_vars={poly.num_vars}, problem has n={self.n}")

    @property
    def p(self) -> int:
        return len(self.objectives)

    @property
    def l(self) -> int:
        return len(self.equalities)

    @property
    def m(self) -> int:
        return len(self.inequalities)

    def _point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatchError(f"point has shape {x.shape}, expected ({self.n},)")
        return x

    def f(self, x) -> np.ndarray:
        x = self._point(x)
        return np.array([poly.evaluate(x) for poly in self.objectives])

    def g(self, x) -> np.ndarray:
        x = self._point(x)
        return np.array([poly.evaluate(x) for poly in self.equalities])

    def h(self, x) -> np.ndarray:
        x = self._point(x)
        return np.array([poly.evaluate(x) for poly in self.inequalities])

    @cached_property
    def _objective_grads(self):
        return tuple(poly.gradient() for poly in self.objectives)

    @cached_property
    def _equality_grads(self):
        return tuple(poly.gradient() for poly in self.equalities)

    @cached_property
    def _inequality_grads(self):
        return tuple(poly.gradient() for poly in self.inequalities)

    @staticmethod
    def _jac(grads, x, n) -> np.ndarray:
        if not grads:
            return np.zeros((0, n))
        return np.array([[g.evaluate(x) for g in row] for row in grads])

    def jac_f(self, x) -> np.ndarray:
        return self._jac(self._objective_grads, self._point(x), self.n)

    def jac_g(self, x) -> np.ndarray:
        return self._jac(self._equality_grads, self._point(x), self.n)

    def jac_h(self, x) -> np.ndarray:
        return self._jac(self._inequality_grads, self._point(x), self.n)


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    max_equality_violation: float
    max_inequality_violation: float
    active: tuple[int, ...]   # 0-based indices into Problem.inequalities


def check_feasible(prob: Problem, x, tol_feas: float = DEFAULT_CONFIG.tol_feas,
                   tol_active: float = DEFAULT_CONFIG.tol_active) -> FeasibilityReport:
    """Violations are max_i |g_i(x)| and max_j max(0, -h_j(x))."""
    if tol_feas <= 0:
        raise ValueError("tol_feas must be positive")
    gv = prob.g(x)
    hv = prob.h(x)
    eq_viol = float(np.max(np.abs(gv))) if gv.size else 0.0
    ineq_viol = max(0.0, float(np.max(-hv))) if hv.size else 0.0
    active = tuple(int(j) for j in np.nonzero(np.abs(hv) <= tol_active)[0])
    return FeasibilityReport(
        feasible=eq_viol <= tol_feas and ineq_viol <= tol_feas,
        max_equality_violation=eq_viol,
        max_inequality_violation=ineq_viol,
        active=active,
    )


def _slice_residual(prob: Problem, r: float):
    """Residual stack [g; (||x||^2 - r^2)/(2r^2); max(0,-h)^2] and Jacobian.

    The sphere row is scaled by 1/(2r^2) so its value tracks the relative
    radius error (||x|| - r)/r and one absolute tolerance governs the whole
    stack at any radius; the zero set is unchanged.
    """
    def res_jac(x):
        gv = prob.g(x)
        hv = prob.h(x)
        sphere = (float(x @ x) - r * r) / (2.0 * r * r)
        viol = np.maximum(0.0, -hv)
        res = np.concatenate([gv, [sphere], viol ** 2])
        Jg = prob.jac_g(x)
        Jh = prob.jac_h(x)
        rows = [Jg, (x / (r * r))[None, :]]
        if prob.m:
            rows.append(-2.0 * viol[:, None] * Jh)
        return res, np.vstack(rows)
    return res_jac


def _slice_ok(prob: Problem, x, r: float, cfg: RunConfig) -> bool:
    report = check_feasible(prob, x, cfg.tol_feas, cfg.tol_active)
    return report.feasible and abs(float(np.linalg.norm(x)) - r) <= cfg.tol_feas * r


def project_to_sphere_slice(prob: Problem, r: float, x0,
                            cfg: RunConfig = DEFAULT_CONFIG,
                            seed: int | Sequence[int] | None = None) -> np.ndarray:
    """Locally project x0 onto S intersect {||x|| = r} by damped Gauss-Newton.

    Failure means the local search did not converge, not that the slice is
    empty.  Seeded random restarts (cfg.projection_restarts) run before
    giving up.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    x0 = prob._point(x0)
    res_jac = _slice_residual(prob, r)
    accept = lambda x: _slice_ok(prob, x, r, cfg)

    rng = np.random.default_rng([cfg.seed, 0x511CE] if seed is None
                                else [cfg.seed, 0x511CE, *np.atleast_1d(seed)])
    best_x, best_res = None, math.inf
    start = x0.copy()
    if np.linalg.norm(start) < 1e-12:
        start = r * random_unit_vector(rng, prob.n)
    for attempt in range(1 + cfg.projection_restarts):
        x, ok, resnorm = gauss_newton(res_jac, start, accept=accept,
                                      max_iter=cfg.projection_max_iter)
        if ok:
            return x
        if resnorm < best_res:
            best_x, best_res = x, resnorm
        start = r * random_unit_vector(rng, prob.n)
    raise ProjectionError(
        f"projection onto the radius-{r:g} slice did not converge "
        f"(best residual {best_res:.3e})",
        best_residual=best_res, best_point=best_x)


def polish_to_slice(prob: Problem, x, r: float,
                    cfg: RunConfig = DEFAULT_CONFIG) -> np.ndarray | None:
    """Drive a near-feasible point onto S intersect S_r as far as floats allow.

    Runs damped Gauss-Newton to a step stall instead of stopping at the value
    tolerance: near rank-deficient constraint gradients, value-level residuals
    can leave coordinates (and hence f-values at large radii) far off the
    feasible set. Returns None when the polish jumps away or lands infeasible.
    """
    x = prob._point(x)
    res_jac = _slice_residual(prob, r)
    polished, _, _ = gauss_newton(res_jac, x, accept=lambda _: False,
                                  max_iter=100)
    if np.linalg.norm(polished - x) > 1e-2 * (1.0 + r):
        return None
    if not _slice_ok(prob, polished, r, cfg):
        return None
    return polished


@dataclass
class RaySample:
    """One feasible point per converged radius, warm-started along the way."""
    points: list[tuple[float, np.ndarray]] = field(default_factory=list)
    failed_radii: list[float] = field(default_factory=list)

    @property
    def radii(self) -> list[float]:
        return [r for r, _ in self.points]


def sample_feasible_ray(prob: Problem, radii: Sequence[float], seed: int,
                        cfg: RunConfig = DEFAULT_CONFIG) -> RaySample:
    """Project a seeded start onto each sphere slice of a growing schedule."""
    radii = list(radii)
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing and positive")
    rng = np.random.default_rng([cfg.seed, 0xA11, seed])
    sample = RaySample()
    prev = None
    for r in radii:
        if prev is not None and np.linalg.norm(prev) > 1e-12:
            start = prev * (r / np.linalg.norm(prev))
        else:
            start = r * random_unit_vector(rng, prob.n)
        try:
            x = project_to_sphere_slice(prob, r, start, cfg, seed=[seed, int(r * 16)])
        except ProjectionError:
            sample.failed_radii.append(r)
            continue
        polished = polish_to_slice(prob, x, r, cfg)
        if polished is not None:
            x = polished
        sample.points.append((r, x))
        prev = x
    if not sample.points:
        raise RayError(f"all radii failed for seed {seed}")
    return sample


# -- problem files -----------------------------------------------------------

def problem_from_dict(data: dict) -> tuple[Problem, tuple[float, ...] | None]:
    """Build (Problem, ybar) from the JSON problem-file schema.

    Schema: {"n": int, "objectives": [expr...], "equalities": [expr...],
    "inequalities": [expr...], "ybar": [number or "+inf", ...]}. The ybar
    entry is optional.
    """
    if not isinstance(data, dict):
        raise ProblemValidationError("problem file must be a JSON object")
    try:
        n = int(data["n"])
    except (KeyError, TypeError, ValueError):
        raise ProblemValidationError("problem file needs an integer field 'n'") from None
    objectives = data.get("objectives")
    if not objectives:
        raise ProblemValidationError("problem file needs a nonempty 'objectives' list")

    def parse_all(key):
        exprs = data.get(key, [])
        if not isinstance(exprs, list):
            raise ProblemValidationError(f"'{key}' must be a list of expression strings")
        return tuple(parse(expr, n) for expr in exprs)

    prob = Problem(n=n,
                   objectives=parse_all("objectives"),
                   equalities=parse_all("equalities"),
                   inequalities=parse_all("inequalities"))
    ybar = None
    if data.get("ybar") is not None:
        ybar = parse_ybar(data["ybar"], prob.p)
    return prob, ybar


def parse_ybar(entries, p: int) -> tuple[float, ...]:
    """Entries are numbers or the token "+inf" (componentwise upper bounds)."""
    if isinstance(entries, str):
        entries = [tok.strip() for tok in entries.split(",")]
    out = []
    for entry in entries:
        if isinstance(entry, str) and entry.strip().lower() in ("+inf", "inf"):
            out.append(math.inf)
        else:
            try:
                out.append(float(entry))
            except (TypeError, ValueError):
                raise ProblemValidationError(
                    f"ybar entry {entry!r} is neither a number nor '+inf'") from None
    if len(out) != p:
        raise ProblemValidationError(
            f"ybar has {len(out)} entries, problem has {p} objectives")
    return tuple(out)


def load_problem(path) -> tuple[Problem, tuple[float, ...] | None]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemValidationError(f"invalid JSON in {path}: {exc}") from None
    return problem_from_dict(data)
