"""Shared numerical machinery: simplex projection, projected-gradient QP,
damped Gauss-Newton, and an augmented-Lagrangian local solver.

Everything here is deterministic given its inputs; randomness always enters
through an explicit numpy Generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .errors import DivergenceError


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(n)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the unit simplex (sort-based, O(d log d))."""
    v = np.asarray(v, dtype=float)
    if v.size == 1:
        return np.ones(1)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, v.size + 1)
    cond = u - css / ks > 0
    k = ks[cond][-1]
    tau = css[cond][-1] / k
    return np.maximum(v - tau, 0.0)


def minimize_quadratic_pg(M: np.ndarray, project, z0: np.ndarray, *,
                          tol_decrease: float = 1e-9, max_iter: int = 5000,
                          patience: int = 25) -> tuple[np.ndarray, float]:
    """Minimize ||M z|| over a convex set via FISTA with restarts.

    `project` maps R^d onto the set. Columns are jointly rescaled so the
    step size is well conditioned; the argmin is unchanged. Returns the best
    iterate and its true residual norm. Stops once the best residual has not
    improved by `tol_decrease` for `patience` iterations.
    """
    M = np.asarray(M, dtype=float)
    n, d = M.shape
    z0 = project(np.asarray(z0, dtype=float))
    if d == 0:
        return z0, 0.0
    scale = float(np.max(np.linalg.norm(M, axis=0))) if n else 0.0
    if scale == 0.0:
        return z0, 0.0
    Mh = M / scale
    Q = Mh.T @ Mh
    lip = 2.0 * float(np.linalg.norm(Q, 2))
    if lip == 0.0:
        return z0, 0.0
    step = 1.0 / lip

    z = z0
    y = z.copy()
    t = 1.0
    best_z = z
    best_r = float(np.linalg.norm(Mh @ z))
    stall = 0
    last_obj = best_r
    for _ in range(max_iter):
        z_new = project(y - step * 2.0 * (Q @ y))
        r_new = float(np.linalg.norm(Mh @ z_new))
        if r_new < best_r - tol_decrease / scale:
            best_z, best_r, stall = z_new, r_new, 0
        else:
            if r_new < best_r:
                best_z, best_r = z_new, r_new
            stall += 1
            if stall >= patience:
                break
        if r_new > last_obj:          # lost monotonicity: restart momentum
            y = z_new.copy()
            t = 1.0
        else:
            t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            y = z_new + ((t - 1.0) / t_new) * (z_new - z)
            t = t_new
        z = z_new
        last_obj = r_new
        if best_r * scale < 1e-15 * max(1.0, scale):
            break
    return best_z, best_r * scale


def gauss_newton(res_jac, x0, *, accept, max_iter: int = 200,
                 lm0: float = 1e-3) -> tuple[np.ndarray, bool, float]:
    """Damped (Levenberg-Marquardt) Gauss-Newton until `accept(x)` holds.

    `res_jac(x)` returns the residual vector and its Jacobian. Returns
    (x, accepted, final residual norm).
    """
    x = np.asarray(x0, dtype=float).copy()
    n = x.size
    lam = lm0
    r, J = res_jac(x)
    phi = 0.5 * float(r @ r)
    for _ in range(max_iter):
        if accept(x):
            return x, True, float(np.linalg.norm(r))
        A = J.T @ J
        b = -J.T @ r
        diag = np.maximum(np.diag(A), 1e-12)
        stepped = False
        for _ in range(30):
            try:
                d = np.linalg.solve(A + lam * np.diag(diag), b)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            if not np.all(np.isfinite(d)):
                lam *= 10.0
                continue
            x_new = x + d
            r_new, J_new = res_jac(x_new)
            phi_new = 0.5 * float(r_new @ r_new)
            if phi_new < phi:
                x, r, J, phi = x_new, r_new, J_new, phi_new
                lam = max(lam * 0.3, 1e-14)
                stepped = True
                break
            lam *= 10.0
        if not stepped:
            break
    return x, accept(x), float(np.linalg.norm(r))


@dataclass
class AuglagResult:
    x: np.ndarray
    objective: float
    outcome: str                 # converged | infeasible | iteration_limit
    violation: float
    stationarity: float
    eq_multipliers: np.ndarray
    ineq_multipliers: np.ndarray
    outer_iterations: int

    @property
    def converged(self) -> bool:
        return self.outcome == "converged"


def minimize_auglag(objective, x0, *, equalities=None, inequalities=None,
                    tol_feas: float = 1e-8, tol_feas_loose: float | None = None,
                    gtol: float = 1e-9, max_outer: int = 30, rho0: float = 10.0,
                    rho_growth: float = 10.0, rho_max: float = 1e12,
                    inner_maxiter: int = 300,
                    divergence_cap: float | None = None) -> AuglagResult:
    """Powell-Hestenes-Rockafellar augmented Lagrangian with an L-BFGS-B core.

    `objective(x)` returns (value, gradient). `equalities(x)` returns
    (values, jacobian) targeting 0; `inequalities(x)` the same targeting
    >= 0. Raises DivergenceError once iterates reach `divergence_cap` in
    infinity norm. Stationarity is judged relative to the local gradient
    scale, feasibility absolutely.

    tol_feas is the target; tol_feas_loose (>= tol_feas) is a fallback
    acceptance when the budget runs out or the iterate stalls, for
    constraint sets whose violation cannot reach the target at any bounded
    penalty (rank-deficient gradients). Callers using the loose tier should
    re-polish and re-check the result.
    """
    x = np.asarray(x0, dtype=float).copy()
    n = x.size
    loose = tol_feas if tol_feas_loose is None else max(tol_feas, tol_feas_loose)

    def eq(xv):
        if equalities is None:
            return np.zeros(0), np.zeros((0, n))
        return equalities(xv)

    def ineq(xv):
        if inequalities is None:
            return np.zeros(0), np.zeros((0, n))
        return inequalities(xv)

    e0, _ = eq(x)
    c0, _ = ineq(x)
    y = np.zeros(e0.size)
    nu = np.zeros(c0.size)
    rho = rho0

    bound = divergence_cap if divergence_cap is not None else np.inf
    bounds = [(-bound, bound)] * n if np.isfinite(bound) else None

    def violation_of(ev, cv):
        parts = [0.0]
        if ev.size:
            parts.append(float(np.max(np.abs(ev))))
        if cv.size:
            parts.append(float(np.max(np.maximum(0.0, -cv))))
        return max(parts)

    def al_value_grad(xv):
        fval, fgrad = objective(xv)
        ev, Je = eq(xv)
        cv, Jc = ineq(xv)
        val = fval
        grad = fgrad.copy()
        if ev.size:
            val += float(-y @ ev + 0.5 * rho * ev @ ev)
            grad += Je.T @ (rho * ev - y)
        if cv.size:
            shifted = np.maximum(0.0, nu - rho * cv)
            val += float((shifted @ shifted - nu @ nu) / (2.0 * rho))
            grad -= Jc.T @ shifted
        return val, grad

    prev_violation = math.inf
    prev_x = None
    stalled = 0
    feasible_stall = 0
    outcome = "iteration_limit"
    result_x = x
    for outer in range(1, max_outer + 1):
        res = scipy_minimize(al_value_grad, x, jac=True, method="L-BFGS-B",
                             bounds=bounds,
                             options={"maxiter": inner_maxiter,
                                      "ftol": 1e-16, "gtol": 1e-12})
        x = np.asarray(res.x, dtype=float)
        if np.isfinite(bound) and float(np.max(np.abs(x))) >= 0.999 * bound:
            raise DivergenceError(
                f"iterates reached the norm cap {bound:g}; "
                "the subproblem is likely unbounded", point=x)
        ev, Je = eq(x)
        cv, Jc = ineq(x)
        viol = violation_of(ev, cv)
        _, al_grad = al_value_grad(x)
        fval, fgrad = objective(x)
        gscale = max(1.0, float(np.max(np.abs(fgrad))) if fgrad.size else 1.0)
        if Je.size:
            gscale = max(gscale, float(np.max(np.abs(Je))))
        if Jc.size:
            gscale = max(gscale, float(np.max(np.abs(Jc))))
        stationarity = float(np.max(np.abs(al_grad))) if al_grad.size else 0.0

        if viol <= tol_feas and stationarity <= gtol * gscale:
            outcome = "converged"
            result_x = x
            break
        # stuck at an acceptable point: take it once the iterate stops moving
        # (covers degenerate geometry where constraint gradients vanish and
        # no multiplier can cancel the objective gradient)
        if viol <= loose and prev_x is not None \
                and float(np.linalg.norm(x - prev_x)) <= 1e-9 * (1.0 + float(np.linalg.norm(x))):
            feasible_stall += 1
            if feasible_stall >= 2 and outer >= 3:
                outcome = "converged"
                result_x = x
                break
        else:
            feasible_stall = 0
        prev_x = x.copy()
        # multiplier / penalty updates
        if viol <= max(tol_feas, 0.25 * prev_violation):
            y_new = y - rho * ev
            nu_new = np.maximum(0.0, nu - rho * cv)
            caps = [np.max(np.abs(y_new), initial=0.0),
                    np.max(np.abs(nu_new), initial=0.0)]
            if max(caps) <= 1e8:
                # degenerate constraints have no bounded multiplier; beyond
                # the cap the estimates only thrash, so switch to penalty
                y, nu = y_new, nu_new
            if viol <= loose and stationarity > gtol * gscale:
                # acceptable violation but not stationary: tighten the
                # penalty so the iterate stops orbiting the feasible set
                rho = min(rho * rho_growth, rho_max)
            stalled = 0
        else:
            rho = min(rho * rho_growth, rho_max)
            if rho >= rho_max and viol > 10.0 * loose:
                if abs(viol - prev_violation) <= 0.1 * max(viol, prev_violation):
                    stalled += 1
                    if stalled >= 2:
                        outcome = "infeasible"
                        result_x = x
                        break
                else:
                    stalled = 0
        prev_violation = viol
        result_x = x

    ev, _ = eq(result_x)
    cv, _ = ineq(result_x)
    if outcome == "iteration_limit" and violation_of(ev, cv) <= loose:
        outcome = "converged"
    fval, _ = objective(result_x)
    _, al_grad = al_value_grad(result_x)
    return AuglagResult(
        x=result_x,
        objective=float(fval),
        outcome=outcome,
        violation=violation_of(ev, cv),
        stationarity=float(np.max(np.abs(al_grad))) if al_grad.size else 0.0,
        eq_multipliers=y,
        ineq_multipliers=nu,
        outer_iterations=outer,
    )


def simplex_lattice(p: int, points_per_axis: int) -> list[np.ndarray]:
    """Deterministic uniform lattice on the unit simplex."""
    if p == 1:
        return [np.ones(1)]
    if points_per_axis < 2:
        return [np.full(p, 1.0 / p)]
    g = points_per_axis - 1
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(np.array(prefix + [remaining], dtype=float) / g)
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, slots - 1)

    rec([], g, p)
    return out
