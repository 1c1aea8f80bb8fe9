"""Pointwise certificates: Rabier value, tangency-variety membership, and
the Mangasarian-Fromovitz direction probe.

All three take a feasible point of a Problem and are pure functions of
(problem, point, config). Complementarity is enforced through the activity
tolerance: an inequality multiplier is free (and nonnegative) only for
constraints with |h_j(x)| <= tol_active, and pinned to zero otherwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .config import DEFAULT_CONFIG, RunConfig
from .errors import InfeasiblePointError
from .problem import Problem, check_feasible
from .solvers import minimize_quadratic_pg, project_simplex


@dataclass(frozen=True)
class MultiplierVector:
    """Fritz-John multipliers (tau, lam, nu, mu) with their cone constraints."""
    tau: tuple[float, ...]
    lam: tuple[float, ...]
    nu: tuple[float, ...]
    mu: float

    def as_arrays(self):
        return (np.array(self.tau), np.array(self.lam),
                np.array(self.nu), self.mu)


@dataclass(frozen=True)
class RabierResult:
    value: float
    minimizer: MultiplierVector


@dataclass(frozen=True)
class MembershipResult:
    is_member: bool
    residual: float
    threshold: float
    witness: MultiplierVector | None
    tau_weight: float   # sum of tau in the witness; ~0 flags a degenerate witness


@dataclass(frozen=True)
class MfcqReport:
    holds: bool
    gradient_rank: int
    witness: tuple[float, ...] | None
    margin: float | None
    active: tuple[int, ...]


# constraint gradients below this fraction of the data scale are treated as
# zero when multipliers are unbounded: points pinned to a feasible set at
# float precision carry coordinate noise whose induced gradient error sits
# near 1e-8 of scale, and "cancelling" objective gradients against such noise
# needs multipliers ~1e8 and collapses the least-norm value spuriously
_NOISE_FLOOR = 1e-7


def _require_feasible(prob: Problem, x, cfg: RunConfig):
    report = check_feasible(prob, x, cfg.tol_feas, cfg.tol_active)
    if not report.feasible:
        raise InfeasiblePointError(
            f"point is infeasible (eq violation {report.max_equality_violation:.3e}, "
            f"ineq violation {report.max_inequality_violation:.3e})")
    return report


def _gradient_blocks(prob: Problem, x, active):
    """Columns: objective gradients F (n,p), equality gradients G (n,l),
    active inequality gradients H (n,|A|)."""
    F = prob.jac_f(x).T
    G = prob.jac_g(x).T
    Jh = prob.jac_h(x)
    H = Jh[list(active), :].T if active else np.zeros((prob.n, 0))
    return F, G, H


def _gradient_scale(F, G, x) -> float:
    """Reference magnitude for rank decisions: the data the multipliers act on."""
    parts = [1.0, float(np.linalg.norm(x))]
    if F.size:
        parts.append(float(np.max(np.linalg.norm(F, axis=0))))
    if G.size:
        parts.append(float(np.max(np.linalg.norm(G, axis=0))))
    return max(parts)


def rabier_value(prob: Problem, x, cfg: RunConfig = DEFAULT_CONFIG) -> RabierResult:
    """Least residual norm of a simplex-weighted objective-gradient
    combination minus a conic combination of constraint gradients.

    Solves min ||F tau - G lam - H nu|| with tau on the unit simplex, lam
    free, nu >= 0 on the active face only. lam is eliminated exactly by
    projecting onto the orthogonal complement of span(G); the reduced convex
    problem runs through the projected-gradient QP.
    """
    x = prob._point(x)
    report = _require_feasible(prob, x, cfg)
    active = report.active
    F, G, H = _gradient_blocks(prob, x, active)
    p, na = prob.p, len(active)

    floor = max(cfg.tol_rank, _NOISE_FLOOR) * _gradient_scale(F, G, x)
    lam_solve = None
    if G.shape[1]:
        # orthonormal basis of span(G) at numerical rank; the cutoff is
        # floored at the problem's own gradient scale, otherwise equality
        # gradients that are pure rounding noise (degenerate feasible sets)
        # admit huge multipliers and collapse the value spuriously
        U, sv, Vt = np.linalg.svd(G, full_matrices=False)
        rank = int(np.sum(sv > floor))
        Q = U[:, :rank]
        proj = lambda A: A - Q @ (Q.T @ A)
        lam_solve = lambda t: Vt[:rank].T @ ((Q.T @ t) / sv[:rank])
    else:
        proj = lambda A: A

    # same guard for the conic side: a noise-level inequality gradient
    # would let nu cancel real objective directions with huge multipliers
    if na:
        keep = [slot for slot in range(na)
                if np.linalg.norm(H[:, slot]) > floor]
        H = H[:, keep]
        active = tuple(active[slot] for slot in keep)
        na = len(active)

    M = np.hstack([proj(F), -proj(H)]) if na else proj(F)

    def project(z):
        z = z.copy()
        z[:p] = project_simplex(z[:p])
        if na:
            z[p:] = np.maximum(z[p:], 0.0)
        return z

    z0 = np.concatenate([np.full(p, 1.0 / p), np.zeros(na)])
    z, _ = minimize_quadratic_pg(M, project, z0, tol_decrease=1e-9)

    tau = z[:p]
    nu_active = z[p:]
    target = F @ tau - (H @ nu_active if na else 0.0)
    lam = lam_solve(target) if lam_solve is not None else np.zeros(0)
    residual = target - (G @ lam if G.shape[1] else 0.0)
    nu = np.zeros(prob.m)
    for slot, j in enumerate(active):
        nu[j] = nu_active[slot]
    minimizer = MultiplierVector(tau=tuple(tau), lam=tuple(lam),
                                 nu=tuple(nu), mu=0.0)
    return RabierResult(value=float(np.linalg.norm(residual)), minimizer=minimizer)


def tangency_membership(prob: Problem, x,
                        cfg: RunConfig = DEFAULT_CONFIG) -> MembershipResult:
    """Decide whether some nonzero (tau, lam, nu, mu) with tau >= 0, nu >= 0
    complementary balances F tau - G lam - H nu - mu x = 0.

    The l1-style normalization sum(tau) + sum|lam| + sum(nu) + |mu| = 1 turns
    the decision into 2^(l+1) convex subproblems, one per sign pattern of
    (lam, mu), each a quadratic over the unit simplex. Each gradient column
    is normalized to unit length first (multipliers absorb the scales), so
    the solve is well conditioned and the reported residual is relative to
    the gradient magnitudes; membership is invariant under rescaling the
    data and under the normalization itself.
    """
    x = prob._point(x)
    report = _require_feasible(prob, x, cfg)
    active = report.active
    F, G, H = _gradient_blocks(prob, x, active)
    p, l, na = prob.p, prob.l, len(active)
    d = p + l + na + 1

    base_cols = np.hstack([F, G, H, x[:, None]])
    col_norms = np.linalg.norm(base_cols, axis=0)
    biggest = float(np.max(col_norms, initial=0.0))
    col_scale = np.maximum(col_norms, 1e-12 * max(1.0, biggest))
    threshold = cfg.tol_membership

    best = None
    for pattern in itertools.product((1.0, -1.0), repeat=l + 1):
        signs_lam = np.array(pattern[:l])
        sign_mu = pattern[l]
        cols = [F]
        if l:
            cols.append(-G * signs_lam[None, :])
        if na:
            cols.append(-H)
        cols.append(-sign_mu * x[:, None])
        M = np.hstack(cols) / col_scale[None, :]
        z0 = np.full(d, 1.0 / d)
        z, residual = minimize_quadratic_pg(M, project_simplex, z0,
                                            tol_decrease=1e-12)
        if best is None or residual < best[0]:
            best = (residual, z, signs_lam, sign_mu)

    residual, z, signs_lam, sign_mu = best
    # map back to multipliers for the unnormalized gradients
    z_true = z / col_scale
    total = float(np.sum(z_true))
    z_true = z_true / total if total > 0 else z_true
    tau = z_true[:p]
    lam = signs_lam * z_true[p:p + l] if l else np.zeros(0)
    nu = np.zeros(prob.m)
    for slot, j in enumerate(active):
        nu[j] = z_true[p + l + slot]
    mu = sign_mu * z_true[-1]
    is_member = residual <= threshold
    witness = MultiplierVector(tau=tuple(tau), lam=tuple(lam),
                               nu=tuple(nu), mu=float(mu)) if is_member else None
    return MembershipResult(is_member=is_member, residual=float(residual),
                            threshold=float(threshold), witness=witness,
                            tau_weight=float(np.sum(tau)))


def mfcq_probe(prob: Problem, x, cfg: RunConfig = DEFAULT_CONFIG) -> MfcqReport:
    """Check the Mangasarian-Fromovitz conditions at a feasible point:
    equality gradients of full rank plus a direction v with <grad g_i, v> = 0
    and <grad h_j, v> > 0 for active j.

    The direction is found by an LP maximizing the worst active margin under
    a box on v; a second LP picks the sparsest optimal direction so reported
    witnesses are clean. The margin is re-reported at unit Euclidean norm.
    """
    x = prob._point(x)
    report = _require_feasible(prob, x, cfg)
    active = report.active
    Jg = prob.jac_g(x)
    l, n = prob.l, prob.n

    if l:
        sv = np.linalg.svd(Jg, compute_uv=False)
        floor = cfg.tol_rank * max(1.0, float(np.linalg.norm(x)),
                                   float(sv[0]) if sv.size else 0.0)
        rank = int(np.sum(sv > floor))
    else:
        rank = 0
    if rank < l:
        return MfcqReport(holds=False, gradient_rank=rank, witness=None,
                          margin=None, active=active)
    if not active:
        return MfcqReport(holds=True, gradient_rank=rank, witness=None,
                          margin=math.inf, active=active)

    Jh = prob.jac_h(x)[list(active), :]
    # stage 1: maximize s subject to Jg v = 0, Jh v >= s, |v|_inf <= 1
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-Jh, np.ones((len(active), 1))])
    b_ub = np.zeros(len(active))
    A_eq = np.hstack([Jg, np.zeros((l, 1))]) if l else None
    b_eq = np.zeros(l) if l else None
    bounds = [(-1.0, 1.0)] * n + [(None, None)]
    lp = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                 bounds=bounds, method="highs")
    if not lp.success:
        return MfcqReport(holds=False, gradient_rank=rank, witness=None,
                          margin=None, active=active)
    s_star = float(-lp.fun)
    if s_star <= cfg.tol_margin:
        return MfcqReport(holds=False, gradient_rank=rank, witness=None,
                          margin=float(s_star), active=active)

    v = _sparsest_direction(Jg, Jh, s_star, n)
    if v is None:
        v = np.asarray(lp.x[:n], dtype=float)
    norm = float(np.linalg.norm(v))
    unit = v / norm
    margin = float(np.min(Jh @ unit))
    return MfcqReport(holds=True, gradient_rank=rank,
                      witness=tuple(float(t) for t in unit),
                      margin=margin, active=active)


def _sparsest_direction(Jg, Jh, s_star, n):
    """min ||v||_1 with the stage-1 margin held; v split into v = a - b."""
    rhs = s_star - 1e-9 * max(1.0, abs(s_star))
    c = np.ones(2 * n)
    A_ub = np.hstack([-Jh, Jh])
    b_ub = np.full(Jh.shape[0], -rhs)
    A_eq = np.hstack([Jg, -Jg]) if Jg.shape[0] else None
    b_eq = np.zeros(Jg.shape[0]) if Jg.shape[0] else None
    bounds = [(0.0, 1.0)] * (2 * n)
    lp = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                 bounds=bounds, method="highs")
    if not lp.success:
        return None
    v = np.asarray(lp.x[:n]) - np.asarray(lp.x[n:])
    if np.linalg.norm(v) < 1e-14:
        return None
    return v
