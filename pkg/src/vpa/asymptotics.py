"""Sphere-tracking evidence for the asymptotic behaviour of f on S, and the
classification of properness, Palais-Smale, Cerami, and M-tameness at a
reference value ybar.

Evidence comes from sequences of feasible points with growing norms: Pareto
points of randomly weighted objectives on S intersect spheres of scheduled
radii (warm-started continuation), feasible rays, and user-supplied custom
rays. Each point is summarised in a TraceRecord carrying the Rabier value,
its radius-scaled variant, and tangency membership. Classification searches
the traces for diverging, f-convergent subsequences below ybar whose
defining quantity vanishes (or stays in the tangency variety), and reports
holds_evidence / fails_witness / inconclusive per condition. Emptiness of an
asymptotic set is not decidable by sampling; holds_evidence is sampled
evidence, never a proof.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .certificates import rabier_value, tangency_membership
from .config import DEFAULT_CONFIG, RunConfig
from .errors import ClassifyError, DivergenceError, InfeasiblePointError, TraceError
from .problem import (Problem, RaySample, check_feasible, polish_to_slice,
                      project_to_sphere_slice)
from .solvers import minimize_auglag, random_unit_vector, simplex_lattice

CONDITIONS = ("proper", "palais_smale", "cerami", "m_tame")

# a witness sequence must span at least this many decades and reach the top
_MIN_SPAN_DECADES = 2.0
_COVERAGE_DECADES = 3.0
_TREND_SLACK = 1.001


def ybar_all_infinite(ybar: Sequence[float]) -> bool:
    return all(math.isinf(y) for y in ybar)


def below_ybar(fval: Sequence[float], ybar: Sequence[float],
               slack: float = DEFAULT_CONFIG.tol_active) -> bool:
    """Componentwise f <= ybar with a small absolute-relative slack."""
    return all(v <= y + slack * max(1.0, abs(y)) if math.isfinite(y) else True
               for v, y in zip(fval, ybar))


@dataclass(frozen=True)
class TraceRecord:
    radius: float
    point: tuple[float, ...]
    f_value: tuple[float, ...]
    rabier: float
    scaled_rabier: float
    in_tangency: bool
    below_ybar: bool


@dataclass
class TraceResult:
    """One coherent sequence of trace records plus gathering bookkeeping.

    coverage_radii holds every scheduled radius where the subproblem was
    resolved: either a point was produced or the below-ybar slice was judged
    empty (positive evidence). counts_for_coverage is False for traces that
    were not constrained to the section when ybar is finite.
    """
    label: str
    records: list[TraceRecord] = field(default_factory=list)
    attempted_radii: list[float] = field(default_factory=list)
    coverage_radii: list[float] = field(default_factory=list)
    filtered_radii: list[float] = field(default_factory=list)
    counts_for_coverage: bool = True

    @classmethod
    def from_records(cls, records: Iterable[TraceRecord],
                     label: str = "custom") -> "TraceResult":
        records = sorted(records, key=lambda r: r.radius)
        radii = [r.radius for r in records]
        return cls(label=label, records=records, attempted_radii=radii,
                   coverage_radii=list(radii))


def make_record(prob: Problem, ybar: Sequence[float], x,
                cfg: RunConfig = DEFAULT_CONFIG) -> TraceRecord:
    """Certificate summary of one feasible point (raises if infeasible).

    The below-ybar slack grows with the radius, matching what local solvers
    can enforce on section cuts far out; witness limits carry the same
    uncertainty either way.
    """
    x = prob._point(x)
    fval = prob.f(x)
    radius = float(np.linalg.norm(x))
    rab = rabier_value(prob, x, cfg).value
    member = tangency_membership(prob, x, cfg).is_member
    slack = cfg.tol_active + cfg.tol_feas * max(1.0, radius)
    return TraceRecord(
        radius=radius,
        point=tuple(float(t) for t in x),
        f_value=tuple(float(t) for t in fval),
        rabier=rab,
        scaled_rabier=radius * rab,
        in_tangency=member,
        below_ybar=below_ybar(fval, ybar, slack),
    )


def trace_from_points(prob: Problem, ybar: Sequence[float], points,
                      cfg: RunConfig = DEFAULT_CONFIG,
                      label: str = "custom") -> TraceResult:
    """Build a trace from explicit points (e.g. a hand-derived ray).

    Infeasible points are skipped rather than fatal, so approximate rays
    survive, but at least one point must pass.
    """
    records = []
    skipped = 0
    for x in points:
        try:
            records.append(make_record(prob, ybar, x, cfg))
        except InfeasiblePointError:
            skipped += 1
    if not records:
        raise TraceError(f"no feasible point among the {skipped} supplied")
    return TraceResult.from_records(records, label=label)


def ray_to_trace(prob: Problem, ybar: Sequence[float], ray: RaySample,
                 cfg: RunConfig = DEFAULT_CONFIG,
                 label: str = "ray") -> TraceResult:
    result = TraceResult(label=label,
                         counts_for_coverage=ybar_all_infinite(ybar))
    for r, x in ray.points:
        result.attempted_radii.append(r)
        try:
            rec = make_record(prob, ybar, x, cfg)
        except InfeasiblePointError:
            continue
        result.coverage_radii.append(r)
        if rec.below_ybar or ybar_all_infinite(ybar):
            result.records.append(rec)
        else:
            result.filtered_radii.append(r)
    result.attempted_radii.extend(ray.failed_radii)
    return result


# -- sphere-constrained Pareto subproblems ------------------------------------

def _sphere_subproblem(prob: Problem, r: float, weights: np.ndarray,
                       ybar: Sequence[float], start: np.ndarray,
                       cfg: RunConfig):
    """Minimize the weighted objective sum over S, the radius-r sphere, and
    (for finite ybar components) the section f_k <= ybar_k.

    Keeping the section constraints inside the subproblem mirrors how
    below-ybar Fritz-John points arise in the theory: the extra objective
    multipliers fold into tau, so converged points still sit in the tangency
    variety. The sphere residual is scaled by 1/(2r) for conditioning.
    """
    finite = [(k, y) for k, y in enumerate(ybar) if math.isfinite(y)]

    # normalize the weighted objective to O(1) at the start: far out on the
    # sphere its gradient grows polynomially in r and would otherwise
    # overpower any bounded penalty on degenerate constraint sets
    g0 = weights @ prob.jac_f(start)
    obj_scale = 1.0 + float(np.max(np.abs(g0))) if g0.size else 1.0

    def objective(x):
        val = float(weights @ prob.f(x)) / obj_scale
        grad = (weights @ prob.jac_f(x)) / obj_scale
        return val, grad

    def equalities(x):
        gv = prob.g(x)
        sphere = (float(x @ x) - r * r) / (2.0 * r * r)
        vals = np.concatenate([gv, [sphere]])
        jac = np.vstack([prob.jac_g(x), (x / (r * r))[None, :]])
        return vals, jac

    def inequalities(x):
        hv = prob.h(x)
        Jh = prob.jac_h(x)
        if not finite:
            return hv, Jh
        Jf = prob.jac_f(x)
        fv = prob.f(x)
        rows = [hv] + [[y - fv[k]] for k, y in finite]
        jacs = [Jh] + [-Jf[k][None, :] for k, _ in finite]
        return np.concatenate(rows), np.vstack(jacs)

    # the loose tier scales with r: degenerate constraint sets keep the raw
    # violation above tol_feas at large radii no matter the penalty; the
    # Gauss-Newton polish and the final absolute acceptance gate restore
    # record-level accuracy afterwards
    return minimize_auglag(
        objective, start,
        equalities=equalities,
        inequalities=inequalities if (prob.m or finite) else None,
        tol_feas=cfg.tol_feas,
        tol_feas_loose=cfg.tol_feas * max(1.0, r),
        gtol=1e-9,
        divergence_cap=max(cfg.divergence_cap, 10.0 * r),
    )




def trace_tangency(prob: Problem, ybar: Sequence[float],
                   radii: Sequence[float], weights_seed: int,
                   cfg: RunConfig = DEFAULT_CONFIG) -> list[TraceResult]:
    """Track approximate Pareto points of f on S intersect S_r over a radius
    schedule, one warm-started chain per weight draw.

    Weights are seeded simplex draws per radius; chain c at radius k warm
    starts from chain c at radius k-1. Radii where the local solver fails
    are dropped; radii where the below-ybar slice is judged empty still
    count as resolved coverage. Raises TraceError when nothing converges.
    """
    radii = list(radii)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    filtering = not ybar_all_infinite(ybar)
    nw = cfg.weights_per_radius
    chains = [TraceResult(label=f"pareto-chain-{c:02d}") for c in range(nw)]
    prev: list[np.ndarray | None] = [None] * nw

    # one weight vector per chain, held fixed across the whole schedule:
    # redrawing per radius makes a chain chase a different Pareto point at
    # every step and destroys the f-convergence the classifier looks for
    rng = np.random.default_rng([cfg.seed, weights_seed])
    chain_weights = _chain_weight_draws(prob.p, nw, rng)

    for ridx, r in enumerate(radii):
        for c in range(nw):
            chain = chains[c]
            chain.attempted_radii.append(r)
            status, x = _resolve_radius(prob, r, chain_weights[c], ybar, prev[c],
                                        cfg, seed=[weights_seed, ridx, c])
            if status == "empty":
                # the below-ybar slice at this radius looks empty from every
                # restart: resolved coverage with no point
                chain.coverage_radii.append(r)
                continue
            if status != "point":
                continue
            rec = make_record(prob, ybar, x, cfg)
            chain.coverage_radii.append(r)
            prev[c] = x
            if rec.below_ybar or not filtering:
                chain.records.append(rec)
            else:
                chain.filtered_radii.append(r)

    if not any(chain.coverage_radii for chain in chains):
        raise TraceError("no radius converged in any chain")
    return chains


def _chain_weight_draws(p: int, count: int, rng) -> list[np.ndarray]:
    """Half a small deterministic lattice, half seeded simplex draws."""
    lattice = simplex_lattice(p, max(2, (count + 1) // 2)) if p > 1 else []
    draws = list(lattice[:count])
    while len(draws) < count:
        draws.append(rng.dirichlet(np.ones(p)))
    return draws


def _slice_point_ok(prob, x, r, ybar, cfg):
    report = check_feasible(prob, x, cfg.tol_feas, cfg.tol_active)
    if not (report.feasible
            and abs(float(np.linalg.norm(x)) - r) <= cfg.tol_feas * r):
        return False
    # section cuts must stay satisfied when the trace is filtered to them
    slack = cfg.tol_active + cfg.tol_feas * max(1.0, r)
    return below_ybar(prob.f(x), ybar, slack)


def _finish_point(prob, r, weights, ybar, x, cfg, active_from=None):
    refined = _kkt_polish(prob, r, weights, ybar, x, cfg,
                          active_from=active_from)
    if refined is not None:
        x = refined
    polished = polish_to_slice(prob, x, r, cfg)
    if polished is not None:
        x = polished
    return x if _slice_point_ok(prob, x, r, ybar, cfg) else None


def _resolve_radius(prob, r, weights, ybar, warm, cfg, seed):
    """One (radius, weight) subproblem: Newton continuation from the warm
    point when available, otherwise augmented-Lagrangian attempts from
    projected starts.

    Returns ("point", x) on success, ("empty", None) when every projected
    attempt reports an infeasible slice, ("failed", None) otherwise.
    """
    if warm is not None and np.linalg.norm(warm) > 1e-12:
        guess = warm * (r / np.linalg.norm(warm))
        x = _finish_point(prob, r, weights, ybar, guess, cfg, active_from=warm)
        if x is not None:
            return "point", x

    attempts = 3
    projected_attempts = 0
    infeasible_votes = 0
    for attempt in range(attempts):
        if attempt == 0 and warm is not None and np.linalg.norm(warm) > 1e-12:
            start, projected = warm * (r / np.linalg.norm(warm)), False
        else:
            start, projected = _chain_start(prob, r, None, cfg,
                                            seed=[*seed, attempt])
        projected_attempts += int(projected)
        try:
            res = _sphere_subproblem(prob, r, weights, ybar, start, cfg)
        except DivergenceError:
            continue
        if res.outcome == "infeasible":
            # emptiness evidence only counts from a start that actually sat
            # on S intersect S_r; anything else is just a failed solve
            if projected:
                infeasible_votes += 1
            continue
        if res.outcome != "converged":
            continue
        x = _finish_point(prob, r, weights, ybar, res.x, cfg)
        if x is not None:
            return "point", x
    if projected_attempts >= 2 and infeasible_votes == projected_attempts:
        return "empty", None
    return "failed", None


def _kkt_polish(prob, r, weights, ybar, x0, cfg, active_from=None):
    """Newton (damped, exact Hessians) on the active-set KKT system of the
    sphere subproblem.

    Local solvers leave points with loose stationarity when the sphere
    radius makes the raw variables badly scaled; a few KKT Newton steps pin
    the point quadratically so the recorded Rabier values reflect the true
    subproblem optimum. `active_from` lets warm continuation detect the
    active set at the previous radius point, where it is reliable. Returns
    None when the polish wanders or fails.
    """
    n = prob.n
    x0 = np.asarray(x0, dtype=float)
    finite = [(k, y) for k, y in enumerate(ybar) if math.isfinite(y)]
    g0 = weights @ prob.jac_f(x0)
    obj_scale = 1.0 + float(np.max(np.abs(g0))) if g0.size else 1.0

    probe = x0 if active_from is None else np.asarray(active_from, dtype=float)
    hv0 = prob.h(probe)
    fv0 = prob.f(probe)
    window = max(cfg.tol_active, cfg.tol_feas * max(1.0, r) * 10.0)
    active_h = [j for j in range(prob.m) if hv0[j] <= window * (1.0 + abs(hv0[j]))]
    active_cut = [k for k, y in finite
                  if (y - fv0[k]) <= window * max(1.0, abs(y))]

    def obj_grad_hess(x):
        grad = (weights @ prob.jac_f(x)) / obj_scale
        H = sum(w * poly.hessian_at(x)
                for w, poly in zip(weights, prob.objectives)) / obj_scale
        return grad, H

    def solve_for(active_h, active_cut, x_start):
        def constraint_rows(x):
            vals, jacs, hess = [], [], []
            Jf = prob.jac_f(x)
            Jg = prob.jac_g(x)
            Jh = prob.jac_h(x)
            gv = prob.g(x)
            hv = prob.h(x)
            fv = prob.f(x)
            for i, poly in enumerate(prob.equalities):
                vals.append(gv[i])
                jacs.append(Jg[i])
                hess.append(poly.hessian_at(x))
            vals.append((float(x @ x) - r * r) / (2.0 * r * r))
            jacs.append(x / (r * r))
            hess.append(np.eye(n) / (r * r))
            for j in active_h:
                vals.append(hv[j])
                jacs.append(Jh[j])
                hess.append(prob.inequalities[j].hessian_at(x))
            for k in active_cut:
                vals.append(ybar[k] - fv[k])
                jacs.append(-Jf[k])
                hess.append(-prob.objectives[k].hessian_at(x))
            return (np.array(vals), np.array(jacs).reshape(len(vals), n), hess)

        vals0, jacs0, _ = constraint_rows(x_start)
        grad0, _ = obj_grad_hess(x_start)
        lam0 = np.linalg.lstsq(jacs0.T, grad0, rcond=None)[0]
        k = vals0.size

        def res_jac(z):
            x, lam = z[:n], z[n:]
            vals, jacs, hess = constraint_rows(x)
            grad, Hobj = obj_grad_hess(x)
            stat = grad - jacs.T @ lam
            Hlag = Hobj - sum(l * Hc for l, Hc in zip(lam, hess))
            J = np.zeros((n + k, n + k))
            J[:n, :n] = Hlag
            J[:n, n:] = -jacs.T
            J[n:, :n] = jacs
            return np.concatenate([stat, vals]), J

        z = _newton_stall(res_jac, np.concatenate([x_start, lam0]), max_iter=60)
        return z[:n], z[n:]

    # active-set correction: inequality rows whose multiplier comes out
    # negative are not binding at the true subproblem optimum; drop and redo
    x = x0
    for _ in range(3):
        x_new, lam = solve_for(active_h, active_cut, x)
        if not np.all(np.isfinite(x_new)):
            return None
        x = x_new
        base = prob.l + 1
        lam_scale = 1.0 + float(np.max(np.abs(lam), initial=0.0))
        bad_h = [j for slot, j in enumerate(active_h)
                 if lam[base + slot] < -1e-7 * lam_scale]
        nh = len(active_h)
        bad_cut = [k for slot, k in enumerate(active_cut)
                   if lam[base + nh + slot] < -1e-7 * lam_scale]
        if not bad_h and not bad_cut:
            break
        active_h = [j for j in active_h if j not in bad_h]
        active_cut = [k for k in active_cut if k not in bad_cut]
    if np.linalg.norm(x - x0) > 5e-2 * (1.0 + r):
        return None
    return x


def _newton_stall(res_jac, z0, max_iter=60):
    """Backtracking Newton on a square system, row-equilibrated and solved by
    least squares: KKT systems on large spheres are too ill-conditioned for
    normal equations."""
    z = np.asarray(z0, dtype=float).copy()
    res, J = res_jac(z)
    phi = float(np.linalg.norm(res))
    for _ in range(max_iter):
        scale = np.maximum(1e-12, np.max(np.abs(J), axis=1))
        try:
            d = np.linalg.lstsq(J / scale[:, None], -res / scale, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(d)):
            break
        step = 1.0
        improved = False
        for _ in range(25):
            z_new = z + step * d
            res_new, J_new = res_jac(z_new)
            phi_new = float(np.linalg.norm(res_new))
            if phi_new < phi:
                z, res, J, phi = z_new, res_new, J_new, phi_new
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return z


def _chain_start(prob, r, prev, cfg, seed):
    """Seeded start on (or near) the slice; the flag says whether the
    projection actually succeeded."""
    if prev is not None and np.linalg.norm(prev) > 1e-12:
        return prev * (r / np.linalg.norm(prev)), False
    try:
        x = project_to_sphere_slice(
            prob, r,
            r * random_unit_vector(np.random.default_rng([cfg.seed, *seed]), prob.n),
            cfg, seed=seed)
        return x, True
    except Exception:
        rng = np.random.default_rng([cfg.seed, 0xFA11, *seed])
        return r * random_unit_vector(rng, prob.n), False


def flatten_records(traces: Iterable[TraceResult]) -> list[TraceRecord]:
    records = [rec for tr in traces for rec in tr.records]
    return sorted(records, key=lambda rec: (rec.radius, rec.point))


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class FailureWitness:
    limit: tuple[float, ...]
    records: tuple[TraceRecord, ...]
    source: str
    propagated_from: str | None = None


@dataclass(frozen=True)
class Verdict:
    condition: str
    status: str            # holds_evidence | fails_witness | inconclusive
    witness: FailureWitness | None = None
    note: str = ""


@dataclass(frozen=True)
class _Candidate:
    witness: FailureWitness
    rabier_trend: bool
    scaled_trend: bool
    all_in_tangency: bool


def _relative_spread(fs: np.ndarray) -> float:
    span = fs.max(axis=0) - fs.min(axis=0)
    scale = np.maximum(1.0, np.abs(fs).max(axis=0))
    return float((span / scale).max())


def _vanishing_trend(records: list[TraceRecord], key: str, cfg: RunConfig) -> bool:
    top = records[-1].radius
    window = [getattr(r, key) for r in records if r.radius >= top / 100.0]
    if len(window) < 2:
        return False
    last_ok = window[-1] <= cfg.tol_limit
    monotone = all(b <= a * _TREND_SLACK for a, b in zip(window, window[1:]))
    return last_ok and monotone


def _candidates(traces: list[TraceResult], top_radius: float,
                cfg: RunConfig) -> list[_Candidate]:
    out = []
    for tr in traces:
        recs = sorted((r for r in tr.records if r.below_ybar),
                      key=lambda r: r.radius)
        if len(recs) < 4:
            continue
        if recs[-1].radius < 0.99 * top_radius:
            continue
        if recs[-1].radius < recs[0].radius * 10 ** _MIN_SPAN_DECADES:
            continue
        tail = recs[-max(2, math.ceil(len(recs) / 4)):]
        fs = np.array([r.f_value for r in tail])
        if _relative_spread(fs) >= cfg.tol_cluster:
            continue
        limit = tuple(float(t) for t in fs.mean(axis=0))
        witness = FailureWitness(limit=limit, records=tuple(recs), source=tr.label)
        out.append(_Candidate(
            witness=witness,
            rabier_trend=_vanishing_trend(recs, "rabier", cfg),
            scaled_trend=_vanishing_trend(recs, "scaled_rabier", cfg),
            all_in_tangency=all(r.in_tangency for r in recs),
        ))
    # deterministic, order-independent preference among witnesses
    out.sort(key=lambda c: (tuple(round(v, 9) for v in c.witness.limit),
                            c.witness.source))
    return out


def classify(prob: Problem, ybar: Sequence[float],
             traces: Sequence[TraceResult | Sequence[TraceRecord]],
             cfg: RunConfig = DEFAULT_CONFIG,
             mfcq_holds: bool | None = None,
             schedule: Sequence[float] | None = None) -> dict[str, Verdict]:
    """Classify the four asymptotic conditions at ybar from gathered traces.

    Per condition, fails_witness needs a diverging, f-convergent, below-ybar
    subsequence whose defining quantity matches the set definition (bounded
    f for properness, vanishing Rabier values for Palais-Smale, vanishing
    scaled values for Cerami, tangency membership throughout for M-tameness).
    Logical closure: a Cerami failure always implies a Palais-Smale failure,
    and under sampled MFCQ-at-infinity evidence an M-tameness failure implies
    a Cerami failure; any failure implies a properness failure since the
    witness has convergent f.
    """
    if len(ybar) != prob.p:
        raise ClassifyError(f"ybar has {len(ybar)} entries, problem has p={prob.p}")
    normalized = [tr if isinstance(tr, TraceResult) else TraceResult.from_records(tr)
                  for tr in traces]
    if not normalized or not any(tr.coverage_radii for tr in normalized):
        raise ClassifyError("empty traces: nothing to classify")

    schedule = list(schedule) if schedule is not None else cfg.radii()
    top_attained = max(max(tr.coverage_radii, default=0.0) for tr in normalized)
    covered = _coverage(normalized, schedule)
    cands = _candidates(normalized, top_attained, cfg)

    def first(pred):
        for cand in cands:
            if pred(cand):
                return cand
        return None

    failing: dict[str, FailureWitness] = {}
    any_cand = first(lambda c: True)
    if any_cand is not None:
        failing["proper"] = any_cand.witness
    ps = first(lambda c: c.rabier_trend)
    if ps is not None:
        failing["palais_smale"] = ps.witness
    cer = first(lambda c: c.scaled_trend)
    if cer is not None:
        failing["cerami"] = cer.witness
    mt = first(lambda c: c.all_in_tangency)
    if mt is not None:
        failing["m_tame"] = mt.witness

    # inclusion closure (the scaled quantity dominates the plain one for
    # radius >= 1, and the tangency set sits inside the Cerami set under
    # the constraint qualification)
    if mfcq_holds and "m_tame" in failing and "cerami" not in failing:
        failing["cerami"] = replace(failing["m_tame"], propagated_from="m_tame")
    if "cerami" in failing and "palais_smale" not in failing:
        failing["palais_smale"] = replace(failing["cerami"],
                                          propagated_from="cerami")

    verdicts = {}
    note = "" if covered else "radius schedule not fully covered by evidence"
    for cond in CONDITIONS:
        if cond in failing:
            verdicts[cond] = Verdict(cond, "fails_witness", failing[cond])
        elif covered:
            verdicts[cond] = Verdict(
                cond, "holds_evidence",
                note="sampled evidence only; emptiness is not decidable by sampling")
        else:
            verdicts[cond] = Verdict(cond, "inconclusive", note=note)
    return verdicts


def _coverage(traces: list[TraceResult], schedule: list[float]) -> bool:
    radii = sorted({r for tr in traces if tr.counts_for_coverage
                    for r in tr.coverage_radii})
    if not radii:
        return False
    top = max(schedule)
    if radii[-1] < 0.99 * top:
        return False
    if len(radii) < min(4, len(schedule)):
        return False
    return radii[-1] >= radii[0] * 10 ** _COVERAGE_DECADES


# -- export --------------------------------------------------------------------

def write_trace_csv(path, records: Iterable[TraceRecord], n: int, p: int):
    """Columns: radius, x_1..x_n, f_1..f_p, rabier, scaled_rabier,
    in_tangency, below_ybar (booleans as 0/1)."""
    header = (["radius"] + [f"x_{i+1}" for i in range(n)]
              + [f"f_{k+1}" for k in range(p)]
              + ["rabier", "scaled_rabier", "in_tangency", "below_ybar"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in records:
            writer.writerow([repr(rec.radius)]
                            + [repr(v) for v in rec.point]
                            + [repr(v) for v in rec.f_value]
                            + [repr(rec.rabier), repr(rec.scaled_rabier),
                               int(rec.in_tangency), int(rec.below_ybar)])
