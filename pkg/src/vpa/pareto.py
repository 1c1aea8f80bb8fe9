"""Pareto machinery: nondominated filtering, section-boundedness probing,
weighted-sum scalarization, front sweeps, and the existence verdict that
composes constraint-qualification evidence, section evidence, and the
asymptotic classification.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .asymptotics import (TraceResult, below_ybar, classify, ray_to_trace,
                          trace_tangency)
from .certificates import mfcq_probe, rabier_value
from .config import DEFAULT_CONFIG, RunConfig
from .errors import (DivergenceError, RayError, SectionError, SolveError,
                     TraceError, VpaError)
from .problem import Problem, check_feasible, sample_feasible_ray
from .solvers import minimize_auglag, simplex_lattice

STATUS_GUARANTEED = "existence guaranteed (evidence)"
STATUS_INAPPLICABLE = "theorem inapplicable"
STATUS_UNVERIFIED = "hypothesis unverified"


# -- nondominated filtering ----------------------------------------------------

def nondominated_filter(values: Sequence[Sequence[float]],
                        mode: str = "pareto") -> list[int]:
    """Indices of entries not dominated in the componentwise order.

    pareto mode removes y when some y' <= y with y' != y; weak mode removes
    y only when some y' < y strictly in every component. Exact duplicates
    collapse to the first occurrence in both modes, which makes the filter
    idempotent and stable.
    """
    if mode not in ("pareto", "weak"):
        raise ValueError(f"unknown mode {mode!r}")
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        return []
    if vals.ndim != 2:
        raise ValueError("values must be a list of equal-length vectors")
    N = vals.shape[0]
    le = np.all(vals[:, None, :] <= vals[None, :, :], axis=2)
    eq = np.all(vals[:, None, :] == vals[None, :, :], axis=2)
    if mode == "pareto":
        dominated = np.any(le & ~eq, axis=0)
    else:
        lt = np.all(vals[:, None, :] < vals[None, :, :], axis=2)
        dominated = np.any(lt, axis=0)
    earlier_dup = np.any(eq & np.tri(N, N, -1, dtype=bool).T, axis=0)
    keep = ~(dominated | earlier_dup)
    return [int(i) for i in np.nonzero(keep)[0]]


@dataclass(frozen=True)
class ArchiveEntry:
    x: tuple[float, ...]
    f: tuple[float, ...]
    weights: tuple[float, ...]
    rabier_residual: float


@dataclass
class ParetoArchive:
    """Mutually nondominated (point, value) pairs; re-filtered on insertion."""
    mode: str = "pareto"
    entries: list[ArchiveEntry] = field(default_factory=list)

    def add(self, entry: ArchiveEntry):
        self.entries.append(entry)
        self.refilter()

    def refilter(self):
        keep = nondominated_filter([e.f for e in self.entries], self.mode)
        self.entries = [self.entries[i] for i in keep]

    def values(self) -> list[tuple[float, ...]]:
        return [e.f for e in self.entries]

    def __len__(self):
        return len(self.entries)


# -- scalarized solving ----------------------------------------------------------

def solve_scalarized(prob: Problem, weights, start,
                     cfg: RunConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, float]:
    """Minimize the weighted objective sum over S from a local start.

    Returns (x, rabier residual). Raises DivergenceError when iterates hit
    the norm cap (likely unbounded scalarization) and SolveError when the
    local solver stalls or the result is not stationary at tol_stationary.
    """
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (prob.p,) or abs(float(weights.sum()) - 1.0) > 1e-9 \
            or np.any(weights < -1e-12):
        raise ValueError("weights must lie on the unit simplex")

    def objective(x):
        return float(weights @ prob.f(x)), weights @ prob.jac_f(x)

    def equalities(x):
        return prob.g(x), prob.jac_g(x)

    def inequalities(x):
        return prob.h(x), prob.jac_h(x)

    res = minimize_auglag(
        objective, np.asarray(start, dtype=float),
        equalities=equalities if prob.l else None,
        inequalities=inequalities if prob.m else None,
        tol_feas=cfg.tol_feas, gtol=1e-9,
        divergence_cap=cfg.divergence_cap,
    )
    if not res.converged:
        raise SolveError(f"scalarized solve did not converge (outcome {res.outcome}, "
                         f"violation {res.violation:.3e})")
    report = check_feasible(prob, res.x, cfg.tol_feas, cfg.tol_active)
    if not report.feasible:
        raise SolveError("scalarized solve returned an infeasible point")
    residual = rabier_value(prob, res.x, cfg).value
    if residual > cfg.tol_stationary:
        raise SolveError(f"scalarized solve is not stationary "
                         f"(rabier residual {residual:.3e})")
    return res.x, residual


def _weight_draws(p: int, cfg: RunConfig) -> list[np.ndarray]:
    lattice = simplex_lattice(p, cfg.weight_grid)
    rng = np.random.default_rng([cfg.seed, 0xF07])
    randoms = [rng.dirichlet(np.ones(p)) for _ in range(cfg.weight_grid)] \
        if p > 1 else []
    return lattice + randoms


def _starts(prob: Problem, cfg: RunConfig, widx: int) -> list[np.ndarray]:
    rng = np.random.default_rng([cfg.seed, 0x57A7, widx])
    starts = [np.ones(prob.n)]
    for _ in range(cfg.starts_per_weight - 1):
        starts.append(3.0 * rng.standard_normal(prob.n))
    return starts


def solve_front(prob: Problem, ybar: Sequence[float],
                cfg: RunConfig = DEFAULT_CONFIG) -> ParetoArchive:
    """Weighted-sum sweep over a deterministic simplex lattice plus seeded
    draws, multi-started; keeps feasible stationary points below ybar and
    filters them to a mutually nondominated archive.

    Weighted sums only reach supported points, so nonconvex fronts may be
    undersampled; the archive is evidence, not an enumeration.
    """
    archive = ParetoArchive(mode="pareto")
    attempts = failures = 0
    for widx, weights in enumerate(_weight_draws(prob.p, cfg)):
        for start in _starts(prob, cfg, widx):
            attempts += 1
            try:
                x, residual = solve_scalarized(prob, weights, start, cfg)
            except (SolveError, DivergenceError):
                failures += 1
                continue
            fval = prob.f(x)
            if not below_ybar(fval, ybar, cfg.tol_active):
                continue
            archive.add(ArchiveEntry(
                x=tuple(float(t) for t in x),
                f=tuple(float(t) for t in fval),
                weights=tuple(float(t) for t in weights),
                rabier_residual=residual,
            ))
    if failures == attempts:
        raise SolveError(f"all {attempts} scalarized runs failed")
    return archive


# -- section probing --------------------------------------------------------------

@dataclass(frozen=True)
class EscapePoint:
    radius: float
    x: tuple[float, ...]
    f: tuple[float, ...]


@dataclass
class SectionReport:
    bounded_evidence: bool
    lower_witness: tuple[float, ...] | None
    samples_checked: int
    escape_trace: list[EscapePoint] = field(default_factory=list)
    section_values: list[tuple[float, ...]] = field(default_factory=list)


def _section_descent(prob: Problem, ybar, start, cfg: RunConfig):
    """Push max_k(f_k - ybar_k) down over S via the epigraph formulation:
    minimize t subject to x in S and f_k - ybar_k <= t for finite k."""
    finite = [(k, y) for k, y in enumerate(ybar) if math.isfinite(y)]
    n = prob.n

    def objective(z):
        grad = np.zeros(n + 1)
        grad[-1] = 1.0
        return float(z[-1]), grad

    def equalities(z):
        vals = prob.g(z[:n])
        jac = np.hstack([prob.jac_g(z[:n]), np.zeros((prob.l, 1))])
        return vals, jac

    def inequalities(z):
        x, t = z[:n], z[-1]
        hv = prob.h(x)
        Jh = np.hstack([prob.jac_h(x), np.zeros((prob.m, 1))])
        fv = prob.f(x)
        Jf = prob.jac_f(x)
        rows = [hv] + [[t + y - fv[k]] for k, y in finite]
        jacs = [Jh] + [np.append(-Jf[k], 1.0)[None, :] for k, _ in finite]
        return np.concatenate(rows), np.vstack(jacs)

    z0 = np.append(np.asarray(start, dtype=float), 1.0)
    return minimize_auglag(
        objective, z0,
        equalities=equalities if prob.l else None,
        inequalities=inequalities,
        tol_feas=cfg.tol_feas, gtol=1e-9,
        divergence_cap=cfg.divergence_cap,
    )


def section_probe(prob: Problem, ybar: Sequence[float], budget: int, seed: int,
                  cfg: RunConfig = DEFAULT_CONFIG) -> SectionReport:
    """Gather feasible points with f <= ybar and test for a common lower bound.

    Boundedness here is about section values: the report flags an escape
    only when section values keep drifting downward as the sample norms
    grow, i.e. the values themselves escape every candidate bound along a
    diverging trace. Raises SectionError when no section point is found.
    """
    if not any(math.isfinite(y) for y in ybar):
        raise ValueError("section_probe needs at least one finite ybar component")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    radii = cfg.radii()
    samples: list[tuple[float, np.ndarray, np.ndarray]] = []
    checked = 0

    n_rays = max(1, budget // 8)
    for ray_idx in range(n_rays):
        try:
            ray = sample_feasible_ray(prob, radii, seed=seed * 31 + ray_idx, cfg=cfg)
        except RayError:
            continue
        for r, x in ray.points:
            checked += 1
            fv = prob.f(x)
            if below_ybar(fv, ybar, cfg.tol_active):
                samples.append((float(np.linalg.norm(x)), x, fv))

    rng = np.random.default_rng([cfg.seed, 0x5EC, seed])
    n_descents = max(1, budget // 8)
    for _ in range(n_descents):
        start = 2.0 * rng.standard_normal(prob.n)
        try:
            res = _section_descent(prob, ybar, start, cfg)
        except DivergenceError as exc:
            x = exc.point[:prob.n] if exc.point is not None else None
            if x is not None:
                fv = prob.f(x)
                checked += 1
                if below_ybar(fv, ybar, cfg.tol_active):
                    samples.append((float(np.linalg.norm(x)), x, fv))
            continue
        checked += 1
        if not res.converged:
            continue
        x = res.x[:prob.n]
        if not check_feasible(prob, x, cfg.tol_feas, cfg.tol_active).feasible:
            continue
        fv = prob.f(x)
        if below_ybar(fv, ybar, cfg.tol_active):
            samples.append((float(np.linalg.norm(x)), x, fv))

    if not samples:
        raise SectionError(
            "no section point found; ybar may be outside the reachable image")

    samples.sort(key=lambda s: s[0])
    escape = _detect_value_escape(samples, radii)
    fvals = np.array([fv for _, _, fv in samples])
    floor = fvals.min(axis=0)
    margin = 1e-6 * np.maximum(1.0, np.abs(floor))
    omega = tuple(float(t) for t in (floor - margin))
    return SectionReport(
        bounded_evidence=not escape,
        lower_witness=None if escape else omega,
        samples_checked=checked,
        escape_trace=[EscapePoint(radius=r, x=tuple(map(float, x)),
                                  f=tuple(map(float, fv)))
                      for r, x, fv in escape] if escape else [],
        section_values=[tuple(float(t) for t in fv) for _, _, fv in samples],
    )


def _detect_value_escape(samples, radii):
    """Section values escaping downward along diverging sample norms:
    per-decade componentwise minima that keep decreasing through the top of
    the radius schedule."""
    top = max(radii)
    tiers: dict[int, list[np.ndarray]] = {}
    for r, _, fv in samples:
        tiers.setdefault(int(math.floor(math.log10(max(r, 1e-12)))), []).append(fv)
    if len(tiers) < 3:
        return None
    keys = sorted(tiers)
    mins = [np.array(tiers[k]).min(axis=0) for k in keys]
    drops = 0
    for a, b in zip(mins, mins[1:]):
        if np.any(b < a - 0.5 * np.maximum(1.0, np.abs(a))):
            drops += 1
    last_reaches_top = any(r >= 0.099 * top for r, _, _ in samples)
    if drops >= len(mins) - 1 and last_reaches_top:
        out = []
        for k in keys:
            fvs = tiers[k]
            idx = int(np.argmin([fv.min() for fv in fvs]))
            for r, x, fv in samples:
                if fv is fvs[idx]:
                    out.append((r, x, fv))
                    break
        return out
    return None


# -- existence verdict --------------------------------------------------------------

@dataclass
class MfcqEvidence:
    holds: bool
    points_checked: int
    failures: list[dict] = field(default_factory=list)


def sample_mfcq_evidence(prob: Problem, cfg: RunConfig = DEFAULT_CONFIG,
                         rays: int = 2) -> MfcqEvidence:
    """Probe the constraint qualification along sampled feasible rays.

    Sampled evidence only: a verdict of True means every probed large-norm
    point passed, not that the qualification is proven.
    """
    radii = cfg.radii()
    checked = 0
    failures = []
    for ray_idx in range(rays):
        try:
            ray = sample_feasible_ray(prob, radii, seed=1000 + ray_idx, cfg=cfg)
        except RayError:
            continue
        for r, x in ray.points:
            report = mfcq_probe(prob, x, cfg)
            checked += 1
            if not report.holds:
                failures.append({"radius": r, "x": [float(t) for t in x],
                                 "gradient_rank": report.gradient_rank,
                                 "margin": report.margin})
    if checked == 0:
        return MfcqEvidence(holds=False, points_checked=0,
                            failures=[{"error": "no feasible points sampled"}])
    return MfcqEvidence(holds=not failures, points_checked=checked,
                        failures=failures)


@dataclass
class ExistenceReport:
    status: str
    failing_hypotheses: list[str]
    ybar_membership: str          # verified | unverified | skipped
    mfcq: MfcqEvidence
    section: SectionReport | None
    verdicts: dict
    archive: ParetoArchive
    traces: list[TraceResult]
    notes: list[str] = field(default_factory=list)


def _verify_ybar_membership(prob: Problem, ybar, cfg: RunConfig) -> str:
    """Look for a feasible x with f(x) ~ ybar in the finite components."""
    finite = [(k, y) for k, y in enumerate(ybar) if math.isfinite(y)]
    if not finite:
        return "skipped"

    def objective(x):
        fv = prob.f(x)
        Jf = prob.jac_f(x)
        val = sum((fv[k] - y) ** 2 for k, y in finite)
        grad = np.zeros(prob.n)
        for k, y in finite:
            grad += 2.0 * (fv[k] - y) * Jf[k]
        return float(val), grad

    rng = np.random.default_rng([cfg.seed, 0xB42])
    for attempt in range(4):
        start = np.ones(prob.n) if attempt == 0 else 2.0 * rng.standard_normal(prob.n)
        try:
            res = minimize_auglag(
                objective, start,
                equalities=(lambda x: (prob.g(x), prob.jac_g(x))) if prob.l else None,
                inequalities=(lambda x: (prob.h(x), prob.jac_h(x))) if prob.m else None,
                tol_feas=cfg.tol_feas, gtol=1e-10,
                divergence_cap=cfg.divergence_cap)
        except DivergenceError:
            continue
        if not res.converged:
            continue
        fv = prob.f(res.x)
        if all(abs(fv[k] - y) <= 1e-4 for k, y in finite):
            return "verified"
    return "unverified"


def existence_verdict(prob: Problem, ybar: Sequence[float],
                      cfg: RunConfig = DEFAULT_CONFIG) -> ExistenceReport:
    """Compose the existence evidence: sampled constraint qualification,
    section boundedness, and the four asymptotic conditions; a front sweep
    is attached as constructive confirmation either way.
    """
    notes = []
    radii = cfg.radii()

    mfcq = sample_mfcq_evidence(prob, cfg)
    membership = _verify_ybar_membership(prob, ybar, cfg)

    section = None
    section_bounded = None
    if any(math.isfinite(y) for y in ybar):
        try:
            section = section_probe(prob, ybar, cfg.section_budget,
                                    seed=1, cfg=cfg)
            section_bounded = section.bounded_evidence
        except (SectionError, VpaError) as exc:
            notes.append(f"section probe failed: {exc}")
            section_bounded = False
    else:
        notes.append("ybar is +inf in every component; section evidence "
                     "reduces to classification coverage")
        section_bounded = True

    traces: list[TraceResult] = []
    try:
        traces.extend(trace_tangency(prob, ybar, radii, weights_seed=1, cfg=cfg))
    except TraceError as exc:
        notes.append(f"sphere tracking failed: {exc}")
    for ray_idx in range(2):
        try:
            ray = sample_feasible_ray(prob, radii, seed=2000 + ray_idx, cfg=cfg)
        except RayError:
            continue
        traces.append(ray_to_trace(prob, ybar, ray, cfg,
                                   label=f"ray-{ray_idx:02d}"))

    try:
        verdicts = classify(prob, ybar, traces, cfg,
                            mfcq_holds=mfcq.holds, schedule=radii)
    except Exception as exc:
        verdicts = {}
        notes.append(f"classification failed: {exc}")

    try:
        archive = solve_front(prob, ybar, cfg)
    except SolveError as exc:
        archive = ParetoArchive()
        notes.append(f"front sweep failed: {exc}")

    failing = []
    if not mfcq.holds:
        failing.append("mfcq_at_infinity_evidence")
    if not section_bounded:
        failing.append("bounded_section_evidence")
    condition_ok = any(v.status == "holds_evidence" for v in verdicts.values())
    if not condition_ok:
        failing.append("asymptotic_conditions")

    if failing:
        status = STATUS_INAPPLICABLE
    elif membership == "unverified":
        status = STATUS_UNVERIFIED
        notes.append("could not locate a feasible point with f(x) ~ ybar; "
                     "the membership hypothesis is unverified")
    else:
        status = STATUS_GUARANTEED
    return ExistenceReport(
        status=status,
        failing_hypotheses=failing,
        ybar_membership=membership,
        mfcq=mfcq,
        section=section,
        verdicts=verdicts,
        archive=archive,
        traces=traces,
        notes=notes,
    )


# -- exports ---------------------------------------------------------------------

def write_front_csv(path, archive: ParetoArchive, p: int):
    header = [f"f_{k+1}" for k in range(p)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for entry in archive.entries:
            writer.writerow([repr(v) for v in entry.f])


def archive_to_jsonable(archive: ParetoArchive) -> list[dict]:
    return [{"x": list(e.x), "f": list(e.f), "weights": list(e.weights),
             "rabier_residual": e.rabier_residual} for e in archive.entries]
