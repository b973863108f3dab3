"""Runtime checks of monotonicity, comparison, entropy and stability properties.

Violations are reported as data, never raised.  All sampling is seeded, so
repeated calls with the same arguments return identical reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .flux import NumericalFlux, entropy_flux
from .grid import StateField
from .stepper import SchemeConfig, StepReport, _Stencil, step

Trajectory = Sequence[tuple[float, StateField, StepReport]]

MONOTONE_TOL = 1e-12
CHECK_TOL = 1e-8


@dataclass
class MonotonicityReport:
    condition18_violations: list = field(default_factory=list)
    condition19_violations: list = field(default_factory=list)
    samples_tested: int = 0

    @property
    def pass_(self) -> bool:
        return not self.condition18_violations and not self.condition19_violations

    def worst(self) -> float:
        d = [v[-1] for v in self.condition18_violations + self.condition19_violations]
        return max(d, default=0.0)


def increment_map(g: NumericalFlux, axis: int, a, b, c, x=None, t=0.0):
    """``H_l(a, b, c) = -lam_l [g(b, c) - g(a, b)]``, the per-axis part of the update."""
    lam = g.lam[axis] if g.lam else 1.0
    return -lam * (g(axis, b, c, x, t) - g(axis, a, b, x, t))


def check_flux_monotonicity(
    g: NumericalFlux,
    axis: int = 0,
    sample_box: tuple[float, float] = (-1.0, 1.0),
    n_samples: int = 10_000,
    deltas: Sequence[float] = (1e-3, 1e-1, 1.0),
    seed: int = 0,
    x=None,
    t: float = 0.0,
    tol: float = MONOTONE_TOL,
) -> MonotonicityReport:
    """Sample ``H(a + da, b, c) >= H(a, b, c)`` and ``H(a, b, c + dc) >= H(a, b, c)``.

    Triples are drawn uniformly from ``sample_box`` and complemented by every
    combination of the box endpoints and midpoint.  A violation is recorded
    as ``(axis, a, b, c, delta, deficit)`` whenever the difference falls
    below ``-tol``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if any(not d > 0 for d in deltas):
        raise ValueError("deltas must be positive")
    lo, hi = sample_box
    rng = np.random.default_rng(seed)
    tri = rng.uniform(lo, hi, size=(n_samples, 3))
    corners = np.array(list(itertools.product([lo, 0.5 * (lo + hi), hi], repeat=3)))
    tri = np.vstack([tri, corners])
    a, b, c = tri.T
    base = increment_map(g, axis, a, b, c, x, t)
    report = MonotonicityReport()
    for delta in deltas:
        d18 = increment_map(g, axis, a + delta, b, c, x, t) - base
        d19 = increment_map(g, axis, a, b, c + delta, x, t) - base
        for diff, sink in ((d18, report.condition18_violations), (d19, report.condition19_violations)):
            bad = np.flatnonzero(diff < -tol)
            sink.extend(
                (axis, float(a[i]), float(b[i]), float(c[i]), float(delta), float(-diff[i]))
                for i in bad
            )
        report.samples_tested += 2 * a.size
    return report


@dataclass
class ComparisonReport:
    step_violations: list[float]
    trials: int
    tol: float = CHECK_TOL

    @property
    def max_violation(self) -> float:
        return max(self.step_violations, default=0.0)

    @property
    def pass_(self) -> bool:
        return self.max_violation <= self.tol


def check_comparison(
    cfg: SchemeConfig,
    trials: int = 100,
    steps: int = 3,
    seed: int = 0,
    box: tuple[float, float] = (-1.0, 1.0),
    pairs: Optional[Sequence[tuple[np.ndarray, np.ndarray]]] = None,
    tol: float = CHECK_TOL,
) -> ComparisonReport:
    """Advance ordered pairs ``v0 >= w0`` and record ``max(w - v, 0)`` per step.

    Random pairs are the pointwise max and min of two uniform draws from
    ``box``; explicit ``pairs`` replace them.
    """
    n = cfg.grid.size
    if pairs is None:
        rng = np.random.default_rng(seed)
        pairs = []
        for _ in range(trials):
            p, q = rng.uniform(*box, size=(2, n))
            pairs.append((np.maximum(p, q), np.minimum(p, q)))
    violations = [0.0] * steps
    for v0, w0 in pairs:
        v = StateField(np.asarray(v0, float))
        w = StateField(np.asarray(w0, float))
        if np.any(w.values > v.values):
            raise ValueError("comparison pairs must satisfy v0 >= w0")
        t = 0.0
        for k in range(steps):
            v, _ = step(v, t, cfg)
            w, _ = step(w, t, cfg)
            t += cfg.grid.dt
            violations[k] = max(violations[k], float(np.max(w.values - v.values, initial=0.0)))
    return ComparisonReport(violations, len(pairs), tol)


@dataclass
class EntropyReport:
    worst_violation: float
    witness: tuple[int, int, float]
    k_samples: np.ndarray
    boundary_worst: float = -np.inf
    tol: float = CHECK_TOL

    @property
    def pass_(self) -> bool:
        return self.worst_violation <= self.tol


def default_k_values(traj: Trajectory, n: int = 21) -> np.ndarray:
    lo = min(float(np.min(u.values)) for _, u, _ in traj)
    hi = max(float(np.max(u.values)) for _, u, _ in traj)
    ks = np.linspace(lo - 1.0, hi + 1.0, n)
    return np.unique(np.concatenate([ks, np.unique(traj[0][1].values)]))


def entropy_residuals(u0, u1, t1, dt, cfg: SchemeConfig, k_values) -> np.ndarray:
    """Left side minus right side of the cell entropy inequality, shape ``(K, N)``.

    Non-positive entries mean the inequality holds.  For ``x``-dependent
    fluxes the right side carries the discrete ``df_l(x, t, k)/dx_l`` across
    the cell, evaluated at the interfaces the scheme itself uses.
    """
    grid = cfg.grid
    g = cfg.numerical_flux(dt)
    st = _Stencil(cfg)
    k = np.asarray(k_values, dtype=float)[:, None]
    u0 = np.asarray(u0, float)[None, :]
    u1v = np.asarray(u1, float)
    u1 = u1v[None, :]
    lhs = (np.abs(u1 - k) - np.abs(u0 - k)) / dt
    source = np.broadcast_to(cfg.source.evaluate(grid, t1, u1v)[None, :], lhs.shape)
    for axis in range(grid.d):
        left = st.gather(u1v, axis, -1, t1)[None, :]
        right = st.gather(u1v, axis, +1, t1)[None, :]
        xm, xp = st.xfaces[axis]
        Gp = entropy_flux(g, axis, u1, right, k, xp, t1)
        Gm = entropy_flux(g, axis, left, u1, k, xm, t1)
        lhs = lhs + (Gp - Gm) / grid.dx[axis]
        if cfg.flux_model.space_dependent:
            kk = np.broadcast_to(k, lhs.shape)
            fx = (cfg.flux_model(axis, kk, xp, t1) - cfg.flux_model(axis, kk, xm, t1)) / grid.dx[axis]
            source = source - fx
    return lhs - np.sign(u1 - k) * source


def check_discrete_entropy(
    traj: Trajectory,
    cfg: SchemeConfig,
    k_values: Optional[Sequence[float]] = None,
    tol: float = CHECK_TOL,
) -> EntropyReport:
    """Evaluate the cell entropy inequality for every step, interior cell and ``k``."""
    ks = default_k_values(traj) if k_values is None else np.asarray(k_values, dtype=float)
    interior = cfg.grid.interior_mask()
    worst = -np.inf
    witness = (-1, -1, float("nan"))
    bworst = -np.inf
    for n in range(len(traj) - 1):
        t0, u0, _ = traj[n]
        t1, u1, _ = traj[n + 1]
        r = entropy_residuals(u0.values, u1.values, t1, t1 - t0, cfg, ks)
        inner = np.where(interior[None, :], r, -np.inf)
        i = np.unravel_index(np.argmax(inner), inner.shape)
        if inner[i] > worst:
            worst = float(inner[i])
            witness = (int(i[1]), n + 1, float(ks[i[0]]))
        if np.any(~interior):
            bworst = max(bworst, float(np.max(r[:, ~interior])))
    if worst == -np.inf:
        worst = 0.0
    return EntropyReport(worst, witness, ks, bworst, tol)


def linf_bounds(traj: Trajectory) -> tuple[float, float, np.ndarray]:
    """``(min u0, max u0, M_n)`` where ``M_n`` accumulates ``dt * max|q|`` up to level ``n``."""
    u0 = traj[0][1].values
    acc = np.cumsum([r.dt * r.source_max for _, _, r in traj])
    return float(np.min(u0)), float(np.max(u0)), acc


def check_linf_stability(traj: Trajectory, tol: float = CHECK_TOL) -> bool:
    """True iff ``min u0 - M_n <= u^n <= max u0 + M_n`` on every level."""
    if not traj:
        raise ValueError("empty trajectory")
    lo, hi, acc = linf_bounds(traj)
    for (_, u, _), m in zip(traj, acc):
        if np.min(u.values) < lo - m - tol or np.max(u.values) > hi + m + tol:
            return False
    return True


def predicted_monotone(cfg: SchemeConfig, box=(-1.0, 1.0), n: int = 2001) -> bool:
    """What the theory predicts for this configuration.

    Godunov: always monotone.  Upwind: iff every ``f_l`` is nondecreasing on
    the sampled box.  Lax-Friedrichs: iff the Lipschitz bound (or the sampled
    difference quotient when no bound is given) is at most ``dx_l / dt``.
    Custom fluxes fall back to their ``claimed_monotone`` flag.
    """
    kind = cfg.flux_kind
    if kind == "godunov":
        return True
    if kind == "custom":
        return bool(cfg.claimed_monotone)
    u = np.linspace(*box, n)
    x = None
    if cfg.flux_model.space_dependent:
        u = u[:, None]
        x = tuple(c[None, :] for c in cfg.grid.centers())
    for axis in range(cfg.grid.d):
        f = cfg.flux_model(axis, u, x, 0.0)
        df = np.diff(f, axis=0)
        if kind == "upwind":
            if np.any(df < -1e-14):
                return False
        else:
            L = cfg.flux_model.lipschitz_bound(axis)
            if L is None:
                L = float(np.max(np.abs(df) / np.diff(u, axis=0)))
            if L > cfg.grid.dx[axis] / cfg.grid.dt * (1 + 1e-12):
                return False
    return True
