"""Physical flux models and consistent two-point numerical fluxes.

Every evaluator is vectorized: ``v``, ``w`` and the coordinate arrays in
``x`` broadcast against each other.  Flux callables have the signature
``f(u, x, t)`` where ``x`` is a tuple of coordinate arrays (one per axis);
models built with :meth:`FluxModel.autonomous` simply ignore ``x`` and ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .errors import ConfigError, ModelError

FluxFn = Callable[[np.ndarray, tuple, float], np.ndarray]
CriticalFn = Callable[[float, float], Sequence[float]]

FluxKind = Literal["upwind", "lax_friedrichs", "godunov", "custom"]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FluxModel:
    """Per-axis physical fluxes ``f_l(x, t, u)`` with optional metadata.

    Attributes
    ----------
    flux : one callable ``f(u, x, t)`` per axis.
    dflux : optional ``df/du`` callables with the same signature.  When
        present, the upwind and Lax-Friedrichs Jacobians are analytic.
    lipschitz : optional per-axis Lipschitz bound in ``u``.
    critical_points : optional per-axis ``crit(lo, hi)`` returning the
        stationary points of ``u -> f(u)`` inside ``[lo, hi]``.  Enables exact
        candidate enumeration for the Godunov flux.
    space_dependent : True if some ``f_l`` depends on ``x`` (needed by the
        entropy check, which then accounts for ``df_l/dx_l``).
    """

    flux: tuple[FluxFn, ...]
    dflux: Optional[tuple[Optional[FluxFn], ...]] = None
    lipschitz: Optional[tuple[Optional[float], ...]] = None
    critical_points: Optional[tuple[Optional[CriticalFn], ...]] = None
    space_dependent: bool = False
    name: str = ""

    @classmethod
    def autonomous(cls, f, d=1, dflux=None, lipschitz=None, critical_points=None, name=""):
        """Same flux ``f(u)`` on every axis, no ``(x, t)`` dependence."""
        wrap = lambda g: (lambda u, x=None, t=0.0: g(u))  # noqa: E731
        return cls(
            flux=(wrap(f),) * d,
            dflux=None if dflux is None else (wrap(dflux),) * d,
            lipschitz=None if lipschitz is None else (float(lipschitz),) * d,
            critical_points=None if critical_points is None else (critical_points,) * d,
            name=name,
        )

    @property
    def d(self) -> int:
        return len(self.flux)

    def __call__(self, axis: int, u, x=None, t: float = 0.0) -> np.ndarray:
        with np.errstate(all="ignore"):
            val = np.asarray(self.flux[axis](np.asarray(u, dtype=float), x, t), dtype=float)
        if not np.all(np.isfinite(val)):
            raise ModelError(f"flux {self.name or axis!s} returned non-finite values")
        return val

    def derivative(self, axis: int, u, x=None, t: float = 0.0) -> Optional[np.ndarray]:
        if self.dflux is None or self.dflux[axis] is None:
            return None
        val = np.asarray(self.dflux[axis](np.asarray(u, dtype=float), x, t), dtype=float)
        if not np.all(np.isfinite(val)):
            raise ModelError("flux derivative returned non-finite values")
        return val

    def lipschitz_bound(self, axis: int) -> Optional[float]:
        if self.lipschitz is None:
            return None
        return self.lipschitz[axis]

    def critical(self, axis: int) -> Optional[CriticalFn]:
        if self.critical_points is None:
            return None
        return self.critical_points[axis]


# a few models used throughout the tests and experiments

def burgers(d: int = 1) -> FluxModel:
    return FluxModel.autonomous(
        lambda u: 0.5 * u * u,
        d=d,
        dflux=lambda u: u,
        critical_points=lambda lo, hi: [0.0] if lo <= 0.0 <= hi else [],
        name="burgers",
    )


def linear(velocity: float, d: int = 1) -> FluxModel:
    v = float(velocity)
    return FluxModel.autonomous(
        lambda u: v * u,
        d=d,
        dflux=lambda u: np.full_like(np.asarray(u, dtype=float), v),
        lipschitz=abs(v),
        critical_points=lambda lo, hi: [],
        name=f"linear({v:g})",
    )


def _sine_critical(lo, hi):
    k0 = math.ceil((lo - math.pi / 2) / math.pi)
    k1 = math.floor((hi - math.pi / 2) / math.pi)
    return [math.pi / 2 + k * math.pi for k in range(k0, k1 + 1)]


def sine(d: int = 1) -> FluxModel:
    return FluxModel.autonomous(
        np.sin, d=d, dflux=np.cos, lipschitz=1.0, critical_points=_sine_critical, name="sine"
    )


def cubic(d: int = 1) -> FluxModel:
    """``u**3 + u``: increasing but not globally Lipschitz."""
    return FluxModel.autonomous(
        lambda u: u**3 + u,
        d=d,
        dflux=lambda u: 3 * u**2 + 1,
        critical_points=lambda lo, hi: [],
        name="cubic",
    )


def eval_upwind(model: FluxModel, axis: int, v, w, x=None, t: float = 0.0):
    """``g(v, w) = f(v)``; ``w`` is ignored."""
    return model(axis, np.broadcast_arrays(v, w)[0], x, t)


def eval_lax_friedrichs(model: FluxModel, axis: int, v, w, lam: float, x=None, t: float = 0.0):
    """Conservative Lax-Friedrichs flux ``(f(v) + f(w)) / 2 - (w - v) / (2 lam)``."""
    if not lam > 0:
        raise ConfigError(f"Lax-Friedrichs needs a positive mesh ratio, got {lam}")
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return 0.5 * (model(axis, v, x, t) + model(axis, w, x, t)) - (w - v) / (2.0 * lam)


def _expand_x(x, ndim_extra):
    if x is None:
        return None
    return tuple(np.asarray(c)[(...,) + (None,) * ndim_extra] for c in x)


def _interval_extremum(model, axis, lo, hi, sign, x, t, tol, samples):
    """``sign * min(sign * f)`` over ``[lo, hi]`` by scan plus golden section."""
    lo = np.atleast_1d(lo)
    hi = np.atleast_1d(hi)
    sign = np.atleast_1d(sign)
    xs = None if x is None else tuple(np.broadcast_to(c, lo.shape) for c in x)
    s = np.linspace(0.0, 1.0, samples)
    pts = lo[:, None] + (hi - lo)[:, None] * s[None, :]
    vals = sign[:, None] * model(axis, pts, _expand_x(xs, 1), t)
    best = np.argmin(vals, axis=1)
    rows = np.arange(lo.size)
    best_val = vals[rows, best]

    a = pts[rows, np.maximum(best - 1, 0)]
    b = pts[rows, np.minimum(best + 1, samples - 1)]
    width = float(np.max(b - a)) if lo.size else 0.0
    if width > tol:
        n_iter = int(math.ceil(math.log(tol / width) / math.log(_GOLDEN)))
        c = b - _GOLDEN * (b - a)
        e = a + _GOLDEN * (b - a)
        fc = sign * model(axis, c, xs, t)
        fe = sign * model(axis, e, xs, t)
        for _ in range(n_iter):
            left = fc < fe
            b = np.where(left, e, b)
            a = np.where(left, a, c)
            new_c = b - _GOLDEN * (b - a)
            new_e = a + _GOLDEN * (b - a)
            # reuse the surviving interior point
            c_old, e_old, fc_old, fe_old = c, e, fc, fe
            c = np.where(left, new_c, e_old)
            e = np.where(left, c_old, new_e)
            fc_probe = sign * model(axis, c, xs, t)
            fe_probe = sign * model(axis, e, xs, t)
            fc = np.where(left, fc_probe, fe_old)
            fe = np.where(left, fc_old, fe_probe)
        best_val = np.minimum(best_val, np.minimum(fc, fe))
    return sign * best_val


def eval_godunov(
    model: FluxModel,
    axis: int,
    v,
    w,
    x=None,
    t: float = 0.0,
    tol: float = 1e-10,
    samples: int = 256,
):
    """Godunov flux: ``min f`` on ``[v, w]`` if ``v <= w``, else ``max f`` on ``[w, v]``.

    Uses exact candidate enumeration (endpoints plus stationary points) when
    the model supplies critical points, otherwise a dense scan followed by a
    golden-section refinement to ``tol``.
    """
    if not tol > 0:
        raise ConfigError("godunov tolerance must be positive")
    v, w = np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(w, dtype=float))
    shape = v.shape
    if x is not None:
        x = tuple(np.broadcast_to(c, shape) for c in x)
    lo = np.minimum(v, w)
    hi = np.maximum(v, w)
    rising = v <= w
    crit = model.critical(axis)
    if crit is not None:
        points = list(crit(float(np.min(lo)), float(np.max(hi)))) if lo.size else []
        cands = [model(axis, lo, x, t), model(axis, hi, x, t)]
        cands += [model(axis, np.clip(c, lo, hi), x, t) for c in points]
        cands = np.stack(np.broadcast_arrays(*cands))
        return np.where(rising, cands.min(axis=0), cands.max(axis=0))

    sign = np.where(rising, 1.0, -1.0).ravel()
    flat_x = None if x is None else tuple(c.ravel() for c in x)
    out = _interval_extremum(model, axis, lo.ravel(), hi.ravel(), sign, flat_x, t, tol, samples)
    # degenerate intervals are exact
    out = np.where(lo.ravel() == hi.ravel(), model(axis, lo.ravel(), flat_x, t), out)
    return out.reshape(shape)


@dataclass(frozen=True)
class NumericalFlux:
    """A numerical flux ``g_l(v, w)`` bound to a model and mesh ratios.

    ``kind="custom"`` wraps a user callable ``custom(axis, v, w, x, t)``;
    such fluxes carry no theory, so ``claimed_monotone`` states what the
    user expects of them.
    """

    kind: FluxKind
    model: FluxModel
    lam: tuple[float, ...] = ()
    tol: float = 1e-10
    samples: int = 256
    custom: Optional[Callable] = field(default=None, compare=False)
    claimed_monotone: Optional[bool] = None

    def __post_init__(self):
        if self.kind not in ("upwind", "lax_friedrichs", "godunov", "custom"):
            raise ConfigError(f"unknown flux kind {self.kind!r}")
        if self.kind == "lax_friedrichs":
            if len(self.lam) != self.model.d or any(not lam > 0 for lam in self.lam):
                raise ConfigError("Lax-Friedrichs needs one positive mesh ratio per axis")
        if self.kind == "custom" and self.custom is None:
            raise ConfigError("custom flux needs a callable")

    def __call__(self, axis: int, v, w, x=None, t: float = 0.0):
        if self.kind == "upwind":
            return eval_upwind(self.model, axis, v, w, x, t)
        if self.kind == "lax_friedrichs":
            return eval_lax_friedrichs(self.model, axis, v, w, self.lam[axis], x, t)
        if self.kind == "godunov":
            return eval_godunov(self.model, axis, v, w, x, t, self.tol, self.samples)
        return np.asarray(self.custom(axis, np.asarray(v, float), np.asarray(w, float), x, t), float)

    def split_partials(self, axis: int, v, w, x=None, t: float = 0.0, eps: float = 1e-7, scale: float = 1.0):
        """``scale * dg/dv = a_v + c`` and ``scale * dg/dw = a_w - c`` as ``(a_v, a_w, c)``.

        ``c`` is the Lax-Friedrichs diffusion coefficient ``scale / (2 lam)``
        (zero for the other kinds).  Keeping it separate lets the Jacobian
        diagonal add ``c + c`` instead of subtracting rounded sums, so the
        linear Lax-Friedrichs matrix comes out exact.
        """
        v, w = np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(w, dtype=float))
        if self.kind in ("upwind", "lax_friedrichs"):
            dv = self.model.derivative(axis, v, x, t)
            if dv is not None:
                if self.kind == "upwind":
                    return scale * dv, np.zeros_like(v), 0.0
                dw = self.model.derivative(axis, w, x, t)
                return 0.5 * scale * dv, 0.5 * scale * dw, scale / (2.0 * self.lam[axis])
        g0 = self(axis, v, w, x, t)
        hv = eps * (1.0 + np.abs(v))
        hw = eps * (1.0 + np.abs(w))
        dv = (self(axis, v + hv, w, x, t) - g0) / hv
        dw = (self(axis, v, w + hw, x, t) - g0) / hw
        return scale * dv, scale * dw, 0.0

    def partials(self, axis: int, v, w, x=None, t: float = 0.0, eps: float = 1e-7, scale: float = 1.0):
        """``scale * (dg/dv, dg/dw)``, analytic where the model allows, else forward differences."""
        av, aw, c = self.split_partials(axis, v, w, x, t, eps, scale)
        return av + c, aw - c


def make_numerical_flux(kind: FluxKind, model: FluxModel, lam=None, **kwargs) -> NumericalFlux:
    if lam is None:
        lam = ()
    lam = tuple(float(v) for v in np.atleast_1d(lam))
    if len(lam) == 1 and model.d > 1:
        lam = lam * model.d
    return NumericalFlux(kind, model, lam, **kwargs)


def entropy_flux(g: NumericalFlux, axis: int, v, w, k, x=None, t: float = 0.0):
    """Numerical entropy flux ``g(v|k, w|k) - g(v&k, w&k)`` (max/min with ``k``)."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    k = np.asarray(k, dtype=float)
    return g(axis, np.maximum(v, k), np.maximum(w, k), x, t) - g(
        axis, np.minimum(v, k), np.minimum(w, k), x, t
    )


def kruzhkov_flux(model: FluxModel, axis: int, v, k, x=None, t: float = 0.0):
    """Continuous entropy flux ``sgn(v - k) (f(v) - f(k))``."""
    v = np.asarray(v, dtype=float)
    k = np.asarray(k, dtype=float)
    return np.sign(v - k) * (model(axis, v, x, t) - model(axis, k, x, t))
