"""Source terms ``q`` for both problem classes.

Variants
--------
``zero``        q = 0
``smooth``      q(x, t), sampled at cell centers
``point``       a(t) * delta(x - x0), discretized as ``a(t) / cell_volume`` in
                the cell containing ``x0`` (cells are closed on the left)
``derivative``  q = dQ/dx(x) for a given derivative function, sampled at centers
``nonlinear``   q(x, t, u), coupled into the implicit solve
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .errors import ConfigError, ModelError
from .grid import GridSpec

Variant = Literal["zero", "smooth", "point", "derivative", "nonlinear"]


@dataclass(frozen=True)
class SourceModel:
    variant: Variant = "zero"
    func: Optional[Callable] = None
    dfunc_du: Optional[Callable] = None
    x0: Optional[tuple[float, ...]] = None
    name: str = ""

    def __post_init__(self):
        if self.variant not in ("zero", "smooth", "point", "derivative", "nonlinear"):
            raise ConfigError(f"unknown source variant {self.variant!r}")
        if self.variant != "zero" and self.func is None:
            raise ConfigError(f"{self.variant} source needs a function")
        if self.variant == "point" and self.x0 is None:
            raise ConfigError("point source needs a position")

    @property
    def scenario(self) -> int:
        """1 for sources independent of ``u``, 2 for ``q(x, t, u)``."""
        return 2 if self.variant == "nonlinear" else 1

    @property
    def depends_on_u(self) -> bool:
        return self.variant == "nonlinear"

    @classmethod
    def zero(cls) -> "SourceModel":
        return cls("zero")

    @classmethod
    def smooth(cls, q: Callable, name="") -> "SourceModel":
        """``q(*x, t)`` with one coordinate array per axis."""
        return cls("smooth", q, name=name)

    @classmethod
    def point(cls, x0, amplitude: Callable[[float], float], name="") -> "SourceModel":
        return cls("point", amplitude, x0=tuple(float(c) for c in np.atleast_1d(x0)), name=name)

    @classmethod
    def derivative(cls, qx: Callable, name="") -> "SourceModel":
        """Source given as the derivative ``qx(*x)`` of a spatial profile."""
        return cls("derivative", qx, name=name)

    @classmethod
    def nonlinear(cls, q: Callable, dq_du: Optional[Callable] = None, name="") -> "SourceModel":
        """``q(u, x, t)``; ``dq_du`` with the same signature speeds up Newton."""
        return cls("nonlinear", q, dfunc_du=dq_du, name=name)

    def point_cell(self, grid: GridSpec) -> int:
        multi = []
        for a in range(grid.d):
            i = int(np.floor((self.x0[a] - grid.origin[a]) / grid.dx[a] + 1e-9))
            if not 0 <= i < grid.n_cells[a]:
                raise ConfigError(f"point source at {self.x0} lies outside the grid")
            multi.append(i)
        return int(np.ravel_multi_index(tuple(multi), grid.n_cells, order="F"))

    def evaluate(self, grid: GridSpec, t: float, u=None) -> np.ndarray:
        """``q_j`` for every cell at time ``t`` and state ``u``."""
        n = grid.size
        if self.variant == "zero":
            return np.zeros(n)
        if self.variant == "point":
            out = np.zeros(n)
            out[self.point_cell(grid)] = float(self.func(t)) / grid.cell_volume
            vals = out
        elif self.variant == "smooth":
            vals = self.func(*grid.centers(), t)
        elif self.variant == "derivative":
            vals = self.func(*grid.centers())
        else:
            if u is None:
                raise ConfigError("nonlinear source needs the state u")
            vals = self.func(np.asarray(u, dtype=float), grid.centers(), t)
        vals = np.broadcast_to(np.asarray(vals, dtype=float), (n,)).copy()
        if not np.all(np.isfinite(vals)):
            raise ModelError(f"source {self.name or self.variant} returned non-finite values")
        return vals

    def derivative_u(self, grid: GridSpec, t: float, u, eps: float = 1e-7) -> np.ndarray:
        """``dq_j/du_j``; zero unless the source is nonlinear."""
        if not self.depends_on_u:
            return np.zeros(grid.size)
        u = np.asarray(u, dtype=float)
        if self.dfunc_du is not None:
            vals = np.broadcast_to(np.asarray(self.dfunc_du(u, grid.centers(), t), float), u.shape)
            return vals.copy()
        h = eps * (1.0 + np.abs(u))
        return (self.evaluate(grid, t, u + h) - self.evaluate(grid, t, u)) / h


def eval_source(model: SourceModel, j: int, grid: GridSpec, t: float, u: float = 0.0) -> float:
    """Source value in the single cell ``j`` at time ``t`` and cell state ``u``."""
    if t < 0:
        raise ConfigError("source evaluated at negative time")
    if model.variant == "point":
        return float(model.func(t)) / grid.cell_volume if j == model.point_cell(grid) else 0.0
    state = np.full(grid.size, float(u))
    return float(model.evaluate(grid, t, state)[j])


def stiff_bistable(mu: float) -> SourceModel:
    """``-mu u (u - 1) (u - 1/2)`` with equilibria at 0, 1/2 and 1."""
    mu = float(mu)
    return SourceModel.nonlinear(
        lambda u, x, t: -mu * u * (u - 1.0) * (u - 0.5),
        dq_du=lambda u, x, t: -mu * (3.0 * u * u - 3.0 * u + 0.5),
        name=f"bistable(mu={mu:g})",
    )
