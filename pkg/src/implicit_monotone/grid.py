"""Equidistant Cartesian grids with a linear cell numbering.

Cells are numbered row-major with axis 0 varying fastest, so a field stored
as a flat vector ``u`` reshapes to an ``n_cells``-shaped array with
``u.reshape(n_cells, order="F")``.  Axes are 0-based throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Sequence, Union

import numpy as np

from .errors import ConfigError, DataError

BoundaryKind = Literal["dirichlet", "outflow", "periodic"]


@dataclass(frozen=True)
class BoundaryPolicy:
    """Closure of one side of a truncated axis.

    ``dirichlet`` fills the ghost cell with ``value(t)``; ``outflow`` copies
    the nearest interior cell; ``periodic`` wraps around.
    """

    kind: BoundaryKind
    value: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.kind not in ("dirichlet", "outflow", "periodic"):
            raise ConfigError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "dirichlet" and self.value is None:
            raise ConfigError("dirichlet boundary needs a value function")

    @classmethod
    def dirichlet(cls, value: float | Callable[[float], float]) -> "BoundaryPolicy":
        if callable(value):
            return cls("dirichlet", value)
        const = float(value)
        return cls("dirichlet", lambda t: const)

    @classmethod
    def outflow(cls) -> "BoundaryPolicy":
        return cls("outflow")

    @classmethod
    def periodic(cls) -> "BoundaryPolicy":
        return cls("periodic")


@dataclass(frozen=True)
class Ghost:
    """Marker returned by :func:`neighbor` for a non-periodic domain edge."""

    side: Literal["left", "right"]
    axis: int


BoundarySpec = Union[BoundaryPolicy, tuple[BoundaryPolicy, BoundaryPolicy]]


def _as_pair(b: BoundarySpec) -> tuple[BoundaryPolicy, BoundaryPolicy]:
    if isinstance(b, BoundaryPolicy):
        return (b, b)
    left, right = b
    return (left, right)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid in ``d`` space dimensions plus a time step.

    Parameters
    ----------
    dx : per-axis spacing.
    dt : time step.
    n_cells : per-axis number of cells (at least 3).
    origin : coordinate of the left edge of cell 0 along each axis.
    boundary : a single policy for every side, or one entry per axis where
        each entry is a policy or a ``(left, right)`` pair.  On a 1D grid a
        bare ``(left, right)`` pair is accepted as well.
    """

    dx: tuple[float, ...]
    dt: float
    n_cells: tuple[int, ...]
    origin: tuple[float, ...]
    boundary: tuple[tuple[BoundaryPolicy, BoundaryPolicy], ...]

    def __init__(self, dx, dt, n_cells, origin=None, boundary=None):
        dx = tuple(float(v) for v in np.atleast_1d(dx))
        n_cells = tuple(int(v) for v in np.atleast_1d(n_cells))
        d = len(n_cells)
        if len(dx) == 1 and d > 1:
            dx = dx * d
        if origin is None:
            origin = (0.0,) * d
        origin = tuple(float(v) for v in np.atleast_1d(origin))
        if boundary is None:
            boundary = BoundaryPolicy.outflow()
        if isinstance(boundary, BoundaryPolicy):
            boundary = (boundary,) * d
        elif d == 1 and len(boundary) == 2 and isinstance(boundary[0], BoundaryPolicy):
            # a bare (left, right) pair on a 1D grid
            boundary = (tuple(boundary),)
        boundary = tuple(_as_pair(b) for b in boundary)

        if d not in (1, 2):
            raise ConfigError(f"only 1 or 2 space dimensions are supported, got {d}")
        if len(dx) != d or len(origin) != d or len(boundary) != d:
            raise ConfigError("dx, origin and boundary must have one entry per axis")
        if any(not np.isfinite(h) or h <= 0 for h in dx):
            raise ConfigError(f"grid spacings must be positive, got {dx}")
        if not np.isfinite(dt) or dt <= 0:
            raise ConfigError(f"time step must be positive, got {dt}")
        if any(n < 3 for n in n_cells):
            raise ConfigError(f"need at least 3 cells per axis, got {n_cells}")
        for left, right in boundary:
            if (left.kind == "periodic") != (right.kind == "periodic"):
                raise ConfigError("periodic boundaries must be set on both sides of an axis")

        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dt", float(dt))
        object.__setattr__(self, "n_cells", n_cells)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "boundary", boundary)

    @classmethod
    def uniform(cls, lower, upper, n_cells, dt, boundary=None) -> "GridSpec":
        """Grid covering ``[lower, upper]`` per axis with ``n_cells`` cells."""
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        n = np.atleast_1d(n_cells)
        if lower.size == 1 and n.size > 1:
            lower = np.repeat(lower, n.size)
            upper = np.repeat(upper, n.size)
        return cls(dx=(upper - lower) / n, dt=dt, n_cells=n, origin=lower, boundary=boundary)

    @property
    def d(self) -> int:
        return len(self.n_cells)

    @property
    def size(self) -> int:
        return int(np.prod(self.n_cells))

    @property
    def lam(self) -> tuple[float, ...]:
        """Mesh ratios ``dt / dx_l``."""
        return tuple(self.dt / h for h in self.dx)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.dx))

    def with_dt(self, dt: float) -> "GridSpec":
        return GridSpec(self.dx, dt, self.n_cells, self.origin, self.boundary)

    def axis_centers(self, axis: int) -> np.ndarray:
        return self.origin[axis] + (np.arange(self.n_cells[axis]) + 0.5) * self.dx[axis]

    def centers(self) -> tuple[np.ndarray, ...]:
        """Cell-center coordinates as flat arrays in linear order."""
        mesh = np.meshgrid(*(self.axis_centers(a) for a in range(self.d)), indexing="ij")
        return tuple(m.ravel(order="F") for m in mesh)

    def interface_coords(self, axis: int, side: int) -> tuple[np.ndarray, ...]:
        """Coordinates of the interface at ``side`` (-1 or +1) of every cell along ``axis``."""
        xs = list(self.centers())
        xs[axis] = xs[axis] + 0.5 * side * self.dx[axis]
        return tuple(xs)

    def to_array(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values).reshape(self.n_cells, order="F")

    def from_array(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr).ravel(order="F")

    def neighbor_table(self, axis: int, offset: int) -> np.ndarray:
        """Vectorized :func:`neighbor` for every cell.

        Periodic edges wrap, outflow edges point back at the cell itself
        (the ghost copies it), dirichlet edges are marked with ``-1``.
        """
        idx = np.arange(self.size)
        multi = np.array(np.unravel_index(idx, self.n_cells, order="F"))
        k = multi[axis] + offset
        n = self.n_cells[axis]
        left, right = self.boundary[axis]
        out = np.empty(self.size, dtype=np.intp)
        inside = (k >= 0) & (k < n)
        shifted = multi.copy()
        shifted[axis] = np.mod(k, n)
        wrapped = np.ravel_multi_index(tuple(shifted), self.n_cells, order="F")
        out[inside] = wrapped[inside]
        edge = ~inside
        policy = left if offset < 0 else right
        if policy.kind == "periodic":
            out[edge] = wrapped[edge]
        elif policy.kind == "outflow":
            out[edge] = idx[edge]
        else:
            out[edge] = -1
        return out

    def interior_mask(self) -> np.ndarray:
        """Cells whose full stencil lies inside the grid (all cells if periodic)."""
        mask = np.ones(self.size, dtype=bool)
        multi = np.unravel_index(np.arange(self.size), self.n_cells, order="F")
        for axis in range(self.d):
            if self.boundary[axis][0].kind != "periodic":
                mask &= (multi[axis] > 0) & (multi[axis] < self.n_cells[axis] - 1)
        return mask


@dataclass
class StateField:
    """Discrete solution on one time level, in linear cell order."""

    values: np.ndarray
    level: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise DataError("state values must be a flat vector")
        if not np.all(np.isfinite(self.values)):
            raise DataError("state contains non-finite values")


def linear_index(multi: Sequence[int], spec: GridSpec) -> int:
    if len(multi) != spec.d:
        raise IndexError(f"expected {spec.d} indices, got {len(multi)}")
    for i, n in zip(multi, spec.n_cells):
        if not 0 <= i < n:
            raise IndexError(f"index {tuple(multi)} out of range for grid {spec.n_cells}")
    return int(np.ravel_multi_index(tuple(multi), spec.n_cells, order="F"))


def multi_index(j: int, spec: GridSpec) -> tuple[int, ...]:
    if not 0 <= j < spec.size:
        raise IndexError(f"linear index {j} out of range [0, {spec.size})")
    return tuple(int(i) for i in np.unravel_index(j, spec.n_cells, order="F"))


def neighbor(j: int, axis: int, offset: int, spec: GridSpec) -> int | Ghost:
    """Index of the cell ``j + offset`` along ``axis``, or a ghost marker at the edge."""
    if offset not in (-1, 1):
        raise ValueError("offset must be +1 or -1")
    multi = list(multi_index(j, spec))
    k = multi[axis] + offset
    n = spec.n_cells[axis]
    if 0 <= k < n:
        multi[axis] = k
        return linear_index(multi, spec)
    side = "left" if offset < 0 else "right"
    policy = spec.boundary[axis][0 if offset < 0 else 1]
    if policy.kind == "periodic":
        multi[axis] = k % n
        return linear_index(multi, spec)
    return Ghost(side, axis)


def discretize_initial(
    u0: Callable[..., np.ndarray],
    spec: GridSpec,
    mode: Literal["inf", "midpoint"] = "inf",
    samples: int = 8,
) -> StateField:
    """Project ``u0(x[, y])`` onto the grid.

    ``mode="inf"`` takes the minimum over ``samples`` equispaced points per
    axis per cell, edges included, as a stand-in for the cell infimum.
    ``mode="midpoint"`` samples the cell centers.
    """
    if mode == "midpoint":
        values = np.asarray(u0(*spec.centers()), dtype=float)
        values = np.broadcast_to(values, (spec.size,)).copy()
    elif mode == "inf":
        if samples < 2:
            raise ConfigError("inf-per-cell discretization needs at least 2 samples")
        s = np.linspace(0.0, 1.0, samples)
        axes = []
        for a in range(spec.d):
            left = spec.origin[a] + np.arange(spec.n_cells[a]) * spec.dx[a]
            axes.append((left[:, None] + s[None, :] * spec.dx[a]).ravel())
        mesh = np.meshgrid(*axes, indexing="ij")
        vals = np.broadcast_to(np.asarray(u0(*mesh), dtype=float), mesh[0].shape)
        shape = []
        for n in spec.n_cells:
            shape += [n, samples]
        vals = vals.reshape(shape).min(axis=tuple(range(1, 2 * spec.d, 2)))
        values = vals.ravel(order="F").copy()
    else:
        raise ConfigError(f"unknown discretization mode {mode!r}")
    if not np.all(np.isfinite(values)):
        raise DataError("initial data is not finite on the grid")
    return StateField(values, level=0)
