"""Direct sampling indicator functions on a rectangular sampling grid.

The indicator at a sampling point x_p correlates the measured data with
the (far-field) fundamental solution anchored at x_p and normalizes by
both norms, so every value lies in [0, 1] by the Cauchy-Schwarz
inequality.  A grid evaluation additionally divides by the grid maximum
so the peak is pinned at 1; that is a display convention for contour
comparability, not a change to the indicator.

Discrete L2 inner products use uniform quadrature weights on the
uniform circular measurement layouts (2 pi / count for directions,
arc length 2 pi R / count for near points).  The weights cancel in the
normalized quotient; they are applied uniformly anyway so the norms
reported by intermediate quantities stay meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, EvaluationPointError
from .kernels import WaveContext, green, green_farfield
from .measurement import FieldSamples


@dataclass(frozen=True)
class SamplingGrid:
    """Axis-aligned rectangle of sampling points with uniform pitch."""

    xmin: float = -2.0
    xmax: float = 2.0
    ymin: float = -2.0
    ymax: float = 2.0
    h: float = 0.01

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("grid bounds must satisfy min < max")
        if not self.h > 0:
            raise ValueError("grid pitch must be positive")

    @property
    def shape(self) -> tuple:
        nx = int(np.floor((self.xmax - self.xmin) / self.h + 1e-9)) + 1
        ny = int(np.floor((self.ymax - self.ymin) / self.h + 1e-9)) + 1
        return (ny, nx)

    @property
    def xs(self) -> np.ndarray:
        return self.xmin + self.h * np.arange(self.shape[1])

    @property
    def ys(self) -> np.ndarray:
        return self.ymin + self.h * np.arange(self.shape[0])

    def nodes(self) -> np.ndarray:
        """All grid nodes as an (n, 2) array, row-major (x varies fastest)."""
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class IndicatorGrid:
    """Indicator values over a SamplingGrid, stored as a (ny, nx) array."""

    grid: SamplingGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError("values shape must match the grid shape")
        if not np.all(np.isfinite(values)):
            raise ValueError("indicator values must be finite")
        if values.min() < -1e-12 or values.max() > 1.0 + 1e-12:
            raise ValueError("indicator values must lie in [0, 1]")
        object.__setattr__(self, "values", values)

    def argmax_point(self) -> np.ndarray:
        """Coordinates of the maximizing node (row-major first on ties)."""
        iy, ix = np.unravel_index(np.argmax(self.values), self.values.shape)
        return np.array([self.grid.xs[ix], self.grid.ys[iy]])


def _weighted_quotient(u, gram, weight, g_norms):
    """|<u, g_p>| / (||u|| ||g_p||) columnwise for the kernel matrix gram."""
    norm_u = np.sqrt(weight) * np.linalg.norm(u)
    if norm_u == 0.0:
        raise DegenerateDataError("measured data is identically zero")
    inner = weight * (np.conj(gram).T @ u)
    return np.abs(inner) / (norm_u * g_norms)


def _far_kernel(ctx, locations, points):
    gram = green_farfield(ctx, locations[:, None, :], points[None, :, :])
    return gram


def _near_kernel(ctx, locations, points, radius):
    r = np.sqrt(np.sum(points**2, axis=1))
    if np.any(r >= radius - 1e-12):
        raise EvaluationPointError("sampling point not strictly inside the measurement circle")
    return green(ctx, locations[:, None, :], points[None, :, :])


def _indicator_values(ctx: WaveContext, data: FieldSamples, points: np.ndarray,
                      gram: np.ndarray | None = None) -> np.ndarray:
    count = len(data.values)
    if data.kind == "far":
        weight = 2.0 * np.pi / count
        if gram is None:
            gram = _far_kernel(ctx, data.locations, points)
    else:
        weight = 2.0 * np.pi * data.radius / count
        if gram is None:
            gram = _near_kernel(ctx, data.locations, points, data.radius)
    g_norms = np.sqrt(weight) * np.linalg.norm(gram, axis=0)
    return _weighted_quotient(data.values, gram, weight, g_norms)


def indicator_far(ctx: WaveContext, data: FieldSamples, xp) -> float:
    """Far-field indicator at one sampling point."""
    if data.kind != "far":
        raise ValueError("indicator_far needs far-field samples")
    pt = np.atleast_2d(np.asarray(xp, dtype=float))
    return float(_indicator_values(ctx, data, pt)[0])


def indicator_near(ctx: WaveContext, data: FieldSamples, xp) -> float:
    """Near-field indicator at one sampling point strictly inside the circle."""
    if data.kind != "near":
        raise ValueError("indicator_near needs near-field samples")
    pt = np.atleast_2d(np.asarray(xp, dtype=float))
    return float(_indicator_values(ctx, data, pt)[0])


# kernel matrices keyed by measurement geometry and grid; the matrices
# dominate the runtime, and repeated noise realizations share them
_KERNEL_CACHE: dict = {}
_KERNEL_CACHE_SLOTS = 2


def _cached_kernel(ctx: WaveContext, data: FieldSamples, grid: SamplingGrid) -> np.ndarray:
    key = (data.kind, ctx.k, ctx.dim, data.locations.tobytes(),
           grid.xmin, grid.xmax, grid.ymin, grid.ymax, grid.h)
    if key not in _KERNEL_CACHE:
        points = grid.nodes()
        if data.kind == "far":
            gram = _far_kernel(ctx, data.locations, points)
        else:
            gram = _near_kernel(ctx, data.locations, points, data.radius)
        while len(_KERNEL_CACHE) >= _KERNEL_CACHE_SLOTS:
            _KERNEL_CACHE.pop(next(iter(_KERNEL_CACHE)))
        _KERNEL_CACHE[key] = gram
    return _KERNEL_CACHE[key]


def indicator_grid(ctx: WaveContext, data: FieldSamples, grid: SamplingGrid) -> IndicatorGrid:
    """Evaluate the indicator at every node and rescale so the max is 1."""
    raw = _indicator_values(ctx, data, grid.nodes(), gram=_cached_kernel(ctx, data, grid))
    top = raw.max()
    if top == 0.0:
        raise DegenerateDataError("indicator vanishes on the whole grid")
    return IndicatorGrid(grid=grid, values=(raw / top).reshape(grid.shape))


def combine_max(grids) -> IndicatorGrid:
    """Node-wise maximum over indicator grids from several incident waves."""
    grids = list(grids)
    if not grids:
        raise ValueError("need at least one indicator grid")
    base = grids[0].grid
    if any(g.grid != base for g in grids[1:]):
        raise ValueError("indicator grids must share one sampling grid")
    return IndicatorGrid(grid=base, values=np.maximum.reduce([g.values for g in grids]))


@dataclass(frozen=True)
class Component:
    """One 4-connected superlevel component."""

    indices: np.ndarray  # (m, 2) int rows of (iy, ix)
    points: np.ndarray  # (m, 2) node coordinates
    centroid: np.ndarray  # (2,)
    lo: np.ndarray  # bounding box min corner (x, y)
    hi: np.ndarray  # bounding box max corner (x, y)

    @property
    def size(self) -> int:
        return len(self.indices)


def superlevel_components(grid: IndicatorGrid, cutoff: float):
    """4-connected components of {value >= cutoff}, largest first."""
    if not 0.0 < cutoff < 1.0:
        raise ValueError("cutoff must lie strictly between 0 and 1")
    mask = grid.values >= cutoff
    ny, nx = mask.shape
    labels = np.zeros((ny, nx), dtype=np.int32)
    xs, ys = grid.grid.xs, grid.grid.ys
    components = []
    for iy in range(ny):
        row = mask[iy]
        if not row.any():
            continue
        for ix in np.flatnonzero(row & (labels[iy] == 0)):
            if labels[iy, ix]:  # labeled by an earlier seed in this row
                continue
            stack = [(iy, int(ix))]
            labels[iy, ix] = 1
            cells = []
            while stack:
                cy, cx = stack.pop()
                cells.append((cy, cx))
                if cy > 0 and mask[cy - 1, cx] and not labels[cy - 1, cx]:
                    labels[cy - 1, cx] = 1
                    stack.append((cy - 1, cx))
                if cy + 1 < ny and mask[cy + 1, cx] and not labels[cy + 1, cx]:
                    labels[cy + 1, cx] = 1
                    stack.append((cy + 1, cx))
                if cx > 0 and mask[cy, cx - 1] and not labels[cy, cx - 1]:
                    labels[cy, cx - 1] = 1
                    stack.append((cy, cx - 1))
                if cx + 1 < nx and mask[cy, cx + 1] and not labels[cy, cx + 1]:
                    labels[cy, cx + 1] = 1
                    stack.append((cy, cx + 1))
            idx = np.array(cells, dtype=np.int64)
            pts = np.column_stack([xs[idx[:, 1]], ys[idx[:, 0]]])
            components.append(
                Component(
                    indices=idx,
                    points=pts,
                    centroid=pts.mean(axis=0),
                    lo=pts.min(axis=0),
                    hi=pts.max(axis=0),
                )
            )
    components.sort(key=lambda c: c.size, reverse=True)
    return components
