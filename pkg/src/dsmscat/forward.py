"""Forward scattering models.

Media are described by shapes carrying a contrast eta (or refractive
index n^2 with eta = (n^2 - 1) k^2).  Sound-hard/soft obstacles are not
solved with boundary integral equations; they are emulated by a highly
absorbing medium (large Im n^2), which converges to the obstacle answer
as the absorption grows.

The scattered field solves u = u_inc + integral G eta u over the
scatterer support; we collocate on a uniform cell lattice and solve the
dense system directly, which is comfortably fast at the benchmark cell
counts (a few hundred to a few thousand cells).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DiscretizationError, EvaluationPointError, SolverError
from .kernels import WaveContext, green, green_farfield, _check_direction
from .special import bessel_j, bessel_y, hankel1

MAX_CELLS = 5000


@dataclass(frozen=True)
class ShapeSpec:
    """One shape of the scatterer, with its material coefficient.

    kind and geometry parameters (all lengths in wavelength units):

    * "square": axis-aligned, ``side`` wide, centered at ``center``
    * "ring": square annulus between ``inner_side`` and ``outer_side``
    * "bar": rectangle of ``length`` x ``thickness`` rotated by ``angle``
      radians about its center (used for cracks)
    * "disk": circle of ``radius``

    Exactly one of ``eta`` / ``nsq`` must be given.
    """

    kind: str
    center: tuple
    side: float | None = None
    outer_side: float | None = None
    inner_side: float | None = None
    length: float | None = None
    thickness: float | None = None
    angle: float = 0.0
    radius: float | None = None
    eta: complex | None = None
    nsq: complex | None = None

    def __post_init__(self):
        if (self.eta is None) == (self.nsq is None):
            raise ValueError("exactly one of eta / nsq must be set")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        needed = {
            "square": ("side",),
            "ring": ("outer_side", "inner_side"),
            "bar": ("length", "thickness"),
            "disk": ("radius",),
        }
        if self.kind not in needed:
            raise ValueError(f"unknown shape kind {self.kind!r}")
        for name in needed[self.kind]:
            v = getattr(self, name)
            if v is None or not v > 0:
                raise ValueError(f"{self.kind} needs positive {name}")
        if self.kind == "ring" and not self.inner_side < self.outer_side:
            raise ValueError("ring needs inner_side < outer_side")
        if self.kind == "bar" and not self.thickness < self.length:
            raise ValueError("bar needs thickness < length")

    def eta_value(self, ctx: WaveContext) -> complex:
        if self.eta is not None:
            return complex(self.eta)
        return (complex(self.nsq) - 1.0) * ctx.k**2

    def area(self) -> float:
        if self.kind == "square":
            return self.side**2
        if self.kind == "ring":
            return self.outer_side**2 - self.inner_side**2
        if self.kind == "bar":
            return self.length * self.thickness
        return np.pi * self.radius**2

    def bounding_box(self):
        c = np.asarray(self.center)
        if self.kind == "square":
            r = np.array([self.side, self.side]) / 2.0
        elif self.kind == "ring":
            r = np.array([self.outer_side, self.outer_side]) / 2.0
        elif self.kind == "disk":
            r = np.array([self.radius, self.radius])
        else:
            ca, sa = abs(np.cos(self.angle)), abs(np.sin(self.angle))
            r = 0.5 * np.array(
                [self.length * ca + self.thickness * sa, self.length * sa + self.thickness * ca]
            )
        return c - r, c + r


def contains(shape: ShapeSpec, x) -> bool | np.ndarray:
    """Point-in-shape test; half-open on the max edges so lattice points
    land in exactly one cell across shared boundaries."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts) - np.asarray(shape.center)
    if shape.kind == "square":
        s = shape.side / 2.0
        ok = (pts[:, 0] >= -s) & (pts[:, 0] < s) & (pts[:, 1] >= -s) & (pts[:, 1] < s)
    elif shape.kind == "ring":
        so, si = shape.outer_side / 2.0, shape.inner_side / 2.0
        outer = (pts[:, 0] >= -so) & (pts[:, 0] < so) & (pts[:, 1] >= -so) & (pts[:, 1] < so)
        inner = (pts[:, 0] >= -si) & (pts[:, 0] < si) & (pts[:, 1] >= -si) & (pts[:, 1] < si)
        ok = outer & ~inner
    elif shape.kind == "bar":
        ca, sa = np.cos(shape.angle), np.sin(shape.angle)
        u = pts[:, 0] * ca + pts[:, 1] * sa
        v = -pts[:, 0] * sa + pts[:, 1] * ca
        hl, ht = shape.length / 2.0, shape.thickness / 2.0
        ok = (u >= -hl) & (u < hl) & (v >= -ht) & (v < ht)
    else:
        ok = np.sum(pts**2, axis=1) < shape.radius**2
    return bool(ok[0]) if single else ok


@dataclass(frozen=True)
class CellGrid:
    """Uniform square cells covering the scatterer support."""

    centers: np.ndarray  # (n, 2)
    areas: np.ndarray  # (n,)
    eta: np.ndarray  # (n,) complex
    h_fwd: float

    def __len__(self):
        return len(self.centers)


def discretize(ctx: WaveContext, shapes, h_fwd: float) -> CellGrid:
    """Lay a pixel lattice of pitch h_fwd over the union bounding box and
    keep the cells whose centers fall inside some shape.

    The lattice is anchored at the bounding-box corner with cell centers
    at corner + (j + 1/2) h_fwd, so a shape centered on the lattice gets
    a cell exactly at its center.  When several shapes contain a center,
    the smallest-area (innermost) shape supplies the coefficient.
    """
    if not shapes:
        raise DiscretizationError("no shapes given")
    if not (0 < h_fwd <= ctx.wavelength / 10.0):
        raise ValueError("h_fwd must satisfy 0 < h_fwd <= lambda/10")
    los, his = zip(*(s.bounding_box() for s in shapes))
    lo = np.min(los, axis=0)
    hi = np.max(his, axis=0)
    counts = np.maximum(np.ceil((hi - lo) / h_fwd - 1e-12).astype(int), 1)
    xs = lo[0] + (np.arange(counts[0]) + 0.5) * h_fwd
    ys = lo[1] + (np.arange(counts[1]) + 0.5) * h_fwd
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])

    order = sorted(range(len(shapes)), key=lambda i: shapes[i].area(), reverse=True)
    eta = np.zeros(len(pts), dtype=complex)
    hit = np.zeros(len(pts), dtype=bool)
    for i in order:  # smaller shapes assign last, so innermost wins
        m = contains(shapes[i], pts)
        eta[m] = shapes[i].eta_value(ctx)
        hit |= m
    if not np.any(hit):
        raise DiscretizationError("no cell center falls inside any shape")
    if np.all(eta[hit] == 0):
        raise DiscretizationError("all shapes have zero contrast (no scatterer)")
    centers = pts[hit]
    return CellGrid(
        centers=centers,
        areas=np.full(len(centers), h_fwd * h_fwd),
        eta=eta[hit],
        h_fwd=h_fwd,
    )


@dataclass(frozen=True)
class InducedCurrent:
    """Solution of the collocation system: I = eta * u on the cells."""

    values: np.ndarray  # (n,) complex, eta_j u(x_j)
    total_field: np.ndarray  # (n,) complex, u(x_j)
    incident: np.ndarray  # (2,)
    grid: CellGrid


def _self_term(ctx: WaveContext, h_fwd: float) -> complex:
    # analytic integral of G over the disk of equal area, radius R = h/sqrt(pi):
    # (i/4) [ (2 pi R / k) H1(kR) + 4i/k^2 ]
    big_r = h_fwd / np.sqrt(np.pi)
    k = ctx.k
    return 0.25j * ((2.0 * np.pi * big_r / k) * hankel1(1, k * big_r) + 4.0j / k**2)


def solve_lippmann_schwinger(ctx: WaveContext, grid: CellGrid, d) -> InducedCurrent:
    """Solve the scattering collocation system for incident direction d."""
    if ctx.dim != 2:
        raise ValueError("the forward solver is two-dimensional")
    n = len(grid)
    if n == 0:
        raise DiscretizationError("empty cell grid")
    if n > MAX_CELLS:
        raise ValueError(f"cell count {n} exceeds the supported {MAX_CELLS}")
    d = _check_direction(np.asarray(d, dtype=float), 2)

    diff = grid.centers[:, None, :] - grid.centers[None, :, :]
    r = np.sqrt(np.sum(diff**2, axis=-1))
    np.fill_diagonal(r, 1.0)  # placeholder, overwritten below
    a = 0.25j * hankel1(0, ctx.k * r) * grid.areas[None, :]
    np.fill_diagonal(a, _self_term(ctx, grid.h_fwd))

    u_inc = np.exp(1j * ctx.k * grid.centers @ d)
    system = np.eye(n, dtype=complex) - a * grid.eta[None, :]
    try:
        u = np.linalg.solve(system, u_inc)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(system)
        raise SolverError(f"collocation system is singular (cond ~ {cond:.3e})") from exc
    residual = np.linalg.norm(system @ u - u_inc) / np.linalg.norm(u_inc)
    if not np.isfinite(residual) or residual > 1e-6:
        cond = np.linalg.cond(system)
        raise SolverError(
            f"collocation solve unreliable: residual {residual:.3e}, cond ~ {cond:.3e}"
        )
    return InducedCurrent(values=grid.eta * u, total_field=u, incident=d, grid=grid)


def scattered_near(ctx: WaveContext, grid: CellGrid, current: InducedCurrent, x):
    """Scattered field at point(s) x outside the scatterer support."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    dists = np.sqrt(np.sum((pts[:, None, :] - grid.centers[None, :, :]) ** 2, axis=-1))
    if np.any(dists <= grid.h_fwd / 2.0):
        raise EvaluationPointError("evaluation point inside the scatterer support")
    weights = current.values * grid.areas
    vals = green(ctx, pts[:, None, :], grid.centers[None, :, :]) @ weights
    return complex(vals[0]) if single else vals


def scattered_far(ctx: WaveContext, grid: CellGrid, current: InducedCurrent, xhat):
    """Far-field pattern at observation direction(s) xhat."""
    dirs = np.asarray(xhat, dtype=float)
    single = dirs.ndim == 1
    dirs = np.atleast_2d(dirs)
    weights = current.values * grid.areas
    vals = green_farfield(ctx, dirs[:, None, :], grid.centers[None, :, :]) @ weights
    return complex(vals[0]) if single else vals


def _jn_derivative(order: int, x, jn, jn_minus1):
    return jn_minus1 - (order / x) * jn


def disk_series_farfield(ctx: WaveContext, radius: float, nsq, d, angles):
    """Partial-wave far field of a penetrable disk (analytic oracle).

    The disk is centered at the origin with constant index n^2 inside.
    Only real n^2 > 0 is supported (complex indices would need
    complex-argument Bessel functions, which this package does not
    provide).  Output follows u^s ~ e^{ik r}/sqrt(r) u_inf.
    """
    if ctx.dim != 2:
        raise ValueError("disk series is two-dimensional")
    if not radius > 0:
        raise ValueError("radius must be positive")
    nsq = complex(nsq)
    if nsq.imag != 0 or nsq.real <= 0:
        raise ValueError("disk series needs real n^2 > 0 (series would not converge)")
    nsq = nsq.real
    d = _check_direction(np.asarray(d, dtype=float), 2)
    single = np.asarray(angles).ndim == 1
    dirs = np.atleast_2d(np.asarray(angles, dtype=float))
    dirs = _check_direction(dirs, 2)

    k = ctx.k
    k1 = k * np.sqrt(nsq)
    m_max = int(np.ceil(k * radius)) + 20
    ka, k1a = k * radius, k1 * radius

    # J and H at the two interface arguments for orders 0..m_max
    coeffs = np.empty(m_max + 1, dtype=complex)
    j_ka = np.array([bessel_j(m, ka) for m in range(m_max + 1)])
    y_ka = np.array([bessel_y(m, ka) for m in range(m_max + 1)])
    j_k1a = np.array([bessel_j(m, k1a) for m in range(m_max + 1)])
    h_ka = j_ka + 1j * y_ka
    for m in range(m_max + 1):
        if m == 0:
            jp_ka = -j_ka[1]
            jp_k1a = -j_k1a[1]
            hp_ka = -h_ka[1]
        else:
            jp_ka = _jn_derivative(m, ka, j_ka[m], j_ka[m - 1])
            jp_k1a = _jn_derivative(m, k1a, j_k1a[m], j_k1a[m - 1])
            hp_ka = _jn_derivative(m, ka, h_ka[m], h_ka[m - 1])
        num = k1 * jp_k1a * j_ka[m] - k * jp_ka * j_k1a[m]
        den = k * hp_ka * j_k1a[m] - k1 * jp_k1a * h_ka[m]
        coeffs[m] = num / den
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("partial-wave series did not converge")

    cos_phi = np.clip(dirs @ d, -1.0, 1.0)
    phi = np.arccos(cos_phi)
    orders = np.arange(1, m_max + 1)
    series = coeffs[0] + 2.0 * np.cos(np.outer(phi, orders)) @ coeffs[1:]
    out = np.sqrt(2.0 / (np.pi * k)) * np.exp(-1j * np.pi / 4.0) * series
    return complex(out[0]) if single else out


@dataclass(frozen=True)
class RingCauchyData:
    """u^s and its radial derivative sampled on a measurement circle.

    The node layout is theta_j = 2 pi j / (count-1), j = 0..count-1, so the
    last node repeats the first; the ring quadrature expects exactly that.
    """

    points: np.ndarray  # (count, 2)
    values: np.ndarray  # (count,) complex
    normal_derivs: np.ndarray  # (count,) complex
    radius: float


def ring_cauchy(ctx: WaveContext, grid: CellGrid, current: InducedCurrent,
                radius: float = 5.0, count: int = 51) -> RingCauchyData:
    """Evaluate scattered Cauchy data (value and radial derivative) on a circle."""
    theta = 2.0 * np.pi * np.arange(count) / (count - 1)
    nu = np.column_stack([np.cos(theta), np.sin(theta)])
    pts = radius * nu
    values = scattered_near(ctx, grid, current, pts)
    diff = pts[:, None, :] - grid.centers[None, :, :]
    dist = np.sqrt(np.sum(diff**2, axis=-1))
    # d/dnu (i/4) H0(k r) = -(ik/4) H1(k r) * ((x - y) . nu)/r
    proj = np.sum(diff * nu[:, None, :], axis=-1) / dist
    weights = current.values * grid.areas
    derivs = (-0.25j * ctx.k * hankel1(1, ctx.k * dist) * proj) @ weights
    return RingCauchyData(points=pts, values=values, normal_derivs=derivs, radius=radius)


def ring_quadrature_weights() -> np.ndarray:
    """The 51-node composite Simpson weights (pi/15) (1,4,2,...,2,4,1).

    They integrate a constant exactly: sum of weights = 10 pi, the arc
    length of the radius-5 circle.
    """
    w = np.zeros(51)
    w[0:-1:2] += 1.0
    w[1::2] += 4.0
    w[2::2] += 1.0
    return w * (np.pi / 15.0)


def near_to_far_simpson(ctx: WaveContext, ring: RingCauchyData, directions):
    """Transform ring Cauchy data to far-field values by the fixed
    51-node composite Simpson rule.

    The integrand is the Kirchhoff-Helmholtz representation of the far
    field: gamma_2 e^{-ik xhat.y} [(-ik xhat.nu) u^s - du^s/dnu] with
    gamma_2 = e^{i pi/4}/sqrt(8 k pi).
    """
    if len(ring.values) != 51 or len(ring.points) != 51:
        raise ValueError("the ring rule is defined for exactly 51 nodes")
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    dirs = _check_direction(dirs, 2)
    nu = ring.points / ring.radius
    gamma2 = np.exp(1j * np.pi / 4.0) / np.sqrt(8.0 * ctx.k * np.pi)
    phase = np.exp(-1j * ctx.k * dirs @ ring.points.T)  # (ndir, 51)
    angular = (-1j * ctx.k) * (dirs @ nu.T)
    integrand = gamma2 * phase * (angular * ring.values[None, :] - ring.normal_derivs[None, :])
    vals = integrand @ ring_quadrature_weights()
    return vals if np.ndim(directions) > 1 else complex(vals[0])
