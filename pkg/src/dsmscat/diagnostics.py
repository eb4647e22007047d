"""Verification sweeps and interpretation diagnostics.

lemma_sweep checks the correlation identity (unit-sphere integral of
G_inf pairs against C Im G) on random point pairs; decay_curve tabulates
the scaled kernel decay that explains why the indicator localizes; and
ratio_diagnostics produces the pointwise data/kernel quotients whose
near-constancy underpins the physical reading of the method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forward import discretize, scattered_far, scattered_near, solve_lippmann_schwinger
from .kernels import (
    WaveContext,
    farfield_correlation,
    green,
    green_farfield,
    lemma_constant,
    scaled_im_green,
)
from .measurement import far_angles, near_circle_geometry

_FLAG_FLOOR = 1e-14


@dataclass(frozen=True)
class LemmaSweepReport:
    """Per-pair identity errors for one quadrature resolution."""

    separations: np.ndarray
    errors: np.ndarray
    nquad: int

    @property
    def max_error(self) -> float:
        return float(np.max(self.errors))


def lemma_sweep(ctx: WaveContext, rmax: float, npairs: int, nquad: int,
                seed: int = 0) -> LemmaSweepReport:
    """Check correlation = C Im G on seeded random pairs with |xj-xp| <= rmax.

    Under-resolved quadrature is reported, not raised: the caller reads
    max_error and judges it against their tolerance.
    """
    if npairs < 1:
        raise ValueError("npairs must be at least 1")
    rng = np.random.default_rng(seed)
    const = lemma_constant(ctx)
    anchors = rng.uniform(-1.0, 1.0, size=(npairs, ctx.dim))
    dirs = rng.normal(size=(npairs, ctx.dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    seps = rng.uniform(1e-3 * rmax, rmax, size=npairs)
    errors = np.empty(npairs)
    for i in range(npairs):
        xj = anchors[i]
        xp = anchors[i] + seps[i] * dirs[i]
        corr = farfield_correlation(ctx, xj, xp, nquad=nquad)
        errors[i] = abs(corr - const * np.imag(green(ctx, xj, xp)))
    return LemmaSweepReport(separations=seps, errors=errors, nquad=nquad)


def decay_curve(ctx: WaveContext, rmax: float, nr: int) -> np.ndarray:
    """Table of (r, C Im G scaled to 1 at r=0) on a uniform r-grid.

    Column 2 is J0(kr) in 2D and sin(kr)/(kr) in 3D.
    """
    if nr < 2:
        raise ValueError("nr must be at least 2")
    if not rmax > 0:
        raise ValueError("rmax must be positive")
    r = np.linspace(0.0, rmax, nr)
    origin = np.zeros((nr, ctx.dim))
    pts = np.zeros((nr, ctx.dim))
    pts[:, 0] = r
    return np.column_stack([r, scaled_im_green(ctx, origin, pts)])


def pointwise_ratio(numerator, denominator):
    """Complex quotients with per-entry flags where |denominator| < 1e-14.

    Flagged entries are returned as NaN rather than inf so downstream
    tables stay well defined.
    """
    num = np.asarray(numerator, dtype=complex)
    den = np.asarray(denominator, dtype=complex)
    flagged = np.abs(den) < _FLAG_FLOOR
    out = num / np.where(flagged, 1.0, den)
    out[flagged] = complex(np.nan, np.nan)
    return out, flagged


@dataclass(frozen=True)
class RatioDiagnostics:
    """Pointwise quotients of measured data against the sampling kernels.

    All arrays share the angle axis: near points and far directions are
    sampled at the same 50 protocol angles.
    """

    angles: np.ndarray  # radians
    far_over_kernel: np.ndarray  # u_inf / G_inf(., xp)
    near_over_far: np.ndarray  # u^s / u_inf
    kernel_near_over_far: np.ndarray  # G(., xp) / G_inf(., xp)
    flags_far_over_kernel: np.ndarray
    flags_near_over_far: np.ndarray
    flags_kernel_near_over_far: np.ndarray

    def polar_table(self, name: str) -> np.ndarray:
        """(angle, |ratio|, arg ratio) rows for one of the three ratios."""
        ratio = getattr(self, name)
        return np.column_stack([self.angles, np.abs(ratio), np.angle(ratio)])


def ratio_diagnostics(ctx: WaveContext, scenario, xp, h_fwd: float = 0.02,
                      radius: float = 4.0, count: int = 50) -> RatioDiagnostics:
    """Run the forward pipeline for the scenario's first incident wave and
    form the three interpretation ratios at matched angles."""
    xp = np.asarray(xp, dtype=float)
    grid = discretize(ctx, scenario.shapes, h_fwd)
    current = solve_lippmann_schwinger(ctx, grid, scenario.incidents[0])
    angles = 2.0 * np.pi * np.arange(count) / count
    obs_dirs = far_angles(count)
    near_pts = near_circle_geometry(ctx, radius, count)
    u_far = scattered_far(ctx, grid, current, obs_dirs)
    u_near = scattered_near(ctx, grid, current, near_pts)
    g_far = green_farfield(ctx, obs_dirs, xp)
    g_near = green(ctx, near_pts, xp)
    r1, f1 = pointwise_ratio(u_far, g_far)
    r2, f2 = pointwise_ratio(u_near, u_far)
    r3, f3 = pointwise_ratio(g_near, g_far)
    return RatioDiagnostics(
        angles=angles,
        far_over_kernel=r1,
        near_over_far=r2,
        kernel_near_over_far=r3,
        flags_far_over_kernel=f1,
        flags_near_over_far=f2,
        flags_kernel_near_over_far=f3,
    )
