"""Helmholtz fundamental solution, its far-field pattern, and the
correlation identity that underpins the sampling indicators.

Conventions (time-harmonic exp(-i omega t), wavenumber k):

* 2D: G(x,y) = (i/4) H0^(1)(k|x-y|)
* 3D: G(x,y) = exp(ik|x-y|) / (4 pi k |x-y|)

The 3D form deliberately carries a 1/k factor so that
Im G = sin(kr)/(4 pi k r) and the correlation constant comes out
dimensionless; all downstream formulas assume this scaling.

Far-field patterns of G (u^s ~ e^{ik|x|}/|x|^{(N-1)/2} u_inf):

* 2D: G_inf(xhat, y) = e^{i pi/4} / sqrt(8 k pi) * exp(-ik xhat.y)
* 3D: G_inf(xhat, y) = 1/(4 pi) * exp(-ik xhat.y)

The key identity: the L2(S^{N-1}) correlation of two far-field kernels
equals C * Im G of the source separation, with C = 1/k in 2D and C = 1
in 3D under the normalizations above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .special import _h0_array, _j0_array, spherical_j0

_DIRECTION_TOL = 1e-12


@dataclass(frozen=True)
class WaveContext:
    """Wavenumber and spatial dimension shared by every computation."""

    k: float
    dim: int = 2

    def __post_init__(self):
        if not (self.k > 0):
            raise ValueError("wavenumber k must be positive")
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")

    @property
    def wavelength(self) -> float:
        return 2.0 * np.pi / self.k


def _pairwise_distance(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.sqrt(np.sum((x - y) ** 2, axis=-1))


def _check_direction(xhat, dim):
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape[-1] != dim:
        raise ValueError(f"direction has {xhat.shape[-1]} components, expected {dim}")
    norms = np.sqrt(np.sum(xhat**2, axis=-1))
    if np.any(np.abs(norms - 1.0) > _DIRECTION_TOL):
        raise ValueError("directions must be unit vectors")
    return xhat


def green(ctx: WaveContext, x, y):
    """Fundamental solution G(x, y); broadcasts over leading axes.

    Raises ValueError when any point pair coincides (the kernel is
    singular there).
    """
    r = _pairwise_distance(x, y)
    if np.any(r == 0.0):
        raise ValueError("green is singular at coincident points")
    kr = ctx.k * np.atleast_1d(r)
    if ctx.dim == 2:
        val = 0.25j * _h0_array(kr)
    else:
        val = np.exp(1j * kr) / (4.0 * np.pi * kr)
    return complex(val[0]) if np.ndim(r) == 0 else val.reshape(np.shape(r))


def green_farfield(ctx: WaveContext, xhat, y):
    """Far-field pattern of G for observation direction(s) xhat and source(s) y."""
    xhat = _check_direction(xhat, ctx.dim)
    y = np.asarray(y, dtype=float)
    phase = np.exp(-1j * ctx.k * np.sum(xhat * y, axis=-1))
    if ctx.dim == 2:
        pref = np.exp(1j * np.pi / 4.0) / np.sqrt(8.0 * ctx.k * np.pi)
    else:
        pref = 1.0 / (4.0 * np.pi)
    out = pref * phase
    return complex(out) if np.ndim(out) == 0 else out


def scaled_im_green(ctx: WaveContext, xp, xj):
    """C_N Im G as a function of separation: J0(kr) in 2D, sinc(kr) in 3D.

    Equals 1 at coincidence in both dimensions.
    """
    r = _pairwise_distance(xp, xj)
    kr = ctx.k * np.atleast_1d(r)
    out = _j0_array(kr) if ctx.dim == 2 else spherical_j0(kr)
    return float(out[0]) if np.ndim(r) == 0 else out.reshape(np.shape(r))


def _circle_directions(nquad: int) -> np.ndarray:
    th = 2.0 * np.pi * np.arange(nquad) / nquad
    return np.column_stack([np.cos(th), np.sin(th)])


def _sphere_rule(nquad: int):
    """Product quadrature on S^2: Gauss-Legendre in cos(theta), trapezoid in phi."""
    t, wt = np.polynomial.legendre.leggauss(nquad)
    phi = 2.0 * np.pi * np.arange(nquad) / nquad
    st = np.sqrt(1.0 - t**2)
    dirs = np.empty((nquad * nquad, 3))
    dirs[:, 0] = np.outer(st, np.cos(phi)).ravel()
    dirs[:, 1] = np.outer(st, np.sin(phi)).ravel()
    dirs[:, 2] = np.repeat(t, nquad)
    weights = np.repeat(wt, nquad) * (2.0 * np.pi / nquad)
    return dirs, weights


def farfield_correlation(ctx: WaveContext, xj, xp, nquad: int = 512):
    """Numerically integrate G_inf(., xj) conj(G_inf(., xp)) over S^{N-1}.

    nquad is the node count of the periodic trapezoid rule in 2D, or the
    per-factor count of the product rule in 3D.  Accuracy is the
    caller's concern; small nquad simply under-resolves the integrand.
    """
    if nquad < 16:
        raise ValueError("nquad must be at least 16")
    if ctx.dim == 2:
        dirs = _circle_directions(nquad)
        weights = np.full(nquad, 2.0 * np.pi / nquad)
    else:
        dirs, weights = _sphere_rule(nquad)
    vals = green_farfield(ctx, dirs, np.asarray(xj, float)) * np.conj(
        green_farfield(ctx, dirs, np.asarray(xp, float))
    )
    return complex(np.sum(weights * vals))


def lemma_constant(ctx: WaveContext) -> float:
    """Constant C with correlation = C * Im G.

    Closed forms, confirmed by the coincidence limit of the correlation
    integral: 2D gives (2 pi / (8 k pi)) / (1/4) = 1/k, 3D gives
    (4 pi / (16 pi^2)) / (1/(4 pi)) = 1.
    """
    return 1.0 / ctx.k if ctx.dim == 2 else 1.0
