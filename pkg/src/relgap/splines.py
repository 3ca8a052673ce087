"""Piecewise-polynomial interpolation and oscillatory modal integrals.

Not-a-knot cubic splines and continuous piecewise-linear interpolants over a
knot grid, with panel-subdivided Gauss-Legendre evaluation of the Fourier-type
coefficients ``int p(t) exp(i f t) dt`` that expand an interpolant in a
truncated exponential eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GL_ORDER = 8
MAX_PHASE_PER_PANEL = 2.0  # keeps 8-point Gauss-Legendre exact to ~1e-14


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomial pieces ``sum_r coeffs[r, j] * (t - knots[j])**r`` on
    ``[knots[j], knots[j+1]]``."""

    knots: np.ndarray           # ascending, len m+1
    coeffs: np.ndarray          # shape (degree+1, m)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.knots, t, side="right") - 1,
                      0, self.coeffs.shape[1] - 1)
        tau = t - self.knots[idx]
        out = np.zeros(t.shape, dtype=self.coeffs.dtype)
        for r in range(self.coeffs.shape[0] - 1, -1, -1):
            out = out * tau + self.coeffs[r, idx]
        return out


def _check_grid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ValueError("knots must be a strictly increasing 1-d grid")
    return x


def piecewise_linear(x, y) -> PiecewisePoly:
    x = _check_grid(x)
    y = np.asarray(y)
    if y.shape != x.shape:
        raise ValueError("x and y must have equal length")
    h = np.diff(x)
    coeffs = np.vstack([y[:-1], np.diff(y) / h])
    return PiecewisePoly(knots=x, coeffs=coeffs)


def cubic_spline_not_a_knot(x, y) -> PiecewisePoly:
    """Interpolatory cubic spline with not-a-knot end conditions.

    Real and complex data are handled alike; needs at least 4 points.
    """
    x = _check_grid(x)
    y = np.asarray(y)
    if y.shape != x.shape:
        raise ValueError("x and y must have equal length")
    npts = x.size
    if npts < 4:
        raise ValueError("not-a-knot cubic interpolation needs at least 4 points")
    h = np.diff(x)
    dtype = np.complex128 if np.iscomplexobj(y) else np.float64
    a = np.zeros((npts, npts), dtype=np.float64)
    rhs = np.zeros(npts, dtype=dtype)
    for i in range(1, npts - 1):
        a[i, i - 1] = h[i - 1] / 6.0
        a[i, i] = (h[i - 1] + h[i]) / 3.0
        a[i, i + 1] = h[i] / 6.0
        rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]
    # third-derivative continuity across the first and last interior knots
    a[0, 0], a[0, 1], a[0, 2] = h[1], -(h[0] + h[1]), h[0]
    a[-1, -3], a[-1, -2], a[-1, -1] = h[-1], -(h[-2] + h[-1]), h[-2]
    sigma = np.linalg.solve(a, rhs)

    c0 = y[:-1]
    c1 = np.diff(y) / h - h * (2.0 * sigma[:-1] + sigma[1:]) / 6.0
    c2 = sigma[:-1] / 2.0
    c3 = np.diff(sigma) / (6.0 * h)
    return PiecewisePoly(knots=x, coeffs=np.vstack([c0, c1, c2, c3]))


def cubic_spline_clamped(x, y, d_first, d_last) -> PiecewisePoly:
    """Interpolatory cubic spline with prescribed endpoint derivatives."""
    x = _check_grid(x)
    y = np.asarray(y)
    if y.shape != x.shape:
        raise ValueError("x and y must have equal length")
    npts = x.size
    if npts < 3:
        raise ValueError("clamped cubic interpolation needs at least 3 points")
    h = np.diff(x)
    dtype = np.complex128 if np.iscomplexobj(y) or np.iscomplexobj([d_first, d_last]) else np.float64
    a = np.zeros((npts, npts), dtype=np.float64)
    rhs = np.zeros(npts, dtype=dtype)
    for i in range(1, npts - 1):
        a[i, i - 1] = h[i - 1] / 6.0
        a[i, i] = (h[i - 1] + h[i]) / 3.0
        a[i, i + 1] = h[i] / 6.0
        rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]
    a[0, 0], a[0, 1] = h[0] / 3.0, h[0] / 6.0
    rhs[0] = (y[1] - y[0]) / h[0] - d_first
    a[-1, -2], a[-1, -1] = h[-1] / 6.0, h[-1] / 3.0
    rhs[-1] = d_last - (y[-1] - y[-2]) / h[-1]
    sigma = np.linalg.solve(a, rhs)

    c0 = y[:-1]
    c1 = np.diff(y) / h - h * (2.0 * sigma[:-1] + sigma[1:]) / 6.0
    c2 = sigma[:-1] / 2.0
    c3 = np.diff(sigma) / (6.0 * h)
    return PiecewisePoly(knots=x, coeffs=np.vstack([c0, c1, c2, c3]))


def _panel_nodes(pp: PiecewisePoly, max_freq: float):
    """Gauss-Legendre nodes and weights over every piece, with pieces split
    into panels so the fastest phase advances at most MAX_PHASE_PER_PANEL
    per panel."""
    gl_x, gl_w = np.polynomial.legendre.leggauss(GL_ORDER)
    nodes, weights = [], []
    for j in range(pp.knots.size - 1):
        a, b = pp.knots[j], pp.knots[j + 1]
        n_panels = max(1, int(np.ceil(abs(max_freq) * (b - a) / MAX_PHASE_PER_PANEL)))
        edges = np.linspace(a, b, n_panels + 1)
        for q in range(n_panels):
            half = 0.5 * (edges[q + 1] - edges[q])
            mid = 0.5 * (edges[q] + edges[q + 1])
            nodes.append(mid + half * gl_x)
            weights.append(half * gl_w)
    return np.concatenate(nodes), np.concatenate(weights)


def modal_coefficients(pp: PiecewisePoly, freqs) -> np.ndarray:
    """``int pp(t) exp(i f t) dt`` over the full knot span, one value per
    frequency."""
    freqs = np.asarray(freqs, dtype=np.float64)
    max_freq = np.max(np.abs(freqs)) if freqs.size else 0.0
    t, w = _panel_nodes(pp, max_freq)
    vals = pp(t) * w
    return np.exp(1j * np.outer(freqs, t)) @ vals


def l2_mass(pp: PiecewisePoly) -> float:
    """``int |pp(t)|^2 dt`` over the full knot span (exact for degree <= 3)."""
    t, w = _panel_nodes(pp, 0.0)
    vals = pp(t)
    return float(np.sum(w * np.abs(vals) ** 2))


def derivative(pp: PiecewisePoly) -> PiecewisePoly:
    rows = [r * pp.coeffs[r] for r in range(1, pp.coeffs.shape[0])]
    if not rows:
        rows = [np.zeros_like(pp.coeffs[0])]
    return PiecewisePoly(knots=pp.knots, coeffs=np.vstack(rows))


def h1_mass(pp: PiecewisePoly) -> float:
    """``int |pp'(t)|^2 dt`` over the full knot span."""
    return l2_mass(derivative(pp))


def l2_inner(pa: PiecewisePoly, pb: PiecewisePoly) -> complex:
    """``int conj(pa(t)) pb(t) dt`` for pieces over the same knot grid
    (exact for combined degree <= 15)."""
    if pa.knots.shape != pb.knots.shape or not np.allclose(pa.knots, pb.knots):
        raise ValueError("both piecewise polynomials must share one knot grid")
    t, w = _panel_nodes(pa, 0.0)
    return complex(np.sum(w * np.conj(pa(t)) * pb(t)))


def combine(pa: PiecewisePoly, ca, pb: PiecewisePoly, cb) -> PiecewisePoly:
    """The piecewise polynomial ``ca * pa + cb * pb`` on a shared knot grid."""
    if pa.knots.shape != pb.knots.shape or not np.allclose(pa.knots, pb.knots):
        raise ValueError("both piecewise polynomials must share one knot grid")
    deg = max(pa.coeffs.shape[0], pb.coeffs.shape[0])
    out = np.zeros((deg, pa.coeffs.shape[1]), dtype=np.result_type(
        pa.coeffs.dtype, pb.coeffs.dtype, type(ca), type(cb)))
    out[: pa.coeffs.shape[0]] += ca * pa.coeffs
    out[: pb.coeffs.shape[0]] += cb * pb.coeffs
    return PiecewisePoly(knots=pa.knots, coeffs=out)
