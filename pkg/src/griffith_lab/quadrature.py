"""Deterministic composite Gauss-Legendre quadrature.

Backs every integral in the library: interval integrals, integrals over the
two polygonal sides of a chord-split rectangle, and line integrals along a
jump chord.  All rules are fixed (no adaptivity); panel contributions are
accumulated in ascending panel order so repeated runs are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import NonFiniteIntegrand


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature configuration.

    Parameters
    ----------
    n_gauss : int
        Gauss-Legendre points per panel (per axis in 2D).  Polynomials of
        degree <= 2*n_gauss - 1 integrate exactly up to round-off.
    n_panels : int
        Panels per unit length; short intervals always get at least one.
    levels : int
        Refinement levels used by convergence studies (panel doubling).
    """

    n_gauss: int = 8
    n_panels: int = 16
    levels: int = 3

    def __post_init__(self):
        if self.n_gauss < 2:
            raise ValueError("n_gauss must be >= 2")
        if self.n_panels < 1:
            raise ValueError("n_panels must be >= 1")

    def panel_count(self, length: float) -> int:
        return max(1, math.ceil(length * self.n_panels - 1e-12))

    def refined(self, factor: int) -> "QuadratureSpec":
        return QuadratureSpec(self.n_gauss, self.n_panels * factor, self.levels)


@lru_cache(maxsize=None)
def _gauss_rule(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _panel_nodes(a: float, b: float, spec: QuadratureSpec):
    """All nodes/weights of the composite rule on [a, b], ascending."""
    n_panels = spec.panel_count(b - a)
    nodes, weights = _gauss_rule(spec.n_gauss)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    ws = (half[:, None] * weights[None, :]).ravel()
    return xs, ws


def _evaluate(f: Callable, xs: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of points, falling back to a scalar loop."""
    try:
        ys = np.asarray(f(xs), dtype=float)
        if ys.shape == xs.shape:
            return ys
    except (TypeError, ValueError, IndexError):
        pass
    return np.asarray([float(f(x)) for x in xs])


def integrate_interval(f: Callable, a: float, b: float, spec: QuadratureSpec) -> float:
    """Composite Gauss-Legendre integral of f over [a, b].

    Raises NonFiniteIntegrand if any sampled value is not finite.
    """
    if not a < b:
        raise ValueError(f"invalid interval [{a}, {b}]")
    xs, ws = _panel_nodes(a, b, spec)
    ys = _evaluate(f, xs)
    if not np.all(np.isfinite(ys)):
        raise NonFiniteIntegrand(f"non-finite sample on [{a}, {b}]")
    return float(np.dot(ws, ys))


def integrate_interval_split(
    f: Callable, a: float, b: float, spec: QuadratureSpec, cuts: Sequence[float] = ()
) -> float:
    """Interval integral split at interior cut points (kinks, breakpoints)."""
    pts = [a] + sorted(c for c in cuts if a < c < b) + [b]
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi - lo > 1e-15:
            total += integrate_interval(f, lo, hi, spec)
    return total


# -- 2D rules ---------------------------------------------------------------


def _triangle_rule(v0, v1, v2, spec: QuadratureSpec):
    """Tensor rule on a triangle via the collapsed-square (Duffy) map.

    The triangle is first refined uniformly so that doubling ``n_panels``
    refines the rule; each sub-triangle then carries an n_gauss^2 tensor rule.
    """
    v0, v1, v2 = (np.asarray(v, dtype=float) for v in (v0, v1, v2))
    edge = max(
        np.linalg.norm(v1 - v0), np.linalg.norm(v2 - v1), np.linalg.norm(v0 - v2)
    )
    n_sub = max(1, math.ceil(edge * spec.n_panels / spec.n_gauss))
    nodes, weights = _gauss_rule(spec.n_gauss)
    u = 0.5 * (nodes + 1.0)
    wu = 0.5 * weights
    pts_list, ws_list = [], []
    # uniform refinement into n_sub^2 affine copies
    for i in range(n_sub):
        for j in range(n_sub - i):
            p0 = v0 + (v1 - v0) * (i / n_sub) + (v2 - v0) * (j / n_sub)
            e1 = (v1 - v0) / n_sub
            e2 = (v2 - v0) / n_sub
            sub = [(p0, p0 + e1, p0 + e2)]
            if i + j < n_sub - 1:
                sub.append((p0 + e1 + e2, p0 + e2, p0 + e1))
            for (t0, t1, t2) in sub:
                det = (t1 - t0)[0] * (t2 - t1)[1] - (t1 - t0)[1] * (t2 - t1)[0]
                uu, vv = np.meshgrid(u, u, indexing="ij")
                x = (
                    t0[None, None, :]
                    + uu[..., None] * (t1 - t0)[None, None, :]
                    + (uu * vv)[..., None] * (t2 - t1)[None, None, :]
                )
                w = (wu[:, None] * wu[None, :]) * uu * abs(det)
                pts_list.append(x.reshape(-1, 2))
                ws_list.append(w.ravel())
    return np.concatenate(pts_list), np.concatenate(ws_list)


def _fan_triangulate(polygon: Sequence) -> list:
    """Fan triangulation from the polygon centroid."""
    poly = [np.asarray(p, dtype=float) for p in polygon]
    centroid = np.mean(poly, axis=0)
    return [(centroid, poly[k], poly[(k + 1) % len(poly)]) for k in range(len(poly))]


def _evaluate_2d(f: Callable, pts: np.ndarray) -> np.ndarray:
    try:
        ys = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
        if ys.shape == (pts.shape[0],):
            return ys
    except (TypeError, ValueError, IndexError):
        pass
    return np.asarray([float(f(p[0], p[1])) for p in pts])


def integrate_polygon(f: Callable, polygon: Sequence, spec: QuadratureSpec) -> float:
    """Integral of f(x1, x2) over a convex polygon (fan-triangulated)."""
    total = 0.0
    for tri in _fan_triangulate(polygon):
        pts, ws = _triangle_rule(*tri, spec)
        ys = _evaluate_2d(f, pts)
        if not np.all(np.isfinite(ys)):
            raise NonFiniteIntegrand("non-finite sample on polygon")
        total += float(np.dot(ws, ys))
    return total


def integrate_rectangle_split(f: Callable, field, spec: QuadratureSpec) -> float:
    """Integral of f over a rectangle split by a field's jump chord.

    The two chord sides are integrated separately, so f may be discontinuous
    across the chord; for f continuous the result equals the plain rectangle
    integral.
    """
    poly_minus, poly_plus = field.split_polygons()
    return integrate_polygon(f, poly_minus, spec) + integrate_polygon(
        f, poly_plus, spec
    )


def integrate_jump_segment(f: Callable, chord, spec: QuadratureSpec) -> float:
    """Surface integral over a jump set.

    In d = 1 ``chord`` is a sequence of jump locations and the result is the
    plain sum of f over them (counting measure).  In d = 2 ``chord`` is a pair
    of endpoints and the result is the Gauss-Legendre line integral.
    """
    if isinstance(chord, (list, tuple)) and (
        len(chord) == 0 or np.isscalar(chord[0]) or np.ndim(chord[0]) == 0
    ):
        total = 0.0
        for x in chord:
            val = float(f(x))
            if not math.isfinite(val):
                raise NonFiniteIntegrand(f"non-finite jump value at {x}")
            total += val
        return total
    p0 = np.asarray(chord[0], dtype=float)
    p1 = np.asarray(chord[1], dtype=float)
    length = float(np.linalg.norm(p1 - p0))
    if length <= 0.0:
        raise ValueError("chord must have positive length")
    ts, ws = _panel_nodes(0.0, 1.0, QuadratureSpec(spec.n_gauss, spec.panel_count(length), spec.levels))
    pts = p0[None, :] + ts[:, None] * (p1 - p0)[None, :]
    ys = np.asarray([float(f(p)) for p in pts])
    if not np.all(np.isfinite(ys)):
        raise NonFiniteIntegrand("non-finite sample on chord")
    return float(np.dot(ws, ys)) * length
