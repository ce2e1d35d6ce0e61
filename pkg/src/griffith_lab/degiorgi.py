"""Affine approximation of convex integrands from below.

Given a convex (optionally positively 1-homogeneous) integrand f(x, xi), the
classical construction produces affine minorants with coefficients

    a0_{j,q}(x) = int f(x, xi) ((d+1) alpha_{j,q}(xi) + <grad alpha_{j,q}(xi), xi>) d xi
    a_{j,q}(x)  = - int f(x, xi) grad alpha_{j,q}(xi) d xi

where alpha_{j,q}(xi) = j^d alpha(j (q - xi)) is a mollifier bump of radius
1/j centred at the rational anchor q.  The supremum of the (clipped) affine
pieces reconstructs f from below; in the 1-homogeneous even case the
coefficients are selections of the convex body whose support function is
f(x, .), and perturbed selections feed the vector-field constructions of the
jointconvex module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import EmptySelection
from .quadrature import QuadratureSpec, integrate_interval_split, _gauss_rule

TAU_HOM = 1e-8  # tolerance for the vanishing constant term of 1-homogeneous f
TAU_MEMBER = 1e-8  # slack in support-set membership tests

J_MAX_DEFAULT = 64
Q_SPACING_DEFAULT = 1.0 / 16.0
Q_RADIUS_DEFAULT = 2.0


@dataclass(frozen=True)
class MollifierAlpha:
    """Non-negative C^1 bump with unit mass and support in the unit ball."""

    dim: int
    value: Callable
    grad: Callable

    @classmethod
    def canonical(cls, dim: int) -> "MollifierAlpha":
        if dim == 1:
            c = 15.0 / 16.0

            def val(xi):
                xi = np.asarray(xi, dtype=float)
                inside = np.abs(xi) <= 1.0
                return np.where(inside, c * (1.0 - xi**2) ** 2, 0.0)

            def grd(xi):
                xi = np.asarray(xi, dtype=float)
                inside = np.abs(xi) <= 1.0
                return np.where(inside, -4.0 * c * (1.0 - xi**2) * xi, 0.0)

            return cls(1, val, grd)
        if dim == 2:
            c = 3.0 / math.pi

            def val2(xi):
                xi = np.asarray(xi, dtype=float)
                s = 1.0 - xi[..., 0] ** 2 - xi[..., 1] ** 2
                return np.where(s > 0.0, c * s**2, 0.0)

            def grd2(xi):
                xi = np.asarray(xi, dtype=float)
                s = 1.0 - xi[..., 0] ** 2 - xi[..., 1] ** 2
                factor = np.where(s > 0.0, -4.0 * c * s, 0.0)
                return factor[..., None] * xi

            return cls(2, val2, grd2)
        raise ValueError("mollifiers are provided for d = 1 and d = 2")

    def mass(self, quad: QuadratureSpec) -> float:
        if self.dim == 1:
            return integrate_interval_split(self.value, -1.0, 1.0, quad)
        # polar coordinates: the support is the unit disk, so the radial
        # integrand is smooth all the way to the boundary

        def ring(theta):
            return integrate_interval_split(
                lambda r: self.value(np.stack([r * math.cos(theta), r * math.sin(theta)], axis=-1)) * r,
                0.0,
                1.0,
                quad,
            )

        return integrate_interval_split(ring, 0.0, 2.0 * math.pi, quad)


def scaled_bump(alpha: MollifierAlpha, j: int, q):
    """Value and gradient evaluators of alpha_{j,q}; support has radius 1/j."""
    if alpha.dim == 1:
        q = float(q)

        def val(xi):
            return j * alpha.value(j * (q - np.asarray(xi, dtype=float)))

        def grd(xi):
            return -(j**2) * alpha.grad(j * (q - np.asarray(xi, dtype=float)))

        return val, grd
    qv = np.asarray(q, dtype=float)

    def val2(xi):
        return j**2 * alpha.value(j * (qv - np.asarray(xi, dtype=float)))

    def grd2(xi):
        return -(j**3) * alpha.grad(j * (qv - np.asarray(xi, dtype=float)))

    return val2, grd2


def affine_coeffs(
    f: Callable,
    alpha: MollifierAlpha,
    j: int,
    q,
    x,
    quad: QuadratureSpec,
    kinks: Sequence[float] = (),
):
    """Coefficients (a0, a) of the affine minorant anchored at (j, q).

    ``kinks`` lists xi-locations where f(x, .) is not smooth (e.g. 0 for
    |xi|); the quadrature splits there so piecewise-polynomial integrands
    integrate exactly.
    """
    if j < 1:
        raise ValueError("index j must be >= 1")
    d = alpha.dim
    bump, bump_grad = scaled_bump(alpha, j, q)
    if d == 1:
        lo, hi = q - 1.0 / j, q + 1.0 / j
        cuts = [k for k in kinks if lo < k < hi]
        spec = QuadratureSpec(quad.n_gauss, max(quad.n_panels, math.ceil(4 * j)), quad.levels)

        def int0(xi):
            return f(x, xi) * (2.0 * bump(xi) + bump_grad(xi) * xi)

        def int1(xi):
            return -f(x, xi) * bump_grad(xi)

        a0 = integrate_interval_split(int0, lo, hi, spec, cuts)
        a = integrate_interval_split(int1, lo, hi, spec, cuts)
        return float(a0), float(a)
    # d = 2: tensor rule over the bounding box of the support
    qv = np.asarray(q, dtype=float)
    nodes, weights = _gauss_rule(quad.n_gauss)
    n_sub = max(4, quad.n_panels // 2)
    edges = np.linspace(-1.0 / j, 1.0 / j, n_sub + 1)
    xs, ws = [], []
    for lo_e, hi_e in zip(edges[:-1], edges[1:]):
        xs.append(0.5 * (lo_e + hi_e) + 0.5 * (hi_e - lo_e) * nodes)
        ws.append(0.5 * (hi_e - lo_e) * weights)
    xs = np.concatenate(xs)
    ws = np.concatenate(ws)
    a0 = 0.0
    a = np.zeros(2)
    for xi1, w1 in zip(xs, ws):
        for xi2, w2 in zip(xs, ws):
            xi = qv + np.array([xi1, xi2])
            w = w1 * w2
            fval = f(x, xi)
            a0 += w * fval * (3.0 * float(bump(xi)) + float(np.dot(bump_grad(xi), xi)))
            a += w * (-fval) * np.asarray(bump_grad(xi), dtype=float)
    return float(a0), a


@dataclass(frozen=True)
class AffineApproximant:
    """Lazy affine piece indexed by (j, q); coefficients computed on demand."""

    j: int
    q: object
    f: Callable
    alpha: MollifierAlpha
    quad: QuadratureSpec
    kinks: tuple = ()

    def coeffs(self, x):
        return affine_coeffs(self.f, self.alpha, self.j, self.q, x, self.quad, self.kinks)


def default_index_set(
    j_max: int = J_MAX_DEFAULT,
    q_spacing: float = Q_SPACING_DEFAULT,
    q_radius: float = Q_RADIUS_DEFAULT,
    dim: int = 1,
):
    """Dyadic truncation of the countable index set: j powers of two, q lattice."""
    js = []
    j = 1
    while j <= j_max:
        js.append(j)
        j *= 2
    n = int(round(q_radius / q_spacing))
    qs_1d = [k * q_spacing for k in range(-n, n + 1)]
    if dim == 1:
        return [(j, q) for j in js for q in qs_1d]
    return [(j, np.array([q1, q2])) for j in js for q1 in qs_1d for q2 in qs_1d]


def sup_reconstruct(
    f: Callable,
    alpha: MollifierAlpha,
    index_set: Sequence,
    x,
    xi,
    quad: QuadratureSpec,
    homogeneous: bool,
    kinks: Sequence[float] = (),
    coeff_cache: Optional[dict] = None,
) -> float:
    """Supremum of the affine pieces at (x, xi); never exceeds f + tolerance.

    For 1-homogeneous f the pieces are <a, xi>^+; otherwise [a0 + <a, xi>]^+.
    """
    if not index_set:
        raise ValueError("index set must be non-empty")
    best = 0.0
    for (j, q) in index_set:
        key = (j, float(q) if alpha.dim == 1 else tuple(np.asarray(q))) if coeff_cache is not None else None
        if key is not None and key in coeff_cache:
            a0, a = coeff_cache[key]
        else:
            a0, a = affine_coeffs(f, alpha, j, q, x, quad, kinks)
            if key is not None:
                coeff_cache[key] = (a0, a)
        inner = a * xi if alpha.dim == 1 else float(np.dot(a, xi))
        piece = inner if homogeneous else a0 + inner
        best = max(best, piece)
    return float(best)


def support_set_check(
    f: Callable,
    coefficients: Sequence,
    directions: Sequence,
    x,
    tol: float = TAU_MEMBER,
) -> list:
    """Membership reports a_j in K(x) = {z : <z, xi> <= f(x, xi) for all xi}.

    Each entry: {"coefficient", "member", "witness", "worst_direction"}.
    """
    reports = []
    for a in coefficients:
        worst = -math.inf
        worst_dir = None
        for xi in directions:
            inner = a * xi if np.ndim(a) == 0 else float(np.dot(a, xi))
            slack = inner - f(x, xi)
            if slack > worst:
                worst = slack
                worst_dir = xi
        reports.append(
            {
                "coefficient": a,
                "member": worst <= tol,
                "witness": float(worst),
                "worst_direction": worst_dir,
            }
        )
    return reports


def selection_set(
    coefficients: Sequence,
    sigma_grid: Sequence[float],
    v_grid: Sequence,
    membership_test: Callable,
) -> list:
    """Perturbed selections {a_j + sigma v} that pass the K(x) membership test.

    Deduplicates to 12 decimals; raises EmptySelection when nothing survives.
    """
    seen = set()
    out = []
    for a in coefficients:
        for sigma in sigma_grid:
            for v in v_grid:
                cand = (
                    a + sigma * v
                    if np.ndim(a) == 0 and np.ndim(v) == 0
                    else np.asarray(a, dtype=float) + sigma * np.asarray(v, dtype=float)
                )
                if not membership_test(cand):
                    continue
                key = (
                    round(float(cand), 12)
                    if np.ndim(cand) == 0
                    else tuple(np.round(np.asarray(cand, dtype=float), 12))
                )
                if key in seen:
                    continue
                seen.add(key)
                out.append(cand)
    if not out:
        raise EmptySelection("no perturbed selection passed the membership test")
    return out


def dyadic_sigma_grid(k_max: int = 6) -> list:
    return [0.5**k for k in range(1, k_max + 1)]


def dyadic_unit_vectors(dim: int, k: int = 4) -> list:
    """Rational unit directions: {-1, +1} in d = 1, Pythagorean points in d = 2."""
    if dim == 1:
        return [1.0, -1.0]
    out = []
    denom = 2**k
    for m in range(-denom, denom + 1):
        t = Fraction(m, denom)
        x = Fraction(1 - t * t, 1 + t * t)
        y = Fraction(2 * t, 1 + t * t)
        out.append(np.array([float(x), float(y)]))
        out.append(np.array([-float(x), -float(y)]))
    out.append(np.array([0.0, 1.0]))
    out.append(np.array([0.0, -1.0]))
    dedup = {}
    for v in out:
        dedup[tuple(np.round(v, 12))] = v
    return list(dedup.values())


def dyadic_near(t: float, k: int) -> float:
    """Closest dyadic rational with denominator 2^k."""
    return round(t * 2**k) / 2**k
