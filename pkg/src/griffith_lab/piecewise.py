"""Exact piecewise representations of displacement fields and their jumps.

``PiecewiseFn1D`` holds a vector-valued function on an interval given by one
polynomial per coordinate per subinterval, with finitely many breakpoints.
``Field2D`` holds a piecewise-affine field on a rectangle split by a single
straight jump chord.  Both expose traces, jump records, and the symmetrized
gradient; everything is immutable and evaluation is pure.

Orientation convention in d = 1: the jump normal is +1 and
(trace_minus, trace_plus) are the limits from the left and from the right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import AmbiguousPoint, DomainMismatch, OutOfDomain

TAU_JUMP = 1e-10  # trace-difference norm below which a breakpoint is artificial
TAU_ROOT = 1e-10  # imaginary-part tolerance for accepting polynomial roots
D_MAX = 8  # maximum polynomial degree per piece


@dataclass(frozen=True)
class JumpRecord:
    """One approximate jump point: location, one-sided traces, normal."""

    location: object
    trace_minus: np.ndarray
    trace_plus: np.ndarray
    normal: object
    amplitude: float

    def __post_init__(self):
        object.__setattr__(self, "trace_minus", np.atleast_1d(np.asarray(self.trace_minus, dtype=float)))
        object.__setattr__(self, "trace_plus", np.atleast_1d(np.asarray(self.trace_plus, dtype=float)))


class PiecewiseFn1D:
    """Piecewise-polynomial function u : [x_lo, x_hi] -> R^m.

    ``pieces[k][i]`` is the low-degree-first coefficient array of coordinate i
    on the k-th subinterval; subinterval k spans consecutive entries of
    (x_lo, *breakpoints, x_hi).
    """

    def __init__(self, domain, breakpoints, pieces, m=None):
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise ValueError("domain must satisfy x_lo < x_hi")
        bps = tuple(float(b) for b in breakpoints)
        if any(not lo < b < hi for b in bps):
            raise ValueError("breakpoints must be strictly interior")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        pieces = tuple(
            tuple(np.asarray(c, dtype=float) for c in piece) for piece in pieces
        )
        if len(pieces) != len(bps) + 1:
            raise ValueError("need exactly one piece per subinterval")
        m_found = {len(piece) for piece in pieces}
        if len(m_found) != 1:
            raise ValueError("all pieces must share the codomain dimension")
        self.m = m if m is not None else m_found.pop()
        if self.m != len(pieces[0]):
            raise ValueError("codomain dimension mismatch")
        for piece in pieces:
            for coeffs in piece:
                if coeffs.ndim != 1 or len(coeffs) == 0 or len(coeffs) > D_MAX + 1:
                    raise ValueError(f"coefficients must be 1D with degree <= {D_MAX}")
                if not np.all(np.isfinite(coeffs)):
                    raise ValueError("non-finite coefficients")
        self.domain = (lo, hi)
        self.breakpoints = bps
        self.pieces = pieces

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, domain, value):
        vals = np.atleast_1d(np.asarray(value, dtype=float))
        return cls(domain, (), (tuple(np.array([v]) for v in vals),))

    @classmethod
    def affine(cls, domain, v_lo, v_hi):
        """Affine interpolation of endpoint values over the whole domain."""
        lo, hi = float(domain[0]), float(domain[1])
        a = np.atleast_1d(np.asarray(v_lo, dtype=float))
        b = np.atleast_1d(np.asarray(v_hi, dtype=float))
        slope = (b - a) / (hi - lo)
        piece = tuple(np.array([a[i] - slope[i] * lo, slope[i]]) for i in range(len(a)))
        return cls(domain, (), (piece,))

    @classmethod
    def step(cls, domain, at, left, right):
        lvals = np.atleast_1d(np.asarray(left, dtype=float))
        rvals = np.atleast_1d(np.asarray(right, dtype=float))
        return cls(
            domain,
            (float(at),),
            (
                tuple(np.array([v]) for v in lvals),
                tuple(np.array([v]) for v in rvals),
            ),
        )

    # -- structure -------------------------------------------------------------

    def subintervals(self):
        pts = (self.domain[0],) + self.breakpoints + (self.domain[1],)
        return tuple(zip(pts[:-1], pts[1:]))

    def piece_index(self, x: float) -> int:
        for k, b in enumerate(self.breakpoints):
            if x < b:
                return k
        return len(self.breakpoints)

    def eval(self, x: float) -> np.ndarray:
        lo, hi = self.domain
        if x < lo or x > hi:
            raise OutOfDomain(f"{x} outside [{lo}, {hi}]")
        if any(x == b for b in self.breakpoints):
            raise AmbiguousPoint(f"{x} is a breakpoint; request traces instead")
        k = self.piece_index(x)
        return np.array([P.polyval(x, c) for c in self.pieces[k]])

    def __call__(self, x: float) -> np.ndarray:
        return self.eval(x)

    def trace_pair(self, k: int):
        """Left and right traces at the k-th breakpoint."""
        b = self.breakpoints[k]
        left = np.array([P.polyval(b, c) for c in self.pieces[k]])
        right = np.array([P.polyval(b, c) for c in self.pieces[k + 1]])
        return left, right

    def derivative(self) -> "PiecewiseFn1D":
        return PiecewiseFn1D(
            self.domain,
            self.breakpoints,
            tuple(
                tuple(P.polyder(c) if len(c) > 1 else np.zeros(1) for c in piece)
                for piece in self.pieces
            ),
        )

    def value_range_samples(self, count: int = 65) -> np.ndarray:
        """Sampled values across the domain (used for validation boxes)."""
        lo, hi = self.domain
        xs = np.linspace(lo, hi, count)
        vals = []
        for x in xs:
            k = self.piece_index(x) if x not in self.breakpoints else None
            if k is None:
                continue
            vals.append([P.polyval(x, c) for c in self.pieces[k]])
        for k in range(len(self.breakpoints)):
            left, right = self.trace_pair(k)
            vals.append(left)
            vals.append(right)
        return np.asarray(vals)

    def to_record(self) -> dict:
        return {
            "domain": list(self.domain),
            "breakpoints": list(self.breakpoints),
            "pieces": [[list(map(float, c)) for c in piece] for piece in self.pieces],
            "m": self.m,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PiecewiseFn1D":
        return cls(rec["domain"], rec["breakpoints"], rec["pieces"], rec.get("m"))


@dataclass(frozen=True)
class Field2D:
    """Piecewise-affine field on a rectangle split by one straight chord.

    ``side_minus``/``side_plus`` are affine maps x -> A x + b; the normal
    points from the minus side to the plus side and must be orthogonal to the
    chord direction.
    """

    rect: tuple  # (x0, x1, y0, y1)
    chord: tuple  # (p0, p1), both on the rectangle boundary
    normal: np.ndarray
    A_minus: np.ndarray
    b_minus: np.ndarray
    A_plus: np.ndarray
    b_plus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))
        object.__setattr__(self, "A_minus", np.asarray(self.A_minus, dtype=float))
        object.__setattr__(self, "b_minus", np.asarray(self.b_minus, dtype=float))
        object.__setattr__(self, "A_plus", np.asarray(self.A_plus, dtype=float))
        object.__setattr__(self, "b_plus", np.asarray(self.b_plus, dtype=float))
        p0, p1 = (np.asarray(p, dtype=float) for p in self.chord)
        object.__setattr__(self, "chord", (p0, p1))
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-12:
            raise ValueError("normal must be a unit vector")
        direction = p1 - p0
        if np.linalg.norm(direction) <= 0:
            raise ValueError("chord must have positive length")
        if abs(np.dot(self.normal, direction)) > 1e-10 * np.linalg.norm(direction):
            raise ValueError("normal must be orthogonal to the chord")
        for p in (p0, p1):
            if not self._on_boundary(p):
                raise ValueError("chord endpoints must lie on the rectangle boundary")

    def _on_boundary(self, p, tol=1e-12) -> bool:
        x0, x1, y0, y1 = self.rect
        inside = x0 - tol <= p[0] <= x1 + tol and y0 - tol <= p[1] <= y1 + tol
        on_edge = (
            min(abs(p[0] - x0), abs(p[0] - x1), abs(p[1] - y0), abs(p[1] - y1)) <= tol
        )
        return inside and on_edge

    def signed_side(self, point) -> float:
        p = np.asarray(point, dtype=float)
        return float(np.dot(p - self.chord[0], self.normal))

    def value(self, point) -> np.ndarray:
        s = self.signed_side(point)
        if abs(s) <= 1e-14:
            raise AmbiguousPoint("point lies on the jump chord")
        p = np.asarray(point, dtype=float)
        if s > 0:
            return self.A_plus @ p + self.b_plus
        return self.A_minus @ p + self.b_minus

    def __call__(self, point) -> np.ndarray:
        return self.value(point)

    def trace_minus(self, point_on_chord) -> np.ndarray:
        p = np.asarray(point_on_chord, dtype=float)
        return self.A_minus @ p + self.b_minus

    def trace_plus(self, point_on_chord) -> np.ndarray:
        p = np.asarray(point_on_chord, dtype=float)
        return self.A_plus @ p + self.b_plus

    def e_minus(self) -> np.ndarray:
        return 0.5 * (self.A_minus + self.A_minus.T)

    def e_plus(self) -> np.ndarray:
        return 0.5 * (self.A_plus + self.A_plus.T)

    def grad_side(self, point) -> np.ndarray:
        return self.A_plus if self.signed_side(point) > 0 else self.A_minus

    def split_polygons(self):
        """Corner/chord-endpoint polygons of the minus and plus sides, CCW."""
        x0, x1, y0, y1 = self.rect
        corners = [
            np.array([x0, y0]),
            np.array([x1, y0]),
            np.array([x1, y1]),
            np.array([x0, y1]),
        ]
        p0, p1 = self.chord
        minus, plus = [], []
        for c in corners:
            s = self.signed_side(c)
            if s < -1e-14:
                minus.append(c)
            elif s > 1e-14:
                plus.append(c)
        minus += [p0, p1]
        plus += [p0, p1]

        def ccw(poly):
            centroid = np.mean(poly, axis=0)
            return sorted(
                poly, key=lambda p: np.arctan2(p[1] - centroid[1], p[0] - centroid[0])
            )

        return ccw(minus), ccw(plus)

    def to_record(self) -> dict:
        return {
            "rectangle": list(self.rect),
            "chord": [list(map(float, self.chord[0])), list(map(float, self.chord[1]))],
            "normal": list(map(float, self.normal)),
            "A_minus": [list(map(float, row)) for row in self.A_minus],
            "b_minus": list(map(float, self.b_minus)),
            "A_plus": [list(map(float, row)) for row in self.A_plus],
            "b_plus": list(map(float, self.b_plus)),
        }


def jump_set(u, tau: float = TAU_JUMP, chord_samples: int = 17) -> list:
    """Jump records of a piecewise function, ordered by location.

    Breakpoints whose trace difference stays below ``tau`` are artificial
    nodes and produce no record.  For a ``Field2D`` the record is anchored at
    the chord midpoint; the chord itself is available on the field.
    """
    if isinstance(u, PiecewiseFn1D):
        records = []
        for k in range(len(u.breakpoints)):
            left, right = u.trace_pair(k)
            amp = float(np.linalg.norm(right - left))
            if amp > tau:
                records.append(
                    JumpRecord(u.breakpoints[k], left, right, 1.0, amp)
                )
        return records
    if isinstance(u, Field2D):
        p0, p1 = u.chord
        ts = np.linspace(0.0, 1.0, chord_samples)
        max_amp = 0.0
        for t in ts:
            p = p0 + t * (p1 - p0)
            max_amp = max(max_amp, float(np.linalg.norm(u.trace_plus(p) - u.trace_minus(p))))
        if max_amp <= tau:
            return []
        mid = 0.5 * (p0 + p1)
        tm, tp = u.trace_minus(mid), u.trace_plus(mid)
        return [JumpRecord(mid, tm, tp, u.normal, float(np.linalg.norm(tp - tm)))]
    raise TypeError(f"unsupported function type {type(u)!r}")


def symmetric_gradient(u, x):
    """Approximate symmetric gradient at a point of smooth continuity.

    d = 1 returns the scalar u'(x); d = 2 returns (A + A^T)/2 of the side
    containing x.  Raises AmbiguousPoint on breakpoints and chords.
    """
    if isinstance(u, PiecewiseFn1D):
        lo, hi = u.domain
        if x < lo or x > hi:
            raise OutOfDomain(f"{x} outside [{lo}, {hi}]")
        if any(x == b for b in u.breakpoints):
            raise AmbiguousPoint(f"{x} is a breakpoint")
        k = u.piece_index(x)
        if u.m == 1:
            return float(P.polyval(x, P.polyder(u.pieces[k][0])))
        return np.array([P.polyval(x, P.polyder(c)) for c in u.pieces[k]])
    if isinstance(u, Field2D):
        s = u.signed_side(x)
        if abs(s) <= 1e-14:
            raise AmbiguousPoint("point lies on the jump chord")
        return u.e_plus() if s > 0 else u.e_minus()
    raise TypeError(f"unsupported function type {type(u)!r}")


def _poly_positive_measure(coeffs: np.ndarray, a: float, b: float) -> float:
    """Lebesgue measure of {x in (a, b) : poly(x) > 0}, exact via roots."""
    deg_coeffs = np.trim_zeros(coeffs, "b")
    if len(deg_coeffs) == 0:
        return 0.0
    if len(deg_coeffs) == 1:
        return (b - a) if deg_coeffs[0] > 0 else 0.0
    roots = P.polyroots(deg_coeffs)
    cuts = sorted(
        float(r.real)
        for r in roots
        if abs(r.imag) <= TAU_ROOT and a < r.real < b
    )
    pts = [a] + cuts + [b]
    measure = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi - lo <= 0:
            continue
        if P.polyval(0.5 * (lo + hi), deg_coeffs) > 0:
            measure += hi - lo
    return measure


def measure_convergence_gap(u: PiecewiseFn1D, v: PiecewiseFn1D, delta: float) -> float:
    """Lebesgue measure of {x : |u(x) - v(x)| > delta}.

    Computed exactly by root-finding on the polynomial |u - v|^2 - delta^2
    over each subinterval of the merged breakpoint partition.
    """
    if u.domain != v.domain:
        raise DomainMismatch(f"domains differ: {u.domain} vs {v.domain}")
    if u.m != v.m:
        raise DomainMismatch(f"codomain dimensions differ: {u.m} vs {v.m}")
    if delta <= 0:
        raise ValueError("delta must be positive")
    lo, hi = u.domain
    cuts = sorted(set(u.breakpoints) | set(v.breakpoints))
    pts = [lo] + cuts + [hi]
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 0:
            continue
        mid = 0.5 * (a + b)
        ku, kv = u.piece_index(mid), v.piece_index(mid)
        gap_sq = np.zeros(1)
        for i in range(u.m):
            diff = P.polysub(u.pieces[ku][i], v.pieces[kv][i])
            gap_sq = P.polyadd(gap_sq, P.polymul(diff, diff))
        gap_sq = P.polysub(gap_sq, np.array([delta * delta]))
        total += _poly_positive_measure(np.asarray(gap_sq, dtype=float), a, b)
    return total
