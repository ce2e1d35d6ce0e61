"""Catalog of bulk potentials, surface integrands, and nonautonomous fields.

The surface-integrand catalog mirrors the model families used throughout the
library: the positive-part pairing of a single field, splitting-type products
of an amplitude and an autonomous density, trace-independent densities
kappa(x, xi), and amplitude-times-profile forms.  Vector fields carry their
derivative evaluators plus the metadata needed by the hypothesis validators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    DimensionMismatch,
    InvalidParams,
    MissingEvaluator,
    NonFiniteEnergy,
)
from .piecewise import PiecewiseFn1D, jump_set
from .quadrature import QuadratureSpec, integrate_interval

TAU_GRAD = 1e-6
FD_STEP = 1e-5
TAU_SYM = 1e-10
TAU_LIP = 1e-3


# -- moduli and scalar profile forms ----------------------------------------


@dataclass(frozen=True)
class ModulusOfContinuity:
    """Parametric modulus omega(s) = min(ceiling, C * s^alpha), alpha in (0, 1].

    The ceiling defaults to 1 (the normalized family); gradient moduli of
    fields with |grad_r g| <= M need ceiling up to 2M.
    """

    C: float = 1.0
    alpha: float = 1.0
    ceiling: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidParams("modulus exponent must lie in (0, 1]")
        if self.C <= 0.0 or self.ceiling <= 0.0:
            raise InvalidParams("modulus constants must be positive")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return np.minimum(self.ceiling, self.C * np.abs(s) ** self.alpha)


@dataclass(frozen=True)
class GammaForm:
    """Scalar jump-opening profile gamma : [0, inf) -> [0, inf).

    kinds: "linear"     gamma(s) = slope * s
           "capped"     gamma(s) = min(slope * s, cap)
           "two_slope"  gamma(s) = slope1*s for s <= s0, then slope2 beyond
                        (slope2 > slope1 gives a superadditive profile)
    """

    kind: str
    slope: float = 1.0
    cap: float = 1.0
    s0: float = 1.0
    slope2: float = 2.0

    def __post_init__(self):
        if self.kind not in ("linear", "capped", "two_slope"):
            raise InvalidParams(f"unknown gamma kind {self.kind!r}")
        if self.slope <= 0 or (self.kind == "capped" and self.cap <= 0):
            raise InvalidParams("gamma parameters must be positive")
        if self.kind == "two_slope" and (self.s0 <= 0 or self.slope2 <= 0):
            raise InvalidParams("two_slope parameters must be positive")

    def __call__(self, s):
        s = np.abs(np.asarray(s, dtype=float))
        if self.kind == "linear":
            out = self.slope * s
        elif self.kind == "capped":
            out = np.minimum(self.slope * s, self.cap)
        else:
            out = np.where(
                s <= self.s0,
                self.slope * s,
                self.slope * self.s0 + self.slope2 * (s - self.s0),
            )
        return out if out.ndim else float(out)

    def is_subadditive(self, s_grid: Optional[np.ndarray] = None, tol: float = 1e-12) -> bool:
        if s_grid is None:
            s_grid = np.linspace(0.0, 4.0, 41)[1:]
        for s1 in s_grid:
            vals = self(s1 + s_grid)
            if np.any(vals > self(s1) + np.asarray(self(s_grid)) + tol):
                return False
        return True

    def lipschitz(self) -> float:
        return max(self.slope, self.slope2) if self.kind == "two_slope" else self.slope

    def to_record(self) -> dict:
        rec = {"kind": self.kind, "slope": self.slope}
        if self.kind == "capped":
            rec["cap"] = self.cap
        if self.kind == "two_slope":
            rec.update({"s0": self.s0, "slope2": self.slope2})
        return rec


class Amplitude:
    """Spatial weight a(x) >= 0 with the lower-approximate-limit convention.

    Backed by a scalar PiecewiseFn1D; at a breakpoint the value is the
    minimum of the two one-sided traces, so a == a^- everywhere by
    construction.
    """

    def __init__(self, base: PiecewiseFn1D):
        if base.m != 1:
            raise InvalidParams("amplitude must be scalar-valued")
        self.base = base

    @classmethod
    def constant(cls, domain, value: float) -> "Amplitude":
        return cls(PiecewiseFn1D.constant(domain, value))

    @classmethod
    def piecewise_constant(cls, domain, breaks, values) -> "Amplitude":
        pieces = tuple((np.array([float(v)]),) for v in values)
        return cls(PiecewiseFn1D(domain, tuple(breaks), pieces))

    @classmethod
    def poly(cls, domain, coeffs) -> "Amplitude":
        return cls(PiecewiseFn1D(domain, (), ((np.asarray(coeffs, dtype=float),),)))

    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xs)
        for i, xi in enumerate(xs):
            out[i] = self._value(xi)
        return float(out[0]) if np.ndim(x) == 0 else out

    def _value(self, x: float) -> float:
        for k, b in enumerate(self.base.breakpoints):
            if x == b:
                left, right = self.base.trace_pair(k)
                return float(min(left[0], right[0]))
        k = self.base.piece_index(x)
        return float(P.polyval(x, self.base.pieces[k][0]))

    @property
    def is_smooth(self) -> bool:
        """True when the amplitude has no genuine jumps (W^{1,1}-regular)."""
        return len(jump_set(self.base)) == 0

    def sup_bound(self) -> float:
        return float(np.max(self.base.value_range_samples()))

    def min_bound(self) -> float:
        return float(np.min(self.base.value_range_samples()))

    def to_record(self) -> dict:
        return self.base.to_record()


# -- nonautonomous vector fields ---------------------------------------------


@dataclass(frozen=True)
class VectorFieldNA:
    """Nonautonomous vector field g(x, r) with derivatives and metadata.

    Evaluator conventions: in d = 1 all arguments/values are floats; in d = 2
    points are arrays of shape (2,), gradients are 2x2 matrices with entries
    d g_i / d x_j (resp. d g_i / d r_j).
    """

    dim: int
    g: Callable
    grad_x: Optional[Callable] = None
    grad_r: Optional[Callable] = None
    div_x: Optional[Callable] = None
    potential: Optional[Callable] = None
    h1: Optional[Callable] = None
    h2: Optional[Callable] = None
    omega: Optional[ModulusOfContinuity] = None
    omega_tilde: Optional[ModulusOfContinuity] = None
    bound_M: Optional[float] = None
    lipschitz_L: Optional[float] = None
    conditions: frozenset = frozenset()
    exceptional: tuple = ()
    restricted_validity: bool = False
    name: str = "field"

    def div_x_at(self, x, r):
        if self.div_x is not None:
            return self.div_x(x, r)
        if self.grad_x is None:
            raise MissingEvaluator(f"{self.name}: div_x needs grad_x")
        gx = self.grad_x(x, r)
        return float(np.trace(np.atleast_2d(gx)))

    def scaled(self, factor: float, name: Optional[str] = None) -> "VectorFieldNA":
        """Pointwise scaling factor * g with all evaluators scaled alike."""

        def wrap(fn):
            return None if fn is None else (lambda x, r, fn=fn: np.asarray(fn(x, r)) * factor if self.dim > 1 else fn(x, r) * factor)

        return VectorFieldNA(
            dim=self.dim,
            g=wrap(self.g),
            grad_x=wrap(self.grad_x),
            grad_r=wrap(self.grad_r),
            div_x=wrap(self.div_x),
            potential=wrap(self.potential),
            h1=None if self.h1 is None else (lambda x: abs(factor) * self.h1(x)),
            h2=None if self.h2 is None else (lambda x: abs(factor) * self.h2(x)),
            omega=self.omega,
            omega_tilde=self.omega_tilde,
            bound_M=None if self.bound_M is None else abs(factor) * self.bound_M,
            lipschitz_L=None if self.lipschitz_L is None else abs(factor) * self.lipschitz_L,
            conditions=self.conditions,
            exceptional=self.exceptional,
            restricted_validity=self.restricted_validity,
            name=name or f"{factor}*{self.name}",
        )


def add_fields(f1: VectorFieldNA, f2: VectorFieldNA, name: str = "sum") -> VectorFieldNA:
    if f1.dim != f2.dim:
        raise DimensionMismatch("cannot add fields of different dimension")

    def combine(a, b):
        if a is None or b is None:
            return None
        if f1.dim == 1:
            return lambda x, r: a(x, r) + b(x, r)
        return lambda x, r: np.asarray(a(x, r)) + np.asarray(b(x, r))

    return VectorFieldNA(
        dim=f1.dim,
        g=combine(f1.g, f2.g),
        grad_x=combine(f1.grad_x, f2.grad_x),
        grad_r=combine(f1.grad_r, f2.grad_r),
        div_x=combine(f1.div_x, f2.div_x),
        potential=combine(f1.potential, f2.potential),
        h1=None if (f1.h1 is None or f2.h1 is None) else (lambda x: f1.h1(x) + f2.h1(x)),
        bound_M=None if (f1.bound_M is None or f2.bound_M is None) else f1.bound_M + f2.bound_M,
        lipschitz_L=None
        if (f1.lipschitz_L is None or f2.lipschitz_L is None)
        else f1.lipschitz_L + f2.lipschitz_L,
        conditions=f1.conditions & f2.conditions,
        exceptional=tuple(sorted(set(f1.exceptional) | set(f2.exceptional))),
        name=name,
    )


def zero_field(dim: int) -> VectorFieldNA:
    if dim == 1:
        return VectorFieldNA(
            dim=1,
            g=lambda x, r: 0.0,
            grad_x=lambda x, r: 0.0,
            grad_r=lambda x, r: 0.0,
            div_x=lambda x, r: 0.0,
            potential=lambda x, r: 0.0,
            h1=lambda x: 0.0,
            h2=lambda x: 0.0,
            omega=ModulusOfContinuity(),
            omega_tilde=ModulusOfContinuity(),
            bound_M=0.0,
            lipschitz_L=0.0,
            conditions=frozenset({"G1", "G2", "G3", "G3'", "G4", "G5", "G6"}),
            name="zero",
        )
    z2 = np.zeros(2)
    z22 = np.zeros((2, 2))
    return VectorFieldNA(
        dim=2,
        g=lambda x, r: z2,
        grad_x=lambda x, r: z22,
        grad_r=lambda x, r: z22,
        div_x=lambda x, r: 0.0,
        potential=lambda x, r: 0.0,
        h1=lambda x: 0.0,
        h2=lambda x: 0.0,
        omega=ModulusOfContinuity(),
        omega_tilde=ModulusOfContinuity(),
        bound_M=0.0,
        lipschitz_L=0.0,
        conditions=frozenset({"G1", "G2", "G3", "G3'", "G4", "G5", "G6"}),
        name="zero2d",
    )


# -- concrete fields used by the chain-rule and certification suites ----------


def bilinear_field(r_bound: float = 4.0) -> VectorFieldNA:
    """g(x, r) = x * r in d = 1 with potential x r^2 / 2.

    Globally unbounded in both arguments, so it carries the restricted
    validity flag; h1 is valid on |r| <= r_bound only.
    """
    return VectorFieldNA(
        dim=1,
        g=lambda x, r: x * r,
        grad_x=lambda x, r: r,
        grad_r=lambda x, r: x,
        div_x=lambda x, r: r,
        potential=lambda x, r: x * r * r / 2.0,
        h1=lambda x: r_bound * abs(x),
        h2=lambda x: 2.0 * r_bound,
        omega=ModulusOfContinuity(C=0.5 / r_bound, alpha=1.0),
        omega_tilde=ModulusOfContinuity(),
        bound_M=None,
        lipschitz_L=None,
        conditions=frozenset({"G1", "G2", "G3", "G6"}),
        restricted_validity=True,
        name="x_times_r",
    )


def sin_tanh_field() -> VectorFieldNA:
    """g(x, r) = sin(x) tanh(r) with potential sin(x) log cosh(r)."""
    return VectorFieldNA(
        dim=1,
        g=lambda x, r: math.sin(x) * math.tanh(r),
        grad_x=lambda x, r: math.cos(x) * math.tanh(r),
        grad_r=lambda x, r: math.sin(x) / math.cosh(r) ** 2,
        div_x=lambda x, r: math.cos(x) * math.tanh(r),
        potential=lambda x, r: math.sin(x) * math.log(math.cosh(r)),
        h1=lambda x: 1.0,
        h2=lambda x: 2.0,
        omega=ModulusOfContinuity(C=0.5),
        omega_tilde=ModulusOfContinuity(C=2.0),
        bound_M=1.0,
        lipschitz_L=1.0,
        conditions=frozenset({"G1", "G2", "G3", "G3'", "G4", "G5", "G6"}),
        name="sin_tanh",
    )


def capped_weight_tanh_field(weight_coeffs=(1.0, 0.0, 1.0), cap: float = 2.0) -> VectorFieldNA:
    """g(x, r) = min(w(x), cap) * tanh(r); default weight w(x) = x^2 + 1.

    The weight saturates at the cap; saturation points are declared as the
    exceptional x-set for the sampling validators.
    """
    w = np.asarray(weight_coeffs, dtype=float)
    wp = P.polyder(w)

    def capped(x):
        return min(float(P.polyval(x, w)), cap)

    def capped_deriv(x):
        return float(P.polyval(x, wp)) if P.polyval(x, w) < cap else 0.0

    roots = [
        float(r.real)
        for r in P.polyroots(P.polysub(w, np.array([cap])))
        if abs(r.imag) < 1e-12
    ]
    lip = cap
    return VectorFieldNA(
        dim=1,
        g=lambda x, r: capped(x) * math.tanh(r),
        grad_x=lambda x, r: capped_deriv(x) * math.tanh(r),
        grad_r=lambda x, r: capped(x) / math.cosh(r) ** 2,
        div_x=lambda x, r: capped_deriv(x) * math.tanh(r),
        potential=lambda x, r: capped(x) * math.log(math.cosh(r)),
        h1=lambda x: capped(x),
        h2=lambda x: 2.0 * (abs(float(P.polyval(x, wp))) + 0.01),
        omega=ModulusOfContinuity(C=0.5),
        omega_tilde=ModulusOfContinuity(C=0.78 * cap, ceiling=cap),
        bound_M=lip,
        lipschitz_L=lip,
        conditions=frozenset({"G1", "G2", "G3'", "G4", "G5", "G6"}),
        exceptional=tuple(roots),
        name="capped_weight_tanh",
    )


def identity_field_2d(r_bound: float = 4.0) -> VectorFieldNA:
    """g(x, r) = r in d = 2 with potential |r|^2 / 2."""
    eye = np.eye(2)
    z22 = np.zeros((2, 2))
    return VectorFieldNA(
        dim=2,
        g=lambda x, r: np.asarray(r, dtype=float),
        grad_x=lambda x, r: z22,
        grad_r=lambda x, r: eye,
        div_x=lambda x, r: 0.0,
        potential=lambda x, r: 0.5 * float(np.dot(r, r)),
        h1=lambda x: r_bound,
        h2=lambda x: 1.0,
        omega=ModulusOfContinuity(),
        omega_tilde=ModulusOfContinuity(),
        bound_M=math.sqrt(2.0),
        lipschitz_L=1.0,
        conditions=frozenset({"G1", "G2", "G3", "G3'", "G4", "G5", "G6"}),
        restricted_validity=True,
        name="identity2d",
    )


def swap_field_2d() -> VectorFieldNA:
    """Non-conservative control g(x, r) = (r_2, 0); grad_r is non-symmetric."""
    S = np.array([[0.0, 1.0], [0.0, 0.0]])
    z22 = np.zeros((2, 2))
    return VectorFieldNA(
        dim=2,
        g=lambda x, r: np.array([float(r[1]), 0.0]),
        grad_x=lambda x, r: z22,
        grad_r=lambda x, r: S,
        div_x=lambda x, r: 0.0,
        potential=None,
        h1=lambda x: 4.0,
        h2=lambda x: 1.0,
        omega=ModulusOfContinuity(),
        omega_tilde=ModulusOfContinuity(),
        bound_M=1.0,
        lipschitz_L=1.0,
        conditions=frozenset({"G1", "G2", "G3", "G3'", "G4", "G5", "G6"}),
        restricted_validity=True,
        name="swap2d",
    )


# -- condition validators ------------------------------------------------------


@dataclass(frozen=True)
class SamplingBox:
    """Axis-aligned sampling region in (x, r) space; scalars in d = 1."""

    x_lo: object
    x_hi: object
    r_lo: object
    r_hi: object


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    witness: float
    threshold: float
    note: str = ""

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "witness": self.witness,
            "threshold": self.threshold,
            "note": self.note,
        }


@dataclass(frozen=True)
class ConditionReport:
    field_name: str
    checks: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> ConditionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_record(self) -> dict:
        return {
            "field": self.field_name,
            "all_passed": self.all_passed,
            "checks": [c.to_record() for c in self.checks],
        }


def _axis_grid(lo, hi, n, dim):
    if dim == 1:
        return [float(v) for v in np.linspace(lo, hi, n)]
    axes = [np.linspace(lo[i], hi[i], n) for i in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return [np.array(p) for p in zip(*(m.ravel() for m in mesh))]


def _fd_grad_potential(field: VectorFieldNA, x, r, step=FD_STEP):
    if field.dim == 1:
        return (field.potential(x, r + step) - field.potential(x, r - step)) / (2 * step)
    out = np.zeros(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = step
        out[i] = (field.potential(x, r + e) - field.potential(x, r - e)) / (2 * step)
    return out


def validate_conditions(
    field: VectorFieldNA,
    box: SamplingBox,
    grid_sizes: int = 9,
    pair_subsample: int = 8,
    conditions: Optional[set] = None,
) -> ConditionReport:
    """Sample-based pass/fail report for every declared hypothesis of a field.

    Each check reports the worst witness value seen on the grid together with
    the threshold it was compared against.  MissingEvaluator is raised when a
    declared condition needs an evaluator or metadata the field lacks.
    ``conditions`` restricts the sweep to a subset of the declared list.
    """
    if grid_sizes < 8:
        raise ValueError("grid sizes must be >= 8 per axis")
    xs = _axis_grid(box.x_lo, box.x_hi, grid_sizes, field.dim)
    rs = _axis_grid(box.r_lo, box.r_hi, grid_sizes, field.dim)
    if field.exceptional:
        xs = [
            x
            for x in xs
            if all(np.linalg.norm(np.atleast_1d(x) - np.atleast_1d(e)) > 1e-8 for e in field.exceptional)
        ]
    r_pairs = [
        (rs[i], rs[j])
        for i in range(0, len(rs), max(1, len(rs) // pair_subsample))
        for j in range(0, len(rs), max(1, len(rs) // pair_subsample))
        if not np.array_equal(np.atleast_1d(rs[i]), np.atleast_1d(rs[j]))
    ]
    checks = []

    def norm(v):
        return float(np.linalg.norm(np.atleast_1d(np.asarray(v, dtype=float))))

    to_check = field.conditions if conditions is None else (field.conditions & conditions)
    for cond in sorted(to_check):
        if cond in ("G1", "G1'"):
            if field.h1 is None:
                raise MissingEvaluator(f"({cond}) requires h1")
            witness = max(norm(field.g(x, r)) - field.h1(x) for x in xs for r in rs)
            checks.append(ConditionCheck(cond, witness <= 1e-12, witness, 0.0, "max |g| - h1"))
        elif cond == "G2":
            if field.grad_x is None or field.h2 is None or field.omega is None:
                raise MissingEvaluator("(G2) requires grad_x, h2 and omega")
            witness = max(
                norm(np.asarray(field.grad_x(x, r)) - np.asarray(field.grad_x(x, s)))
                - float(field.omega(norm(np.atleast_1d(r) - np.atleast_1d(s)))) * field.h2(x)
                for x in xs
                for (r, s) in r_pairs
            )
            checks.append(ConditionCheck(cond, witness <= 1e-10, witness, 0.0, "modulus bound on grad_x"))
        elif cond == "G3":
            if field.grad_r is None:
                raise MissingEvaluator("(G3) requires grad_r")
            witness = 0.0
            for x in xs:
                for r in rs:
                    if field.dim == 1:
                        fd = (field.g(x, r + FD_STEP) - field.g(x, r - FD_STEP)) / (2 * FD_STEP)
                        witness = max(witness, abs(fd - field.grad_r(x, r)))
                    else:
                        gr = np.asarray(field.grad_r(x, r))
                        for jcol in range(2):
                            e = np.zeros(2)
                            e[jcol] = FD_STEP
                            fd = (np.asarray(field.g(x, r + e)) - np.asarray(field.g(x, r - e))) / (2 * FD_STEP)
                            witness = max(witness, float(np.max(np.abs(fd - gr[:, jcol]))))
            checks.append(ConditionCheck(cond, witness <= TAU_GRAD, witness, TAU_GRAD, "grad_r vs finite differences"))
        elif cond == "G3'":
            if field.lipschitz_L is None:
                raise MissingEvaluator("(G3') requires the Lipschitz constant L")
            witness = 0.0
            for x in xs:
                for (r, s) in r_pairs:
                    dr = norm(np.atleast_1d(r) - np.atleast_1d(s))
                    quot = norm(np.asarray(field.g(x, r)) - np.asarray(field.g(x, s))) / dr
                    witness = max(witness, quot)
            bound = field.lipschitz_L * (1.0 + TAU_LIP)
            checks.append(ConditionCheck(cond, witness <= bound, witness, bound, "sampled Lipschitz quotient"))
        elif cond == "G4":
            if field.grad_r is None or field.bound_M is None:
                raise MissingEvaluator("(G4) requires grad_r and M")
            witness = max(norm(field.grad_r(x, r)) for x in xs for r in rs)
            checks.append(ConditionCheck(cond, witness <= field.bound_M + 1e-12, witness, field.bound_M, "max |grad_r g|"))
        elif cond == "G5":
            if field.grad_r is None or field.omega_tilde is None:
                raise MissingEvaluator("(G5) requires grad_r and omega_tilde")
            witness = max(
                norm(np.asarray(field.grad_r(x, r)) - np.asarray(field.grad_r(x, s)))
                - float(field.omega_tilde(norm(np.atleast_1d(r) - np.atleast_1d(s))))
                for x in xs
                for (r, s) in r_pairs
            )
            checks.append(ConditionCheck(cond, witness <= 1e-10, witness, 0.0, "modulus bound on grad_r"))
        elif cond == "G6":
            if field.grad_r is None:
                raise MissingEvaluator("(G6) requires grad_r")
            asym = 0.0
            if field.dim > 1:
                for x in xs:
                    for r in rs:
                        gr = np.asarray(field.grad_r(x, r))
                        asym = max(asym, float(np.max(np.abs(gr - gr.T))))
            if asym > TAU_SYM:
                checks.append(ConditionCheck(cond, False, asym, TAU_SYM, "grad_r asymmetry"))
                continue
            if field.potential is None:
                raise MissingEvaluator("(G6) requires the potential G")
            witness = max(
                norm(np.asarray(_fd_grad_potential(field, x, r)) - np.asarray(field.g(x, r)))
                for x in xs
                for r in rs
            )
            checks.append(ConditionCheck(cond, witness <= TAU_GRAD, max(witness, asym), TAU_GRAD, "grad_r G vs g and symmetry"))
    return ConditionReport(field.name, tuple(checks))


# -- surface integrands --------------------------------------------------------


@dataclass
class SurfaceIntegrand:
    """Surface density phi(x, r, t, xi) with catalog metadata.

    ``evaluator`` must accept numpy broadcasting in the trace slots (d = 1);
    ``family`` is an optional generating family of vector fields realizing
    phi as a supremum of pairings.
    """

    dim: int
    evaluator: Callable
    kind: str
    params: dict = dc_field(default_factory=dict)
    family: Optional[tuple] = None
    symmetric_jointly_convex: bool = False
    na_sjc: bool = False
    bv_sjc: bool = False
    strictly_positive_c: Optional[float] = None
    kinks: tuple = ()
    name: str = "phi"

    def __call__(self, x, r, t, xi):
        return self.evaluator(x, r, t, xi)

    def flags_record(self) -> dict:
        return {
            "kind": self.kind,
            "symmetric_jointly_convex": self.symmetric_jointly_convex,
            "na_sjc": self.na_sjc,
            "bv_sjc": self.bv_sjc,
            "strictly_positive_c": self.strictly_positive_c,
        }


def _pairing(field: VectorFieldNA, x, r, t, xi):
    if field.dim == 1:
        return (field.g(x, r) - field.g(x, t)) * xi
    return float(np.dot(np.asarray(field.g(x, r)) - np.asarray(field.g(x, t)), np.asarray(xi)))


def family_sup(family: Sequence[VectorFieldNA], x, r, t, xi) -> float:
    return max(_pairing(f, x, r, t, xi) for f in family)


def sup_family_integrand(family: Sequence[VectorFieldNA], dim: int = 1, name: str = "sup_family") -> SurfaceIntegrand:
    family = tuple(family)

    def ev(x, r, t, xi):
        return family_sup(family, x, r, t, xi)

    return SurfaceIntegrand(dim=dim, evaluator=ev, kind="sup_family", family=family, name=name)


def _abs_norm(xi, dim):
    if dim == 1:
        return np.abs(np.asarray(xi, dtype=float))
    return float(np.linalg.norm(np.asarray(xi, dtype=float)))


def make_catalog_integrand(kind: str, **params) -> SurfaceIntegrand:
    """Build a catalog surface integrand by string tag.

    Tags: model_case, splitting, kappa_x_xi, amp_times_gamma, ortho_sup,
    amp_times_kappa_xi, custom_theta.  Validation failures raise
    InvalidParams with the offending clause.
    """
    if kind == "model_case":
        g: VectorFieldNA = params["field"]

        def ev_model(x, r, t, xi):
            if g.dim == 1:
                return np.maximum((g.g(x, r) - g.g(x, t)) * xi, 0.0)
            return max(_pairing(g, x, r, t, xi), 0.0)

        na = {"G1", "G2", "G3'", "G6"} <= set(g.conditions)
        return SurfaceIntegrand(
            dim=g.dim,
            evaluator=ev_model,
            kind=kind,
            params={"field": g},
            family=(g, zero_field(g.dim)),
            na_sjc=na,
            symmetric_jointly_convex=False,
            name=f"model_case[{g.name}]",
        )

    if kind == "splitting":
        a: Amplitude = params["a"]
        kappa: SurfaceIntegrand = params["kappa"]
        if a.min_bound() < 0:
            raise InvalidParams("amplitude must be non-negative")

        def ev_split(x, r, t, xi):
            return a(x) * kappa.evaluator(x, r, t, xi)

        return SurfaceIntegrand(
            dim=kappa.dim,
            evaluator=ev_split,
            kind=kind,
            params={"a": a, "kappa": kappa},
            na_sjc=kappa.symmetric_jointly_convex and a.is_smooth,
            bv_sjc=kappa.symmetric_jointly_convex,
            name=f"splitting[{kappa.name}]",
        )

    if kind == "kappa_x_xi":
        dim = int(params.get("dim", 1))
        if dim != 1:
            raise InvalidParams("kappa_x_xi is provided for d = 1 instances")
        weight = np.asarray(params.get("weight", (1.0,)), dtype=float)

        def ev_kxx(x, r, t, xi):
            return P.polyval(np.asarray(x, dtype=float), weight) * _abs_norm(xi, 1)

        lo = float(np.min(P.polyval(np.linspace(*params.get("x_range", (0.0, 1.0)), 257), weight)))
        if lo <= 0:
            raise InvalidParams("kappa(x, xi) must be bounded away from zero (c > 0)")
        return SurfaceIntegrand(
            dim=dim,
            evaluator=ev_kxx,
            kind=kind,
            params={"weight": weight, "x_range": params.get("x_range", (0.0, 1.0))},
            strictly_positive_c=lo,
            na_sjc=True,
            kinks=(0.0,),
            name="kappa_x_xi",
        )

    if kind == "amp_times_gamma":
        a: Amplitude = params["a"]
        gamma: GammaForm = params["gamma"]
        if a.min_bound() < 0:
            raise InvalidParams("amplitude must be non-negative")
        if not gamma.is_subadditive():
            raise InvalidParams("gamma is not subadditive on the test grid")

        def ev_gamma(x, r, t, xi):
            return a(x) * gamma(np.asarray(r, dtype=float) - np.asarray(t, dtype=float)) * _abs_norm(xi, 1)

        return SurfaceIntegrand(
            dim=1,
            evaluator=ev_gamma,
            kind=kind,
            params={"a": a, "gamma": gamma},
            symmetric_jointly_convex=True,
            na_sjc=a.is_smooth,
            bv_sjc=True,
            name=f"amp_times_gamma[{gamma.kind}]",
        )

    if kind == "ortho_sup":
        a: Amplitude = params["a"]
        thetas = tuple(params["thetas"])
        dim = int(params.get("dim", 1))
        for th in thetas:
            if not th.is_subadditive():
                raise InvalidParams("theta_k is not subadditive on the test grid")
            if abs(float(th(0.0))) > 0:
                raise InvalidParams("theta_k(0) must vanish")
        if dim == 1:
            th0 = thetas[0]

            def ev_ortho(x, r, t, xi):
                return a(x) * th0(np.asarray(r) - np.asarray(t)) * _abs_norm(xi, 1)

        else:
            angles = np.linspace(0.0, math.pi / 2, int(params.get("basis_samples", 65)))

            def ev_ortho(x, r, t, xi):
                best = 0.0
                d = np.asarray(r, dtype=float) - np.asarray(t, dtype=float)
                xi = np.asarray(xi, dtype=float)
                for ang in angles:
                    z1 = np.array([math.cos(ang), math.sin(ang)])
                    z2 = np.array([-math.sin(ang), math.cos(ang)])
                    val = 0.0
                    for th, z in zip(thetas, (z1, z2)):
                        val += float(th(np.dot(d, z))) ** 2 * np.dot(xi, z) ** 2
                    best = max(best, math.sqrt(val))
                return a(x) * best

        return SurfaceIntegrand(
            dim=dim,
            evaluator=ev_ortho,
            kind=kind,
            params={"a": a, "thetas": thetas},
            symmetric_jointly_convex=True,
            na_sjc=a.is_smooth,
            bv_sjc=True,
            name="ortho_sup",
        )

    if kind == "amp_times_kappa_xi":
        a: Amplitude = params["a"]
        scale = float(params.get("scale", 1.0))
        dim = int(params.get("dim", 1))
        if scale <= 0:
            raise InvalidParams("kappa(xi) scale must be positive")
        if a.min_bound() < 0:
            raise InvalidParams("amplitude must be non-negative")

        def ev_axk(x, r, t, xi):
            return a(x) * scale * _abs_norm(xi, dim)

        c = a.min_bound() * scale
        return SurfaceIntegrand(
            dim=dim,
            evaluator=ev_axk,
            kind=kind,
            params={"a": a, "scale": scale},
            symmetric_jointly_convex=True,
            na_sjc=a.is_smooth,
            bv_sjc=True,
            strictly_positive_c=c if c > 0 else None,
            kinks=(0.0,),
            name="amp_times_kappa_xi",
        )

    if kind == "custom_theta":
        theta: GammaForm = params["theta"]

        def ev_theta(x, r, t, xi):
            return theta(np.asarray(r, dtype=float) - np.asarray(t, dtype=float)) * _abs_norm(xi, 1)

        return SurfaceIntegrand(
            dim=1,
            evaluator=ev_theta,
            kind="custom",
            params={"theta": theta},
            name=f"custom_theta[{theta.kind}]",
        )

    raise InvalidParams(f"unknown catalog kind {kind!r}")


# -- energies -------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPenalty:
    value_lo: float
    value_hi: float
    beta: float = 1e4


@dataclass
class EnergySpec:
    """Bundle (W, phi, Psi, domain, boundary data) defining the total energy.

    W(x, F) is the bulk potential with growth exponent p and coercivity
    constant c_W; Psi is the confinement term; the optional boundary penalty
    replaces Dirichlet data by quadratic penalties at the endpoints.
    """

    W: Callable
    p: float
    c_W: float
    phi: SurfaceIntegrand
    Psi: Callable
    domain: tuple
    boundary: Optional[BoundaryPenalty] = None

    def __post_init__(self):
        if not self.p > 1:
            raise InvalidParams("bulk exponent p must exceed 1")
        if self.boundary is not None and self.boundary.beta < 0:
            raise InvalidParams("boundary penalty weight must be >= 0")


def p_power_bulk(c: float = 1.0, p: float = 2.0) -> Callable:
    def W(x, F):
        return c * np.abs(np.asarray(F, dtype=float)) ** p

    return W


@dataclass(frozen=True)
class EnergyLedger:
    bulk: float
    surface: float
    confinement: float
    boundary: float

    @property
    def total(self) -> float:
        return self.bulk + self.surface + self.confinement + self.boundary

    def to_record(self) -> dict:
        return {
            "bulk": self.bulk,
            "surface": self.surface,
            "confinement": self.confinement,
            "boundary": self.boundary,
            "total": self.total,
        }


def surface_energy(phi: SurfaceIntegrand, u: PiecewiseFn1D) -> float:
    """Jump energy of a 1D function: phi evaluated at (u+, u-, +1) per jump."""
    total = 0.0
    for rec in jump_set(u):
        r = float(rec.trace_plus[0]) if u.m == 1 else rec.trace_plus
        t = float(rec.trace_minus[0]) if u.m == 1 else rec.trace_minus
        total += float(phi(rec.location, r, t, 1.0))
    return total


def eval_energy(spec: EnergySpec, u: PiecewiseFn1D, quad: QuadratureSpec) -> EnergyLedger:
    """Evaluate the four-part energy ledger of a 1D displacement field."""
    if not isinstance(u, PiecewiseFn1D) or u.m != 1:
        raise DimensionMismatch("eval_energy expects a scalar PiecewiseFn1D")
    if tuple(u.domain) != tuple(spec.domain):
        raise DimensionMismatch(f"domain mismatch: {u.domain} vs {spec.domain}")
    du = u.derivative()
    bulk = 0.0
    confinement = 0.0
    for k, (a, b) in enumerate(u.subintervals()):
        dcoef = du.pieces[k][0]
        coef = u.pieces[k][0]
        bulk += integrate_interval(lambda x: spec.W(x, P.polyval(x, dcoef)), a, b, quad)
        confinement += integrate_interval(lambda x: spec.Psi(np.abs(P.polyval(x, coef))), a, b, quad)
    surface = surface_energy(spec.phi, u)
    boundary = 0.0
    if spec.boundary is not None:
        lo, hi = u.domain
        u_lo = float(P.polyval(lo, u.pieces[0][0]))
        u_hi = float(P.polyval(hi, u.pieces[-1][0]))
        boundary = spec.boundary.beta * (
            (u_lo - spec.boundary.value_lo) ** 2 + (u_hi - spec.boundary.value_hi) ** 2
        )
    ledger = EnergyLedger(float(bulk), float(surface), float(confinement), float(boundary))
    if not math.isfinite(ledger.total):
        raise NonFiniteEnergy("energy ledger contains non-finite entries")
    return ledger
