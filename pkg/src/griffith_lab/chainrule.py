"""Quadrature verification of the divergence chain rule.

For an admissible field g and a piecewise-smooth u, the composition
v(x) = g(x, u(x)) satisfies, against every compactly supported C^1 test
function phi,

    - int <g(x, u), grad phi> dx
        = int phi (div_x g)(x, u) dx
        + int phi ((grad_r g)(x, u) : e(u)) dx
        + int_{J_u} phi <g(x, u+) - g(x, u-), nu> dH^{d-1}.

The ledger evaluates all four integrals and reports the residual; on
piecewise-polynomial data the residual sits at round-off, and on smooth data
it decays at the quadrature order under panel refinement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import BoundarySupport, ConditionViolation, ExceptionalCollision
from .integrands import SamplingBox, VectorFieldNA, validate_conditions
from .piecewise import Field2D, PiecewiseFn1D, jump_set
from .quadrature import (
    QuadratureSpec,
    integrate_interval,
    integrate_jump_segment,
    integrate_rectangle_split,
)


@dataclass(frozen=True)
class TestFunction:
    """C^1 test function with explicit gradient, vanishing on the boundary."""

    value: Callable
    grad: Callable
    description: str = "test function"


def bubble_1d(domain) -> TestFunction:
    lo, hi = float(domain[0]), float(domain[1])
    return TestFunction(
        value=lambda x: (x - lo) * (hi - x),
        grad=lambda x: (lo + hi) - 2.0 * x,
        description=f"(x - {lo})({hi} - x)",
    )


def bubble_2d(rect) -> TestFunction:
    x0, x1, y0, y1 = (float(v) for v in rect)

    def value(p):
        p = np.asarray(p, dtype=float)
        return (p[0] - x0) * (x1 - p[0]) * (p[1] - y0) * (y1 - p[1])

    def grad(p):
        p = np.asarray(p, dtype=float)
        return np.array(
            [
                ((x0 + x1) - 2.0 * p[0]) * (p[1] - y0) * (y1 - p[1]),
                (p[0] - x0) * (x1 - p[0]) * ((y0 + y1) - 2.0 * p[1]),
            ]
        )

    return TestFunction(value, grad, "product bubble")


@dataclass(frozen=True)
class ChainRuleLedger:
    lhs: float
    term_divx: float
    term_e: float
    term_jump: float
    quad: QuadratureSpec

    @property
    def residual(self) -> float:
        return self.lhs - (self.term_divx + self.term_e + self.term_jump)

    def to_record(self) -> dict:
        return {
            "lhs": self.lhs,
            "term_divx": self.term_divx,
            "term_e": self.term_e,
            "term_jump": self.term_jump,
            "residual": self.residual,
            "n_gauss": self.quad.n_gauss,
            "n_panels": self.quad.n_panels,
        }


def _check_boundary_support(phi: TestFunction, u, tol: float = 1e-12):
    if isinstance(u, PiecewiseFn1D):
        for x in u.domain:
            if abs(float(phi.value(x))) > tol:
                raise BoundarySupport(f"test function is {phi.value(x)} at {x}")
        return
    x0, x1, y0, y1 = u.rect
    for s in np.linspace(0.0, 1.0, 9):
        for p in (
            (x0 + s * (x1 - x0), y0),
            (x0 + s * (x1 - x0), y1),
            (x0, y0 + s * (y1 - y0)),
            (x1, y0 + s * (y1 - y0)),
        ):
            if abs(float(phi.value(np.asarray(p)))) > tol:
                raise BoundarySupport(f"test function is nonzero at {p}")


def _validation_box(g: VectorFieldNA, u) -> SamplingBox:
    if isinstance(u, PiecewiseFn1D):
        vals = u.value_range_samples()
        pad = 0.5
        return SamplingBox(
            u.domain[0], u.domain[1], float(np.min(vals)) - pad, float(np.max(vals)) + pad
        )
    x0, x1, y0, y1 = u.rect
    corners = [np.array([a, b]) for a in (x0, x1) for b in (y0, y1)]
    vals = np.array(
        [u.A_minus @ c + u.b_minus for c in corners]
        + [u.A_plus @ c + u.b_plus for c in corners]
    )
    lo = vals.min(axis=0) - 0.5
    hi = vals.max(axis=0) + 0.5
    return SamplingBox((x0, y0), (x1, y1), tuple(lo), tuple(hi))


def chain_rule_ledger(
    g: VectorFieldNA,
    u,
    phi_test: TestFunction,
    quad: QuadratureSpec,
    validate: bool = True,
) -> ChainRuleLedger:
    """Evaluate the four terms of the divergence identity and their residual.

    ``validate=True`` first runs the hypothesis validators on the working box
    and raises ConditionViolation when a declared condition fails; jump
    points colliding with the field's exceptional set are rejected.
    """
    _check_boundary_support(phi_test, u)
    if validate:
        report = validate_conditions(g, _validation_box(g, u))
        failed = {c.name for c in report.checks if not c.passed}
        if failed:
            raise ConditionViolation(failed, report)
    records = jump_set(u)
    if g.exceptional and isinstance(u, PiecewiseFn1D):
        for rec in records:
            for e in g.exceptional:
                if abs(rec.location - e) <= 1e-12:
                    raise ExceptionalCollision(
                        f"jump at {rec.location} hits the exceptional point {e}"
                    )

    if isinstance(u, PiecewiseFn1D):
        return _ledger_1d(g, u, phi_test, quad, records)
    return _ledger_2d(g, u, phi_test, quad, records)


def _ledger_1d(g, u, phi, quad, records) -> ChainRuleLedger:
    du = u.derivative()
    lhs = 0.0
    t_div = 0.0
    t_e = 0.0
    for k, (a, b) in enumerate(u.subintervals()):
        coeffs = u.pieces[k][0]
        dcoeffs = du.pieces[k][0]

        def u_at(x):
            return float(P.polyval(x, coeffs))

        lhs += integrate_interval(
            lambda x: -g.g(x, u_at(x)) * float(phi.grad(x)), a, b, quad
        )
        t_div += integrate_interval(
            lambda x: float(phi.value(x)) * g.div_x_at(x, u_at(x)), a, b, quad
        )
        t_e += integrate_interval(
            lambda x: float(phi.value(x)) * g.grad_r(x, u_at(x)) * float(P.polyval(x, dcoeffs)),
            a,
            b,
            quad,
        )
    t_jump = 0.0
    for rec in records:
        x = rec.location
        t_jump += float(phi.value(x)) * (
            g.g(x, float(rec.trace_plus[0])) - g.g(x, float(rec.trace_minus[0]))
        ) * float(rec.normal)
    return ChainRuleLedger(lhs, t_div, t_e, t_jump, quad)


def _ledger_2d(g, u: Field2D, phi, quad, records) -> ChainRuleLedger:
    def lhs_f(x1, x2):
        p = np.array([float(x1), float(x2)])
        return -float(np.dot(np.asarray(g.g(p, u.value(p))), phi.grad(p)))

    def div_f(x1, x2):
        p = np.array([float(x1), float(x2)])
        return float(phi.value(p)) * float(g.div_x_at(p, u.value(p)))

    def e_f(x1, x2):
        p = np.array([float(x1), float(x2)])
        e_u = u.e_plus() if u.signed_side(p) > 0 else u.e_minus()
        grad_r = np.asarray(g.grad_r(p, u.value(p)))
        return float(phi.value(p)) * float(np.sum(grad_r * e_u))

    def scalarize(f):
        def wrapped(x1, x2):
            if np.ndim(x1) == 0:
                return f(x1, x2)
            return np.array([f(a, b) for a, b in zip(np.ravel(x1), np.ravel(x2))])

        return wrapped

    lhs = integrate_rectangle_split(scalarize(lhs_f), u, quad)
    t_div = integrate_rectangle_split(scalarize(div_f), u, quad)
    t_e = integrate_rectangle_split(scalarize(e_f), u, quad)
    t_jump = 0.0
    if records:
        def jump_f(p):
            p = np.asarray(p, dtype=float)
            diff = np.asarray(g.g(p, u.trace_plus(p))) - np.asarray(g.g(p, u.trace_minus(p)))
            return float(phi.value(p)) * float(np.dot(diff, u.normal))

        t_jump = integrate_jump_segment(jump_f, u.chord, quad)
    return ChainRuleLedger(lhs, t_div, t_e, t_jump, quad)


def residual_convergence(
    g: VectorFieldNA,
    u,
    phi_test: TestFunction,
    quad: QuadratureSpec,
    levels: Optional[int] = None,
) -> list:
    """Residual magnitudes under panel doubling: [(panel_count, |residual|)].

    Needs at least three levels; the hypothesis validation runs once.
    """
    levels = levels if levels is not None else quad.levels
    if levels < 3:
        raise ValueError("need at least 3 refinement levels")
    out = []
    report = validate_conditions(g, _validation_box(g, u))
    failed = {c.name for c in report.checks if not c.passed}
    if failed:
        raise ConditionViolation(failed, report)
    for k in range(levels):
        spec = QuadratureSpec(quad.n_gauss, quad.n_panels * 2**k, quad.levels)
        ledger = chain_rule_ledger(g, u, phi_test, spec, validate=False)
        out.append((spec.n_panels, abs(ledger.residual)))
    return out


def trace_identity_check(g: VectorFieldNA, u: Field2D, points: Sequence) -> float:
    """Max over samples of |tr((grad_r g) grad u) - (grad_r g) : e(u)|.

    Zero for conservative fields (symmetric grad_r g); the non-conservative
    control must report a positive discrepancy.
    """
    worst = 0.0
    for p in points:
        p = np.asarray(p, dtype=float)
        grad_r = np.asarray(g.grad_r(p, u.value(p)))
        grad_u = u.grad_side(p)
        e_u = 0.5 * (grad_u + grad_u.T)
        lhs = float(np.trace(grad_r @ grad_u))
        rhs = float(np.sum(grad_r * e_u))
        worst = max(worst, abs(lhs - rhs))
    return worst
