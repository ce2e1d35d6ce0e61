import numpy as np
import pytest

from griffith_lab.chainrule import (
    ChainRuleLedger,
    bubble_1d,
    bubble_2d,
    chain_rule_ledger,
    residual_convergence,
    trace_identity_check,
)
from griffith_lab.errors import BoundarySupport, ConditionViolation, ExceptionalCollision
from griffith_lab.integrands import (
    VectorFieldNA,
    add_fields,
    bilinear_field,
    identity_field_2d,
    sin_tanh_field,
    swap_field_2d,
)
from griffith_lab.piecewise import Field2D, PiecewiseFn1D
from griffith_lab.quadrature import QuadratureSpec

QUAD = QuadratureSpec()
UNIT = (0.0, 1.0)
STEP = PiecewiseFn1D.step(UNIT, 0.5, 0.0, 1.0)
BUBBLE = bubble_1d(UNIT)


def jump_square(b_plus=(1.0, 0.0)):
    return Field2D(
        rect=(0.0, 1.0, 0.0, 1.0),
        chord=((0.5, 0.0), (0.5, 1.0)),
        normal=(1.0, 0.0),
        A_minus=np.zeros((2, 2)),
        b_minus=(0.0, 0.0),
        A_plus=np.zeros((2, 2)),
        b_plus=b_plus,
    )


class TestLedger1D:
    def test_bilinear_step_closed_form(self):
        ledger = chain_rule_ledger(bilinear_field(), STEP, BUBBLE, QUAD)
        assert ledger.lhs == pytest.approx(5.0 / 24.0, abs=1e-12)
        assert ledger.term_divx == pytest.approx(1.0 / 12.0, abs=1e-12)
        assert ledger.term_e == pytest.approx(0.0, abs=1e-13)
        assert ledger.term_jump == pytest.approx(0.125, abs=1e-13)
        assert abs(ledger.residual) <= 1e-10

    def test_constant_u_reduces_to_integration_by_parts(self):
        const = PiecewiseFn1D.constant(UNIT, 0.7)
        ledger = chain_rule_ledger(bilinear_field(), const, BUBBLE, QUAD)
        assert ledger.term_e == 0.0
        assert ledger.term_jump == 0.0
        assert abs(ledger.lhs - ledger.term_divx) <= 1e-12

    def test_additive_in_g(self):
        g1, g2 = bilinear_field(), sin_tanh_field()
        lsum = chain_rule_ledger(add_fields(g1, g2), STEP, BUBBLE, QUAD, validate=False)
        l1 = chain_rule_ledger(g1, STEP, BUBBLE, QUAD, validate=False)
        l2 = chain_rule_ledger(g2, STEP, BUBBLE, QUAD, validate=False)
        assert lsum.lhs == pytest.approx(l1.lhs + l2.lhs, abs=1e-10)
        assert lsum.term_jump == pytest.approx(l1.term_jump + l2.term_jump, abs=1e-10)
        assert lsum.term_divx == pytest.approx(l1.term_divx + l2.term_divx, abs=1e-10)

    def test_boundary_support_enforced(self):
        bad = type(BUBBLE)(value=lambda x: 1.0 + 0.0 * x, grad=lambda x: 0.0 * x)
        with pytest.raises(BoundarySupport):
            chain_rule_ledger(bilinear_field(), STEP, bad, QUAD)

    def test_exceptional_collision(self):
        field = VectorFieldNA(
            dim=1,
            g=lambda x, r: x * r,
            grad_x=lambda x, r: r,
            grad_r=lambda x, r: x,
            div_x=lambda x, r: r,
            potential=lambda x, r: x * r * r / 2,
            exceptional=(0.5,),
            name="collides",
        )
        with pytest.raises(ExceptionalCollision):
            chain_rule_ledger(field, STEP, BUBBLE, QUAD, validate=False)

    def test_condition_violation_surfaces(self):
        lying = VectorFieldNA(
            dim=1,
            g=lambda x, r: x * r,
            grad_x=lambda x, r: r,
            grad_r=lambda x, r: x,
            div_x=lambda x, r: r,
            potential=lambda x, r: 0.0,  # wrong potential
            conditions=frozenset({"G6"}),
            name="fake_potential",
        )
        with pytest.raises(ConditionViolation):
            chain_rule_ledger(lying, STEP, BUBBLE, QUAD)


class TestLedger2D:
    def test_identity_field_jump_square(self):
        u = jump_square()
        ledger = chain_rule_ledger(identity_field_2d(), u, bubble_2d(u.rect), QUAD)
        assert ledger.lhs == pytest.approx(1.0 / 24.0, abs=1e-12)
        assert ledger.term_divx == pytest.approx(0.0, abs=1e-13)
        assert ledger.term_e == pytest.approx(0.0, abs=1e-13)
        assert ledger.term_jump == pytest.approx(1.0 / 24.0, abs=1e-12)
        assert abs(ledger.residual) <= 1e-10

    def test_orientation_coherence(self):
        # flipping the normal while swapping the sides leaves term_jump fixed
        u = jump_square()
        flipped = Field2D(
            rect=u.rect,
            chord=u.chord,
            normal=(-1.0, 0.0),
            A_minus=u.A_plus,
            b_minus=u.b_plus,
            A_plus=u.A_minus,
            b_plus=u.b_minus,
        )
        l1 = chain_rule_ledger(identity_field_2d(), u, bubble_2d(u.rect), QUAD, validate=False)
        l2 = chain_rule_ledger(identity_field_2d(), flipped, bubble_2d(u.rect), QUAD, validate=False)
        assert l1.term_jump == pytest.approx(l2.term_jump, abs=1e-12)


class TestResidualConvergence:
    def test_polynomial_data_hits_roundoff_immediately(self):
        rows = residual_convergence(bilinear_field(), STEP, BUBBLE, QUAD, levels=3)
        assert all(res <= 1e-10 for _, res in rows)

    def test_smooth_data_decays_at_quadrature_order(self):
        coarse = QuadratureSpec(n_gauss=3, n_panels=2)
        rows = residual_convergence(sin_tanh_field(), STEP, BUBBLE, coarse, levels=5)
        for (_, r0), (_, r1) in zip(rows[:-1], rows[1:]):
            if r0 <= 1e-12:
                break
            assert r1 <= r0 / 4.0

    def test_zero_test_function_gives_zero(self):
        zero = type(BUBBLE)(value=lambda x: 0.0 * x, grad=lambda x: 0.0 * x)
        rows = residual_convergence(bilinear_field(), STEP, zero, QUAD, levels=3)
        assert all(res == 0.0 for _, res in rows)

    def test_needs_three_levels(self):
        with pytest.raises(ValueError):
            residual_convergence(bilinear_field(), STEP, BUBBLE, QUAD, levels=2)


class TestTraceIdentity:
    POINTS = [(0.25, 0.3), (0.7, 0.8), (0.9, 0.1)]

    def test_identity_gradient(self):
        u = jump_square()
        assert trace_identity_check(identity_field_2d(), u, self.POINTS) == 0.0

    def test_symmetric_two_by_two_arithmetic(self):
        S = np.array([[2.0, 1.0], [1.0, 3.0]])
        field = VectorFieldNA(
            dim=2, g=lambda x, r: S @ np.asarray(r), grad_r=lambda x, r: S, name="sym",
        )
        u = Field2D(
            rect=(0, 1, 0, 1),
            chord=((0.5, 0.0), (0.5, 1.0)),
            normal=(1.0, 0.0),
            A_minus=np.array([[0.0, 1.0], [0.0, 0.0]]),
            b_minus=(0.0, 0.0),
            A_plus=np.array([[0.0, 1.0], [0.0, 0.0]]),
            b_plus=(1.0, 0.0),
        )
        # tr(S A) = 1 = S : e(u) for A = [[0,1],[0,0]]
        assert trace_identity_check(field, u, self.POINTS) == pytest.approx(0.0, abs=1e-14)

    def test_non_conservative_control_fails(self):
        # S = [[0,1],[0,0]], A = [[0,0],[1,0]]: tr(S A) = 1 but S : e(u) = 1/2
        u = Field2D(
            rect=(0, 1, 0, 1),
            chord=((0.5, 0.0), (0.5, 1.0)),
            normal=(1.0, 0.0),
            A_minus=np.array([[0.0, 0.0], [1.0, 0.0]]),
            b_minus=(0.0, 0.0),
            A_plus=np.array([[0.0, 0.0], [1.0, 0.0]]),
            b_plus=(1.0, 0.0),
        )
        disc = trace_identity_check(swap_field_2d(), u, self.POINTS)
        assert disc == pytest.approx(0.5)
        # doubled shear gives the unit discrepancy used as the negative control
        u2 = Field2D(
            rect=(0, 1, 0, 1),
            chord=((0.5, 0.0), (0.5, 1.0)),
            normal=(1.0, 0.0),
            A_minus=np.array([[0.0, 0.0], [2.0, 0.0]]),
            b_minus=(0.0, 0.0),
            A_plus=np.array([[0.0, 0.0], [2.0, 0.0]]),
            b_plus=(1.0, 0.0),
        )
        assert trace_identity_check(swap_field_2d(), u2, self.POINTS) == pytest.approx(1.0)
