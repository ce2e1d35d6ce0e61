import numpy as np
import pytest

from griffith_lab.degiorgi import (
    AffineApproximant,
    MollifierAlpha,
    affine_coeffs,
    default_index_set,
    dyadic_near,
    dyadic_sigma_grid,
    dyadic_unit_vectors,
    selection_set,
    sup_reconstruct,
    support_set_check,
)
from griffith_lab.errors import EmptySelection
from griffith_lab.quadrature import QuadratureSpec

QUAD = QuadratureSpec()
ALPHA1 = MollifierAlpha.canonical(1)
ALPHA2 = MollifierAlpha.canonical(2)

f_abs = lambda x, xi: np.abs(xi)
f_sq = lambda x, xi: np.asarray(xi, dtype=float) ** 2


def test_mollifier_mass_is_one():
    assert ALPHA1.mass(QUAD) == pytest.approx(1.0, abs=1e-12)
    assert ALPHA2.mass(QUAD) == pytest.approx(1.0, abs=1e-12)


def test_mollifier_nonnegative_with_compact_support():
    xs = np.linspace(-2.0, 2.0, 801)
    vals = ALPHA1.value(xs)
    assert np.all(vals >= 0.0)
    assert np.all(vals[np.abs(xs) > 1.0] == 0.0)


class TestAffineCoeffs:
    def test_abs_right_anchor(self):
        # f affine on the support => a equals the slope, a0 vanishes
        a0, a = affine_coeffs(f_abs, ALPHA1, 4, 0.5, 0.0, QUAD, kinks=(0.0,))
        assert a == pytest.approx(1.0, abs=1e-10)
        assert abs(a0) <= 1e-8

    def test_abs_centered_anchor_is_odd(self):
        a0, a = affine_coeffs(f_abs, ALPHA1, 4, 0.0, 0.0, QUAD, kinks=(0.0,))
        assert a == pytest.approx(0.0, abs=1e-12)

    def test_abs_left_anchor_mirror(self):
        a0, a = affine_coeffs(f_abs, ALPHA1, 4, -0.5, 0.0, QUAD, kinks=(0.0,))
        assert a == pytest.approx(-1.0, abs=1e-10)
        assert abs(a0) <= 1e-8

    def test_against_dense_quadrature_oracle(self):
        dense = QuadratureSpec(n_gauss=8, n_panels=10_000)
        for (j, q) in [(2, 0.3), (8, 0.1), (16, -0.7)]:
            a0_d, a_d = affine_coeffs(f_abs, ALPHA1, j, q, 0.0, dense, kinks=(0.0,))
            a0, a = affine_coeffs(f_abs, ALPHA1, j, q, 0.0, QUAD, kinks=(0.0,))
            assert a == pytest.approx(a_d, abs=1e-10)
            assert a0 == pytest.approx(a0_d, abs=1e-10)

    def test_square_coefficients_match_tangent(self):
        # for f = xi^2 the minorant is the tangent at q up to the O(1/j^2) shift
        j, q = 16, 0.75
        a0, a = affine_coeffs(f_sq, ALPHA1, j, q, 0.0, QUAD)
        assert a == pytest.approx(2 * q, abs=1e-10)
        assert a0 == pytest.approx(-(q**2) - (1.0 / 7.0) / j**2, abs=1e-10)

    def test_lazy_approximant(self):
        approx = AffineApproximant(4, 0.5, f_abs, ALPHA1, QUAD, kinks=(0.0,))
        a0, a = approx.coeffs(0.0)
        assert a == pytest.approx(1.0, abs=1e-10)


class TestSupReconstruct:
    def test_two_piece_envelope(self):
        idx = [(4, -0.5), (4, 0.5)]
        val = sup_reconstruct(f_abs, ALPHA1, idx, 0.0, -0.7, QUAD, homogeneous=True, kinks=(0.0,))
        assert val == pytest.approx(0.7, abs=1e-9)
        assert sup_reconstruct(f_abs, ALPHA1, idx, 0.0, 0.0, QUAD, homogeneous=True, kinks=(0.0,)) == 0.0

    def test_square_envelope_from_below(self):
        idx = default_index_set(j_max=32, q_spacing=0.125, q_radius=2.0)
        cache = {}
        val = sup_reconstruct(f_sq, ALPHA1, idx, 0.0, 1.0, QUAD, homogeneous=False, coeff_cache=cache)
        assert 1.0 - 0.02 <= val <= 1.0 + 1e-8

    def test_from_below_everywhere(self):
        idx = default_index_set(j_max=64)
        cache = {}
        for xi in np.linspace(-2.0, 2.0, 41):
            val = sup_reconstruct(f_abs, ALPHA1, idx, 0.0, xi, QUAD, homogeneous=True, kinks=(0.0,), coeff_cache=cache)
            assert val <= abs(xi) + 1e-8

    def test_monotone_in_index_set(self):
        small = default_index_set(j_max=4, q_spacing=0.5)
        large = default_index_set(j_max=16, q_spacing=0.25)
        cache_s, cache_l = {}, {}
        for xi in (-1.3, 0.2, 1.7):
            v_small = sup_reconstruct(f_sq, ALPHA1, small, 0.0, xi, QUAD, homogeneous=False, coeff_cache=cache_s)
            v_large = sup_reconstruct(f_sq, ALPHA1, large, 0.0, xi, QUAD, homogeneous=False, coeff_cache=cache_l)
            assert v_large >= v_small - 1e-12

    def test_dyadic_convergence_halves_gap(self):
        xi_grid = np.linspace(-2.0, 2.0, 25)
        gaps = []
        for k in (1, 2, 3, 4):
            idx = default_index_set(j_max=2**k, q_spacing=2.0**-k, q_radius=2.0)
            cache = {}
            gap = max(
                f_sq(0.0, xi) - sup_reconstruct(f_sq, ALPHA1, idx, 0.0, xi, QUAD, homogeneous=False, coeff_cache=cache)
                for xi in xi_grid
            )
            gaps.append(max(gap, 0.0))
        for g0, g1 in zip(gaps[:-1], gaps[1:]):
            if g0 <= 1e-8:
                break
            assert g1 <= g0 / 2.0

    def test_regularity_inheritance(self):
        f = lambda x, xi: (1.0 + x**2) * np.abs(xi)
        xs = np.linspace(0.0, 1.0, 9)
        vals = [affine_coeffs(f, ALPHA1, 8, 0.5, x, QUAD, kinks=(0.0,))[1] for x in xs]
        for x1, v1 in zip(xs, vals):
            for x2, v2 in zip(xs, vals):
                assert abs(v1 - v2) <= abs(x1**2 - x2**2) + 1e-9


class TestSupportAndSelections:
    def test_interval_membership(self):
        dirs = dyadic_unit_vectors(1)
        reports = support_set_check(f_abs, [1.0, 1.2], dirs, 0.0)
        assert reports[0]["member"]
        assert not reports[1]["member"]
        assert reports[1]["worst_direction"] == 1.0
        assert reports[1]["witness"] == pytest.approx(0.2)

    def test_box_membership_2d(self):
        f_box = lambda x, xi: 2.0 * abs(xi[0]) + abs(xi[1])
        dirs = dyadic_unit_vectors(2, k=4)
        reports = support_set_check(f_box, [np.array([2.0, 0.0])], dirs, 0.0)
        assert reports[0]["member"]

    def test_selection_interval(self):
        member = lambda b: abs(b) <= 1.0 + 1e-12
        out = selection_set([0.0], [0.25, 0.5], [1.0, -1.0], member)
        assert sorted(out) == pytest.approx([-0.5, -0.25, 0.25, 0.5])

    def test_selection_boundary_point_rejects_outward(self):
        member = lambda b: abs(b) <= 1.0 + 1e-12
        with pytest.raises(EmptySelection):
            selection_set([1.0], [0.25, 0.5], [1.0], member)

    def test_selection_disk_2d(self):
        member = lambda b: float(np.linalg.norm(b)) <= 1.0 + 1e-12
        out = selection_set([np.array([0.0, 0.0])], [0.5], [np.array([1.0, 0.0])], member)
        assert len(out) == 1
        assert out[0] == pytest.approx([0.5, 0.0])


def test_dyadic_helpers():
    assert dyadic_near(0.3, 4) == pytest.approx(5.0 / 16.0)
    assert all(np.isclose(np.linalg.norm(v), 1.0) for v in dyadic_unit_vectors(2, k=3))
    assert dyadic_sigma_grid(3) == [0.5, 0.25, 0.125]
