import math

import numpy as np
import pytest

from griffith_lab.errors import NonFiniteIntegrand
from griffith_lab.piecewise import Field2D
from griffith_lab.quadrature import (
    QuadratureSpec,
    integrate_interval,
    integrate_interval_split,
    integrate_jump_segment,
    integrate_polygon,
    integrate_rectangle_split,
)

SPEC = QuadratureSpec()


def unit_square_field(A_minus=((0, 0), (0, 0)), b_minus=(0, 0), A_plus=((0, 0), (0, 0)), b_plus=(1, 0)):
    return Field2D(
        rect=(0.0, 1.0, 0.0, 1.0),
        chord=((0.5, 0.0), (0.5, 1.0)),
        normal=(1.0, 0.0),
        A_minus=A_minus,
        b_minus=b_minus,
        A_plus=A_plus,
        b_plus=b_plus,
    )


def test_zero_integrand():
    assert integrate_interval(lambda x: 0.0 * x, 0.0, 1.0, SPEC) == 0.0


def test_polynomial_exactness_examples():
    # antiderivative x^2/2 - 2x^3/3 on (0.5, 1)
    val = integrate_interval(lambda x: x * (1 - 2 * x), 0.5, 1.0, SPEC)
    assert val == pytest.approx(-5.0 / 24.0, abs=1e-13)
    val = integrate_interval(lambda x: x * (1 - x), 0.5, 1.0, SPEC)
    assert val == pytest.approx(1.0 / 12.0, abs=1e-13)


@pytest.mark.parametrize("degree", range(0, 16))
def test_polynomial_exactness_up_to_rule_order(degree):
    coeffs = np.zeros(degree + 1)
    coeffs[degree] = 1.0
    exact = (2.0 ** (degree + 1) - 1.0) / (degree + 1)
    val = integrate_interval(lambda x: x**degree, 1.0, 2.0, SPEC)
    assert val == pytest.approx(exact, abs=1e-13 * max(1.0, abs(exact)))


def test_additivity():
    f = lambda x: np.exp(x) * np.sin(3 * x)
    whole = integrate_interval(f, 0.0, 2.0, SPEC)
    parts = integrate_interval(f, 0.0, 0.7, SPEC) + integrate_interval(f, 0.7, 2.0, SPEC)
    assert whole == pytest.approx(parts, abs=1e-12)


def test_refinement_reduces_error_by_factor_four():
    f = np.exp
    exact = math.e - 1.0
    coarse = QuadratureSpec(n_gauss=2, n_panels=1)
    errors = []
    for k in range(4):
        spec = QuadratureSpec(n_gauss=2, n_panels=2**k)
        errors.append(abs(integrate_interval(f, 0.0, 1.0, spec) - exact))
    for e0, e1 in zip(errors[:-1], errors[1:]):
        if e1 < 1e-14:
            break
        assert e1 <= e0 / 4.0


def test_non_finite_integrand_raises():
    with pytest.raises(NonFiniteIntegrand):
        integrate_interval(lambda x: np.where(x > 0.5, np.inf, 1.0), 0.0, 1.0, SPEC)
    with pytest.raises(ValueError):
        integrate_interval(lambda x: x, 1.0, 0.0, SPEC)


def test_interval_split_handles_kinks_exactly():
    val = integrate_interval_split(np.abs, -1.0, 1.0, SPEC, cuts=[0.0])
    assert val == pytest.approx(1.0, abs=1e-14)


def test_rectangle_area_and_half_area():
    field = unit_square_field()
    assert integrate_rectangle_split(lambda x, y: np.ones_like(x), field, SPEC) == pytest.approx(1.0, abs=1e-12)
    right_half = lambda x, y: np.where(x > 0.5, 1.0, 0.0)
    assert integrate_rectangle_split(right_half, field, SPEC) == pytest.approx(0.5, abs=1e-12)


def test_rectangle_split_partial_derivative_example():
    # f = d/dx1 of x1(1-x1)x2(1-x2), integrated over {x1 > 0.5}
    f = lambda x, y: np.where(x > 0.5, (1 - 2 * x) * y * (1 - y), 0.0)
    field = unit_square_field()
    assert integrate_rectangle_split(f, field, SPEC) == pytest.approx(-1.0 / 24.0, abs=1e-12)


def test_polygon_triangle_area():
    tri = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    assert integrate_polygon(lambda x, y: np.ones_like(x), tri, SPEC) == pytest.approx(0.5, abs=1e-13)


def test_jump_segment_counting_measure():
    assert integrate_jump_segment(lambda x: 1.0, [0.3, 0.7], SPEC) == 2.0
    assert integrate_jump_segment(lambda x: 1.0, [], SPEC) == 0.0


def test_jump_segment_line_integral():
    chord = (np.array([0.5, 0.0]), np.array([0.5, 1.0]))
    f = lambda p: 0.25 * p[1] * (1 - p[1])
    assert integrate_jump_segment(f, chord, SPEC) == pytest.approx(1.0 / 24.0, abs=1e-13)
