import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from griffith_lab.errors import AmbiguousPoint, DomainMismatch, OutOfDomain
from griffith_lab.piecewise import (
    Field2D,
    PiecewiseFn1D,
    jump_set,
    measure_convergence_gap,
    symmetric_gradient,
)


def step01(at=0.5, left=0.0, right=1.0):
    return PiecewiseFn1D.step((0.0, 1.0), at, left, right)


def test_eval_constant_identity_and_step():
    const = PiecewiseFn1D.constant((0.0, 1.0), 3.5)
    assert const.eval(0.123) == pytest.approx(3.5)
    ident = PiecewiseFn1D((0.0, 1.0), (), ((np.array([0.0, 1.0]),),))
    assert ident.eval(0.25) == pytest.approx(0.25)
    assert step01().eval(0.75) == pytest.approx(1.0)


def test_eval_errors():
    u = step01()
    with pytest.raises(OutOfDomain):
        u.eval(1.5)
    with pytest.raises(AmbiguousPoint):
        u.eval(0.5)


def test_invalid_constructions():
    with pytest.raises(ValueError):
        PiecewiseFn1D((0, 1), (0.0,), ((np.array([0.0]),), (np.array([1.0]),)))
    with pytest.raises(ValueError):
        PiecewiseFn1D((0, 1), (0.7, 0.3), tuple((np.array([0.0]),) for _ in range(3)))
    with pytest.raises(ValueError):
        PiecewiseFn1D((0, 1), (), ((np.array([np.inf]),),))


def test_jump_set_smooth_is_empty():
    u = PiecewiseFn1D.affine((0, 1), 0.0, 2.0)
    assert jump_set(u) == []


def test_jump_set_single_step():
    records = jump_set(step01())
    assert len(records) == 1
    rec = records[0]
    assert rec.location == 0.5
    assert rec.trace_minus == pytest.approx([0.0])
    assert rec.trace_plus == pytest.approx([1.0])
    assert rec.normal == 1.0
    assert rec.amplitude == pytest.approx(1.0)


def test_jump_set_filters_artificial_nodes():
    u = PiecewiseFn1D(
        (0, 1), (0.5,), ((np.array([1.0]),), (np.array([1.0 + 1e-12]),))
    )
    assert jump_set(u) == []


def test_trace_consistency():
    u = PiecewiseFn1D(
        (0.0, 1.0),
        (0.4,),
        ((np.array([0.0, 1.0]),), (np.array([2.0, -1.0]),)),
    )
    left, right = u.trace_pair(0)
    assert left == pytest.approx([0.4], abs=1e-12)
    assert right == pytest.approx([1.6], abs=1e-12)
    rec = jump_set(u)[0]
    assert rec.trace_minus == pytest.approx(left, abs=1e-12)
    assert rec.trace_plus == pytest.approx(right, abs=1e-12)


def test_field2d_jump_records_constant_traces():
    field = Field2D(
        rect=(0, 1, 0, 1),
        chord=((0.5, 0.0), (0.5, 1.0)),
        normal=(1.0, 0.0),
        A_minus=np.zeros((2, 2)),
        b_minus=(0.0, 0.0),
        A_plus=np.zeros((2, 2)),
        b_plus=(1.0, 0.0),
    )
    recs = jump_set(field)
    assert len(recs) == 1
    assert recs[0].trace_minus == pytest.approx([0.0, 0.0])
    assert recs[0].trace_plus == pytest.approx([1.0, 0.0])
    assert recs[0].normal == pytest.approx([1.0, 0.0])


def test_symmetric_gradient_1d():
    u = PiecewiseFn1D((0, 1), (), ((np.array([0.0, 3.0]),),))
    assert symmetric_gradient(u, 0.3) == pytest.approx(3.0)


def test_symmetric_gradient_2d_symmetrizes():
    field = Field2D(
        rect=(0, 1, 0, 1),
        chord=((0.5, 0.0), (0.5, 1.0)),
        normal=(1.0, 0.0),
        A_minus=np.array([[0.0, 1.0], [0.0, 0.0]]),
        b_minus=(0.0, 0.0),
        A_plus=np.array([[0.0, 1.0], [-1.0, 0.0]]),
        b_plus=(0.0, 0.0),
    )
    e_minus = symmetric_gradient(field, (0.2, 0.5))
    assert e_minus == pytest.approx(np.array([[0.0, 0.5], [0.5, 0.0]]))
    assert np.array_equal(e_minus, e_minus.T)
    # rigid rotation on the plus side kills e(u)
    assert symmetric_gradient(field, (0.8, 0.5)) == pytest.approx(np.zeros((2, 2)))
    with pytest.raises(AmbiguousPoint):
        symmetric_gradient(field, (0.5, 0.5))


def test_measure_gap_identical_and_constant():
    u = step01()
    assert measure_convergence_gap(u, u, 0.1) == 0.0
    zero = PiecewiseFn1D.constant((0, 1), 0.0)
    one = PiecewiseFn1D.constant((0, 1), 1.0)
    assert measure_convergence_gap(zero, one, 0.5) == pytest.approx(1.0)


def test_measure_gap_exact_interval_length():
    zero = PiecewiseFn1D.constant((0, 1), 0.0)
    for n in (4, 10, 64):
        v = PiecewiseFn1D(
            (0, 1),
            (0.5, 0.5 + 1.0 / n),
            ((np.array([0.0]),), (np.array([1.0]),), (np.array([0.0]),)),
        )
        assert measure_convergence_gap(zero, v, 0.5) == pytest.approx(1.0 / n, abs=1e-12)


def test_measure_gap_domain_mismatch():
    u = PiecewiseFn1D.constant((0, 1), 0.0)
    v = PiecewiseFn1D.constant((0, 2), 0.0)
    with pytest.raises(DomainMismatch):
        measure_convergence_gap(u, v, 0.1)


@settings(max_examples=40, deadline=None)
@given(
    delta=st.floats(min_value=0.01, max_value=2.0),
    slope=st.floats(min_value=-3.0, max_value=3.0),
    offset=st.floats(min_value=-2.0, max_value=2.0),
)
def test_measure_gap_symmetric_and_monotone(delta, slope, offset):
    u = PiecewiseFn1D((0, 1), (), ((np.array([offset, slope]),),))
    v = step01()
    g_uv = measure_convergence_gap(u, v, delta)
    g_vu = measure_convergence_gap(v, u, delta)
    assert g_uv == pytest.approx(g_vu, abs=1e-12)
    assert measure_convergence_gap(u, v, 2 * delta) <= g_uv + 1e-12
