import math

import numpy as np
import pytest

from griffith_lab.errors import InvalidParams, MissingEvaluator
from griffith_lab.integrands import (
    Amplitude,
    BoundaryPenalty,
    EnergySpec,
    GammaForm,
    SamplingBox,
    bilinear_field,
    capped_weight_tanh_field,
    eval_energy,
    identity_field_2d,
    make_catalog_integrand,
    p_power_bulk,
    sup_family_integrand,
    surface_energy,
    swap_field_2d,
    validate_conditions,
    zero_field,
)
from griffith_lab.piecewise import PiecewiseFn1D
from griffith_lab.quadrature import QuadratureSpec

QUAD = QuadratureSpec()
UNIT = (0.0, 1.0)


def simple_spec(phi, Psi=lambda s: 0.0 * s, boundary=None):
    return EnergySpec(
        W=p_power_bulk(1.0, 2.0), p=2.0, c_W=1.0, phi=phi, Psi=Psi,
        domain=UNIT, boundary=boundary,
    )


def kappa0(value):
    return make_catalog_integrand(
        "amp_times_kappa_xi", a=Amplitude.constant(UNIT, value), scale=1.0
    )


class TestEvalEnergy:
    def test_zero_function_all_parts_vanish(self):
        spec = simple_spec(kappa0(1.0), Psi=lambda s: np.asarray(s) ** 2)
        u = PiecewiseFn1D.constant(UNIT, 0.0)
        ledger = eval_energy(spec, u, QUAD)
        assert ledger.to_record() == {
            "bulk": 0.0, "surface": 0.0, "confinement": 0.0, "boundary": 0.0, "total": 0.0,
        }

    def test_affine_ramp_bulk_only(self):
        spec = simple_spec(kappa0(1.0))
        u = PiecewiseFn1D.affine(UNIT, 0.0, 0.5)
        ledger = eval_energy(spec, u, QUAD)
        assert ledger.bulk == pytest.approx(0.25, abs=1e-12)
        assert ledger.surface == 0.0

    def test_step_surface_only(self):
        spec = simple_spec(kappa0(0.1))
        u = PiecewiseFn1D.step(UNIT, 0.5, 0.0, 0.5)
        ledger = eval_energy(spec, u, QUAD)
        assert ledger.bulk == 0.0
        assert ledger.surface == pytest.approx(0.1, abs=1e-14)

    def test_total_is_exact_sum(self):
        spec = simple_spec(
            kappa0(0.3),
            Psi=lambda s: np.asarray(s) ** 2,
            boundary=BoundaryPenalty(0.0, 1.0, beta=2.0),
        )
        u = PiecewiseFn1D.step(UNIT, 0.5, 0.0, 1.0)
        ledger = eval_energy(spec, u, QUAD)
        assert ledger.total == ledger.bulk + ledger.surface + ledger.confinement + ledger.boundary
        assert ledger.confinement == pytest.approx(0.5, abs=1e-12)
        assert ledger.boundary == 0.0


class TestCatalog:
    def test_model_case_vanishes_on_equal_traces(self):
        phi = make_catalog_integrand("model_case", field=capped_weight_tanh_field())
        assert phi(0.3, 0.7, 0.7, 1.0) == 0.0
        assert phi.na_sjc

    def test_amp_times_gamma_example(self):
        phi = make_catalog_integrand(
            "amp_times_gamma",
            a=Amplitude.constant(UNIT, 1.0),
            gamma=GammaForm("linear", slope=1.0),
        )
        assert phi(0.2, 1.0, 0.0, 1.0) == pytest.approx(1.0)
        assert phi(0.2, 1.0, 0.0, -2.0) == pytest.approx(2.0)

    def test_amp_times_kappa_xi_unit_vector(self):
        phi = make_catalog_integrand(
            "amp_times_kappa_xi", a=Amplitude.constant(UNIT, 2.0), scale=1.0, dim=2
        )
        assert phi(0.1, np.array([1.0, 0.0]), np.array([0.0, 0.0]), np.array([0.6, 0.8])) == pytest.approx(2.0)

    def test_kappa_x_xi_weight(self):
        phi = make_catalog_integrand("kappa_x_xi", weight=[1.0, 0.0, 1.0])
        assert phi(0.5, 1.0, 0.0, 1.0) == pytest.approx(1.25)
        assert phi.strictly_positive_c == pytest.approx(1.0)

    def test_superadditive_gamma_rejected_for_catalog_kind(self):
        theta = GammaForm("two_slope", slope=1.0, s0=1.0, slope2=2.0)
        assert not theta.is_subadditive()
        with pytest.raises(InvalidParams):
            make_catalog_integrand("amp_times_gamma", a=Amplitude.constant(UNIT, 1.0), gamma=theta)
        phi = make_catalog_integrand("custom_theta", theta=theta)
        assert phi(0.0, 2.0, 0.0, 1.0) == pytest.approx(3.0)
        assert not phi.bv_sjc

    def test_catalog_non_negative_on_random_grid(self):
        rng = np.random.default_rng(42)
        members = [
            make_catalog_integrand("model_case", field=capped_weight_tanh_field()),
            make_catalog_integrand(
                "amp_times_gamma",
                a=Amplitude.poly(UNIT, [1.0, 0.5]),
                gamma=GammaForm("capped", slope=1.0, cap=1.0),
            ),
            make_catalog_integrand("kappa_x_xi", weight=[1.0, 0.0, 1.0]),
            make_catalog_integrand(
                "ortho_sup",
                a=Amplitude.constant(UNIT, 1.0),
                thetas=[GammaForm("capped", slope=2.0, cap=1.0)],
            ),
            kappa0(0.25),
        ]
        samples = rng.uniform(-3, 3, size=(10_000, 3))
        xs = rng.uniform(0, 1, size=10_000)
        for phi in members:
            vals = np.array(
                [phi(x, r, t, xi) for x, (r, t, xi) in zip(xs, samples)]
            )
            assert np.all(vals >= 0.0)

    def test_model_case_swap_symmetry(self):
        phi = make_catalog_integrand("model_case", field=capped_weight_tanh_field())
        rng = np.random.default_rng(7)
        for x, r, t, xi in rng.uniform(-2, 2, size=(200, 4)):
            x = abs(x) / 2
            assert phi(x, r, t, xi) == pytest.approx(phi(x, t, r, -xi), abs=1e-14)

    def test_sup_family_monotone_in_family_size(self):
        f1 = capped_weight_tanh_field()
        small = sup_family_integrand([f1])
        large = sup_family_integrand([f1, bilinear_field()])
        for (x, r, t, xi) in [(0.5, 1.0, 0.0, 1.0), (0.2, -1.0, 2.0, -1.0)]:
            assert large(x, r, t, xi) >= small(x, r, t, xi) - 1e-15


class TestValidateConditions:
    BOX = SamplingBox(0.0, 1.0, 0.0, 1.0)

    def test_bilinear_with_analytic_potential_passes_g6(self):
        report = validate_conditions(bilinear_field(), self.BOX)
        g6 = report.check("G6")
        assert g6.passed
        assert g6.witness <= 1e-10

    def test_swap_field_fails_g6_with_witness_one(self):
        box = SamplingBox((0.0, 0.0), (1.0, 1.0), (0.0, 0.0), (1.0, 1.0))
        report = validate_conditions(swap_field_2d(), box, grid_sizes=8)
        g6 = report.check("G6")
        assert not g6.passed
        assert g6.witness == pytest.approx(1.0)

    def test_zero_field_passes_everything(self):
        report = validate_conditions(zero_field(1), self.BOX)
        assert report.all_passed

    def test_identity_2d_passes(self):
        box = SamplingBox((0.0, 0.0), (1.0, 1.0), (-1.0, -1.0), (1.0, 1.0))
        report = validate_conditions(identity_field_2d(), box, grid_sizes=8)
        assert report.all_passed

    def test_missing_potential_raises(self):
        field = bilinear_field()
        stripped = type(field)(
            dim=1, g=field.g, grad_x=field.grad_x, grad_r=field.grad_r,
            div_x=field.div_x, potential=None, h1=field.h1, h2=field.h2,
            omega=field.omega, omega_tilde=field.omega_tilde,
            conditions=frozenset({"G6"}), name="no_potential",
        )
        with pytest.raises(MissingEvaluator):
            validate_conditions(stripped, self.BOX)

    def test_conservative_fields_have_symmetric_grad_r(self):
        box = SamplingBox((0.0, 0.0), (1.0, 1.0), (-1.0, -1.0), (1.0, 1.0))
        for field in (identity_field_2d(), zero_field(2)):
            if "G6" not in field.conditions:
                continue
            report = validate_conditions(field, box, grid_sizes=8)
            assert report.check("G6").passed


def test_surface_energy_uses_upper_lower_traces():
    # model case with increasing g: jump upward must cost, downward must not
    phi = make_catalog_integrand("model_case", field=capped_weight_tanh_field())
    up = PiecewiseFn1D.step(UNIT, 0.5, 0.0, 1.0)
    down = PiecewiseFn1D.step(UNIT, 0.5, 1.0, 0.0)
    assert surface_energy(phi, up) > 0.0
    assert surface_energy(phi, down) == 0.0
