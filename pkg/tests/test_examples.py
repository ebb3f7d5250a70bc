"""Worked examples: box state, shifted canonical state, uncertainty products.

Expected values tagged as pinned below were computed ahead of the library
implementation with independent oracles (modified-Bessel reductions for the
shifted-canonical coefficients, method-of-characteristics transport for the
box evolution) and frozen.
"""

import numpy as np
import pytest

from kvnspectral import (
    BoxStateSpec,
    DegenerateStateError,
    HamiltonianModel,
    ShiftedCanonicalSpec,
    SpecOutOfRangeError,
    box_amplitude,
    box_coefficients,
    box_parseval_bound,
    canonical_profile,
    density_error_vs_oracle,
    expand,
    microcanonical_profile,
    oracle_density,
    random_spectral_state,
    shifted_canonical_amplitude,
    shifted_canonical_bound,
    shifted_canonical_coefficients,
    uncertainty_product,
)
from kvnspectral.examples import (
    comparison_grid,
    example_report,
    shifted_canonical_angular_coefficient,
    shifted_canonical_bessel_coefficient,
    shifted_canonical_formula_check,
)
from kvnspectral.spectral import SpectralExpansion

SHO = HamiltonianModel.harmonic()

# pinned pre-build oracle values (independent quadrature, see module docstring)
EX2_COMPLETENESS_PIN = {0.25: 0.968164639488, 1.0: 0.834433665202, 4.0: 0.316064715798}
EX2_BOUND_PIN = {0.25: 1.18428910105333, 1.0: 1.4917424801126962, 4.0: 1.013573609843388}


def spec_for(beta_u, beta=1.0):
    shift = np.sqrt(2.0 * beta_u / (beta * SHO.m * SHO.omega**2))
    return ShiftedCanonicalSpec(beta=beta, shift=shift)


class TestBoxCoefficients:
    def test_full_period_box_is_the_zero_mode(self):
        spec = BoxStateSpec(0.0, 2 * np.pi, 1.0, 0.5)
        ex = box_coefficients(SHO, spec, 8)
        assert ex.coefficient(0) == pytest.approx(1.0, rel=1e-14)
        assert max(abs(ex.coefficient(n)) for n in range(1, 9)) <= 1e-10

    def test_zero_mode_weight(self):
        spec = BoxStateSpec(0.3, np.pi / 2, 1.0, 0.5)
        ex = box_coefficients(SHO, spec, 4)
        assert abs(ex.coefficient(0)) ** 2 == pytest.approx(
            SHO.omega * spec.tau_width / (2 * np.pi), abs=1e-10
        )

    def test_mode_weights_match_derived_form(self):
        spec = BoxStateSpec(-0.7, 1.1, 1.2, 0.4)
        ex = box_coefficients(SHO, spec, 32)
        w, dtau = SHO.omega, spec.tau_width
        for n in range(1, 33):
            expected = 2.0 / (np.pi * w * dtau) * np.sin(n * w * dtau / 2) ** 2 / n**2
            assert abs(ex.coefficient(n)) ** 2 == pytest.approx(expected, abs=1e-14)

    def test_closed_form_matches_quadrature(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            dtau = rng.uniform(0.05, 2 * np.pi)
            tau_c = rng.uniform(-np.pi, np.pi)
            e_width = rng.uniform(0.1, 0.8)
            e_center = rng.uniform(e_width / 2, 2.0 + e_width / 2)
            spec = BoxStateSpec(tau_c, dtau, e_center, e_width)
            closed = box_coefficients(SHO, spec, 64)
            chi = box_amplitude(SHO, spec)
            quad = expand(chi, microcanonical_profile(SHO, e_center, e_width), 64, model=SHO)
            assert np.max(np.abs(closed.coefficients - quad.coefficients)) <= 1e-8

    def test_sum_stays_below_bound(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            dtau = rng.uniform(0.05, 2 * np.pi)
            spec = BoxStateSpec(rng.uniform(-3, 3), dtau, 1.0, 0.5)
            ex = box_coefficients(SHO, spec, 512)
            assert ex.completeness <= box_parseval_bound(SHO, spec)
            # and the expansion really is near-complete
            assert ex.completeness >= 0.99

    def test_out_of_range_specs_rejected(self):
        with pytest.raises(SpecOutOfRangeError):
            BoxStateSpec(0.0, 7.0, 1.0, 0.5).validate(SHO)  # wider than the period
        with pytest.raises(SpecOutOfRangeError):
            BoxStateSpec(0.0, 1.0, 0.1, 0.5).validate(SHO)  # dips below H = 0


class TestShiftedCanonicalCoefficients:
    def test_unshifted_state_is_the_zero_mode(self):
        spec = ShiftedCanonicalSpec(beta=1.0, shift=0.0)
        ex = shifted_canonical_coefficients(SHO, spec, 6)
        assert abs(ex.coefficient(0) - 1.0) <= 1e-10
        assert max(abs(ex.coefficient(n)) for n in range(1, 7)) <= 1e-10

    @pytest.mark.parametrize("beta_u", [0.25, 1.0, 4.0])
    def test_quadrature_matches_bessel_oracle(self, beta_u):
        spec = spec_for(beta_u)
        ex = shifted_canonical_coefficients(SHO, spec, 12)
        for n in range(-12, 13):
            oracle = shifted_canonical_bessel_coefficient(SHO, spec, n)
            assert abs(ex.coefficient(n) - oracle) <= 1e-10

    def test_parity_structure(self):
        # even modes real, odd modes imaginary, within 1e-9
        spec = spec_for(1.0)
        ex = shifted_canonical_coefficients(SHO, spec, 32)
        for n in ex.mode_numbers:
            c = ex.coefficient(int(n))
            if n % 2 == 0:
                assert abs(c.imag) <= 1e-9
            else:
                assert abs(c.real) <= 1e-9

    @pytest.mark.parametrize("beta_u", [0.25, 1.0, 4.0])
    def test_completeness_converges_to_pin_and_respects_bound(self, beta_u):
        spec = spec_for(beta_u)
        ex = shifted_canonical_coefficients(SHO, spec, 24)
        assert ex.completeness == pytest.approx(EX2_COMPLETENESS_PIN[beta_u], abs=1e-8)
        bound = shifted_canonical_bound(SHO, spec)
        assert bound == pytest.approx(EX2_BOUND_PIN[beta_u], rel=1e-12)
        assert ex.completeness <= bound

    def test_transcribed_formulas_flag_even_modes_only(self):
        # the odd-mode and n=0 transcriptions reproduce quadrature; the
        # even-mode ones (n >= 2) miss an oscillatory factor and get flagged
        spec = spec_for(1.0)
        ex = shifted_canonical_coefficients(SHO, spec, 8)
        check = shifted_canonical_formula_check(SHO, spec, ex)
        assert check["max_abs_deviation"] > 1e-6
        assert all(n % 2 == 0 and n != 0 for n in check["flagged_modes"])
        for n in (0, 1, 3, 5, -1, -3):
            ref = shifted_canonical_angular_coefficient(SHO, spec, n)
            assert abs(ref - ex.coefficient(n)) <= 1e-8

    def test_bound_requires_matching_basis_beta(self):
        with pytest.raises(SpecOutOfRangeError):
            shifted_canonical_bound(SHO, ShiftedCanonicalSpec(beta=1.0, shift=1.0, basis_beta=2.0))


class TestGeneralizedParameters:
    """Unit-handling: nothing below may assume m = omega = hbar = 1."""

    MODEL = HamiltonianModel.harmonic(m=2.3, omega=0.7, hbar=3.1)

    def test_box_closed_form_matches_quadrature(self):
        period = 2 * np.pi / self.MODEL.omega
        spec = BoxStateSpec(0.3 * period, 0.4 * period, 1.5, 0.6)
        closed = box_coefficients(self.MODEL, spec, 32)
        chi = box_amplitude(self.MODEL, spec)
        quad = expand(
            chi,
            microcanonical_profile(self.MODEL, spec.energy_center, spec.energy_width),
            32, model=self.MODEL,
        )
        assert np.max(np.abs(closed.coefficients - quad.coefficients)) <= 1e-8

    def test_shifted_quadrature_matches_bessel_oracle(self):
        spec = ShiftedCanonicalSpec(beta=0.8, shift=1.3)
        ex = shifted_canonical_coefficients(self.MODEL, spec, 10)
        for n in range(-10, 11):
            oracle = shifted_canonical_bessel_coefficient(self.MODEL, spec, n)
            assert abs(ex.coefficient(n) - oracle) <= 1e-10

    def test_orthonormality_off_unit_parameters(self):
        from kvnspectral import inner_product, stationary_state

        profile = canonical_profile(self.MODEL, 0.9)
        for m in (-3, 0, 2):
            for n in (-3, 0, 2):
                got = inner_product(
                    stationary_state(self.MODEL, profile, m),
                    stationary_state(self.MODEL, profile, n),
                )
                assert got == pytest.approx(1.0 if m == n else 0.0, abs=1e-14)

    def test_uncertainty_floor_scales_with_hbar(self):
        spec = ShiftedCanonicalSpec(beta=1.0, shift=np.sqrt(2.0 / (self.MODEL.m * self.MODEL.omega**2)))
        ex = shifted_canonical_coefficients(self.MODEL, spec, 16)
        rep = uncertainty_product(ex, self.MODEL)
        assert rep.bound == self.MODEL.hbar / 2
        assert rep.product >= rep.bound - 1e-9

    def test_eigenstate_spread_uses_model_period(self):
        from kvnspectral.spectral import SpectralExpansion

        coeff = np.zeros(5, complex)
        coeff[4] = 1.0
        ex = SpectralExpansion(self.MODEL, canonical_profile(self.MODEL, 1.0), 0.0, coeff)
        rep = uncertainty_product(ex, self.MODEL)
        period = 2 * np.pi / self.MODEL.omega
        assert rep.delta_tau == pytest.approx(period / np.sqrt(12.0), rel=1e-6)


class TestOracleDensity:
    def test_box_at_time_zero_matches_initial(self):
        spec = BoxStateSpec(0.2, np.pi / 2, 1.0, 0.5)
        chi = box_amplitude(SHO, spec)
        rho0 = oracle_density(SHO, spec, 0.0, chi)
        np.testing.assert_allclose(rho0, np.abs(chi.values) ** 2, atol=1e-12)

    def test_box_support_rotates_with_the_flow(self):
        spec = BoxStateSpec(0.0, np.pi / 2, 1.0, 0.5)
        grid = comparison_grid(SHO, spec, n=128)
        t = 1.0
        rho = oracle_density(SHO, spec, t, grid)
        from kvnspectral.grids import grid_tau_energy_fields
        from kvnspectral.examples import box_density

        tau, energy = grid_tau_energy_fields(SHO, grid)
        expected = box_density(SHO, spec, tau - t, energy)
        np.testing.assert_array_equal(rho, expected)

    def test_shifted_state_revives_after_a_period(self):
        spec = spec_for(1.0)
        grid = comparison_grid(SHO, spec, n=64)
        rho0 = oracle_density(SHO, spec, 0.0, grid)
        rho_T = oracle_density(SHO, spec, 2 * np.pi / SHO.omega, grid)
        np.testing.assert_allclose(rho_T, rho0, rtol=1e-12, atol=1e-300)

    def test_mass_is_conserved(self):
        spec = spec_for(1.0)
        chi = shifted_canonical_amplitude(SHO, spec)
        for t in (0.0, 0.7, 2.9):
            rho = oracle_density(SHO, spec, t, chi)
            mass = (chi.axis1.weights @ rho) @ chi.axis2.weights
            assert mass == pytest.approx(1.0, rel=1e-10)


class TestEvolutionConvergence:
    def test_error_vs_oracle_decreases_with_window(self):
        spec = BoxStateSpec(0.0, np.pi / 2, 1.0, 0.5)
        grid = comparison_grid(SHO, spec, n=128)
        errors = []
        for n_max in (16, 32, 64):
            ex = box_coefficients(SHO, spec, n_max)
            errors.append(density_error_vs_oracle(SHO, spec, ex, 1.0, grid))
        assert errors[0] > errors[1] > errors[2]

    def test_shifted_state_error_saturates_at_projection_floor(self):
        # the shared-profile basis spans a proper subspace, so the density
        # error converges to a nonzero floor instead of to zero
        spec = spec_for(1.0)
        grid = comparison_grid(SHO, spec, n=96)
        errs = [
            density_error_vs_oracle(
                SHO, spec, shifted_canonical_coefficients(SHO, spec, n), 1.0, grid
            )
            for n in (8, 16, 24)
        ]
        assert errs[0] >= errs[1] >= errs[2]
        assert errs[2] == pytest.approx(errs[1], rel=1e-6)
        assert errs[2] > 0.5


class TestUncertainty:
    def test_single_eigenstate_spreads(self):
        coeff = np.zeros(7, complex)
        coeff[6] = 1.0  # n = +3
        ex = SpectralExpansion(SHO, canonical_profile(SHO, 1.0), 0.0, coeff)
        report = uncertainty_product(ex, SHO)
        assert report.delta_energy <= 1e-10
        # complete tau ignorance: the full-range uniform spread
        assert report.delta_tau == pytest.approx(2 * np.pi / np.sqrt(12.0), rel=1e-6)

    def test_two_equal_modes_spaced_one_quantum(self):
        coeff = np.zeros(3, complex)
        coeff[1] = coeff[2] = 1.0 / np.sqrt(2)
        ex = SpectralExpansion(SHO, canonical_profile(SHO, 1.0), 0.0, coeff)
        report = uncertainty_product(ex, SHO)
        assert report.delta_energy == pytest.approx(SHO.hbar * SHO.omega / 2, rel=1e-12)
        assert report.product >= SHO.hbar / 2 - 1e-9

    def test_box_state_product(self):
        spec = BoxStateSpec(0.0, np.pi / 2, 1.0, 0.1)
        ex = box_coefficients(SHO, spec, 64)
        report = uncertainty_product(ex, SHO)
        # narrow box: spread close to the uniform width dtau/sqrt(12)
        assert report.delta_tau == pytest.approx(spec.tau_width / np.sqrt(12.0), rel=0.02)
        assert report.product >= SHO.hbar / 2 - 1e-9

    def test_wrapped_box_measures_like_centered_box(self):
        # a box straddling the tau cut: the cut-optimized spread ignores the seam
        spec_mid = BoxStateSpec(0.0, np.pi / 3, 1.0, 0.2)
        spec_cut = BoxStateSpec(np.pi, np.pi / 3, 1.0, 0.2)
        r_mid = uncertainty_product(box_coefficients(SHO, spec_mid, 48), SHO)
        r_cut = uncertainty_product(box_coefficients(SHO, spec_cut, 48), SHO)
        assert r_cut.delta_tau == pytest.approx(r_mid.delta_tau, rel=1e-6)

    def test_grid_state_route_matches_spectral_route(self):
        spec = spec_for(1.0)
        ex = shifted_canonical_coefficients(SHO, spec, 20)
        spectral = uncertainty_product(ex, SHO)
        chi = shifted_canonical_amplitude(SHO, spec, n_tau=512, n_energy=384)
        gridwise = uncertainty_product(chi, SHO)
        # the grid state is the exact initial state, the spectral one its
        # basis projection; widths agree to the projection error
        assert gridwise.delta_tau == pytest.approx(spectral.delta_tau, rel=0.05)
        assert gridwise.product >= SHO.hbar / 2 - 1e-9

    def test_random_family_respects_the_floor(self):
        rng = np.random.default_rng(0)
        products = []
        for _ in range(50):
            state = random_spectral_state(SHO, rng)
            products.append(uncertainty_product(state, SHO).product)
        assert min(products) >= SHO.hbar / 2 - 1e-9

    def test_empty_state_rejected(self):
        ex = SpectralExpansion(SHO, canonical_profile(SHO, 1.0), 0.0, np.zeros(5, complex))
        with pytest.raises(DegenerateStateError):
            uncertainty_product(ex, SHO)


class TestExampleReport:
    def test_report_shape_for_shifted_state(self):
        spec = spec_for(1.0)
        ex = shifted_canonical_coefficients(SHO, spec, 16)
        report = example_report(SHO, spec, ex, times=(0.0, 1.0), grid_nodes=96)
        assert report["spec"]["kind"] == "shifted-canonical"
        assert report["N"] == 16
        assert report["bound_satisfied"] is True
        assert [e["t"] for e in report["l2_error_vs_oracle"]] == [0.0, 1.0]
        assert report["uncertainty"]["product"] >= 0.5 - 1e-9
        assert report["formula_check"]["flagged_modes"]

    def test_report_shape_for_box(self):
        spec = BoxStateSpec(0.0, np.pi / 2, 1.0, 0.5)
        ex = box_coefficients(SHO, spec, 32)
        report = example_report(SHO, spec, ex, times=(0.5,), grid_nodes=96)
        assert report["spec"]["kind"] == "box"
        assert report["bound_rhs"] == pytest.approx(box_parseval_bound(SHO, spec))
        assert report["l2_error_vs_oracle"][0]["err"] < 0.5
