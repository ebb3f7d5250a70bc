"""Coordinate maps, flow, and their exactness properties."""

import numpy as np
import pytest

from kvnspectral import (
    HamiltonianModel,
    NegativeEnergyError,
    OriginSingularError,
    UnboundedTauError,
    ZeroMomentumError,
    dynamical_time,
    flow,
    inverse_map,
    tau_bounds,
)

SHO = HamiltonianModel.harmonic(m=1.0, omega=1.0)


class TestDynamicalTime:
    def test_positive_p_branch(self):
        tau, energy = dynamical_time(SHO, 0.0, 1.0)
        assert tau == pytest.approx(0.0, abs=1e-15)
        assert energy == pytest.approx(0.5, abs=1e-15)

    def test_fourth_quadrant_adds_half_period(self):
        # q >= 0, p < 0 branch: arctan + pi/omega
        tau, energy = dynamical_time(SHO, 1.0, -1.0)
        assert tau == pytest.approx(3 * np.pi / 4, rel=1e-14)
        assert energy == pytest.approx(1.0, rel=1e-15)

    def test_p_zero_boundary_continues_from_positive_p(self):
        tau, energy = dynamical_time(SHO, 1.0, 0.0)
        assert tau == pytest.approx(np.pi / 2, rel=1e-15)
        assert energy == pytest.approx(0.5, rel=1e-15)
        tau_neg, _ = dynamical_time(SHO, -1.0, 0.0)
        assert tau_neg == pytest.approx(-np.pi / 2, rel=1e-15)

    def test_negative_p_axis_maps_to_upper_boundary(self):
        tau, _ = dynamical_time(SHO, 0.0, -1.0)
        assert tau == pytest.approx(np.pi, rel=1e-15)

    def test_origin_rejected(self):
        with pytest.raises(OriginSingularError):
            dynamical_time(SHO, 0.0, 0.0)

    def test_free_particle(self):
        model = HamiltonianModel.free_particle(m=2.0)
        tau, energy = dynamical_time(model, 3.0, 1.5)
        assert tau == pytest.approx(2.0 * 3.0 / 1.5)
        assert energy == pytest.approx(1.5**2 / 4.0)
        with pytest.raises(ZeroMomentumError):
            dynamical_time(model, 1.0, 0.0)

    def test_linear_potential(self):
        model = HamiltonianModel.linear_potential(m=1.0, force=2.0)
        tau, energy = dynamical_time(model, 1.0, 4.0)
        assert tau == pytest.approx(2.0)
        assert energy == pytest.approx(8.0 - 2.0)


class TestInverseMap:
    def test_zero_tau(self):
        q, p = inverse_map(SHO, 0.0, 0.5)
        assert q == pytest.approx(0.0, abs=1e-15)
        assert p == pytest.approx(1.0, rel=1e-15)

    def test_quarter_period(self):
        q, p = inverse_map(SHO, np.pi / 2, 0.5)
        assert q == pytest.approx(1.0, rel=1e-14)
        assert p == pytest.approx(0.0, abs=1e-15)

    def test_round_trip_of_fourth_quadrant_example(self):
        q, p = inverse_map(SHO, 3 * np.pi / 4, 1.0)
        assert q == pytest.approx(1.0, rel=1e-14)
        assert p == pytest.approx(-1.0, rel=1e-14)

    def test_negative_energy_rejected(self):
        with pytest.raises(NegativeEnergyError):
            inverse_map(SHO, 0.0, -1.0)

    @pytest.mark.parametrize("kind", ["free", "linear"])
    def test_other_kinds_round_trip(self, kind):
        if kind == "free":
            model = HamiltonianModel.free_particle(m=1.3)
            tau, energy = 0.7, 2.1
        else:
            model = HamiltonianModel.linear_potential(m=0.8, force=-1.7)
            tau, energy = -0.4, 1.2
        q, p = inverse_map(model, tau, energy)
        tau2, energy2 = dynamical_time(model, q, p)
        assert tau2 == pytest.approx(tau, rel=1e-12)
        assert energy2 == pytest.approx(energy, rel=1e-12)


class TestFlow:
    def test_quarter_turn(self):
        q, p = flow(SHO, 0.0, 1.0, np.pi / 2)
        assert q == pytest.approx(1.0, rel=1e-14)
        assert p == pytest.approx(0.0, abs=1e-14)

    def test_zero_time_is_identity(self):
        for model in (SHO, HamiltonianModel.free_particle(), HamiltonianModel.linear_potential(force=0.5)):
            q, p = flow(model, 0.3, -0.8, 0.0)
            assert (q, p) == (0.3, -0.8)

    def test_full_period(self):
        q, p = flow(SHO, 0.0, 1.0, 2 * np.pi)
        assert q == pytest.approx(0.0, abs=1e-13)
        assert p == pytest.approx(1.0, rel=1e-13)

    def test_forward_backward_identity(self):
        rng = np.random.default_rng(7)
        q0 = rng.uniform(-2, 2, 100)
        p0 = rng.uniform(-2, 2, 100)
        for model in (
            HamiltonianModel.harmonic(m=1.7, omega=0.9),
            HamiltonianModel.free_particle(m=2.2),
            HamiltonianModel.linear_potential(m=1.1, force=0.6),
        ):
            q1, p1 = flow(model, q0, p0, 1.234)
            q2, p2 = flow(model, q1, p1, -1.234)
            np.testing.assert_allclose(q2, q0, rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(p2, p0, rtol=1e-12, atol=1e-12)


class TestTauBounds:
    def test_scaled_oscillator(self):
        assert tau_bounds(HamiltonianModel.harmonic(omega=2.0)) == pytest.approx(
            (-np.pi / 2, np.pi / 2)
        )

    def test_unit_oscillator(self):
        assert tau_bounds(SHO) == pytest.approx((-np.pi, np.pi))

    def test_free_particle_unbounded(self):
        assert tau_bounds(HamiltonianModel.free_particle()) is None
        with pytest.raises(UnboundedTauError):
            HamiltonianModel.free_particle().mode_spacing()


class TestInvariants:
    def test_round_trip_all_quadrants(self):
        # 1e4 random points through all three arctangent branches
        rng = np.random.default_rng(42)
        model = HamiltonianModel.harmonic(m=1.4, omega=2.3)
        q = rng.uniform(-3, 3, 10_000)
        p = rng.uniform(-3, 3, 10_000)
        keep = ~((q == 0) & (p == 0))
        q, p = q[keep], p[keep]
        tau, energy = dynamical_time(model, q, p)
        lo, hi = tau_bounds(model)
        assert np.all(tau > lo) and np.all(tau <= hi)
        q2, p2 = inverse_map(model, tau, energy)
        scale = np.hypot(q, p)
        np.testing.assert_array_less(np.hypot(q2 - q, p2 - p) / scale, 1e-10)

    def test_measure_preservation_on_random_rectangles(self):
        # the (q,p) area of a mapped (tau,H) rectangle, via a finite-difference
        # Jacobian under Gauss-Legendre quadrature, equals the (tau,H) area
        from numpy.polynomial.legendre import leggauss

        rng = np.random.default_rng(3)
        model = HamiltonianModel.harmonic(m=0.9, omega=1.6)
        x, w = leggauss(24)
        for _ in range(10):
            t0 = rng.uniform(-1.5, 0.5)
            t1 = t0 + rng.uniform(0.1, 1.0)
            h0 = rng.uniform(0.2, 1.0)
            h1 = h0 + rng.uniform(0.1, 2.0)
            tau = 0.5 * (t1 - t0) * x + 0.5 * (t0 + t1)
            en = 0.5 * (h1 - h0) * x + 0.5 * (h0 + h1)
            wt = 0.5 * (t1 - t0) * w
            we = 0.5 * (h1 - h0) * w
            tt, ee = np.meshgrid(tau, en, indexing="ij")
            dt = 1e-6
            dh = 1e-6 * (h0 + h1)
            q_t, p_t = inverse_map(model, tt + dt, ee)
            q_mt, p_mt = inverse_map(model, tt - dt, ee)
            q_h, p_h = inverse_map(model, tt, ee + dh)
            q_mh, p_mh = inverse_map(model, tt, ee - dh)
            jac = ((q_t - q_mt) * (p_h - p_mh) - (q_h - q_mh) * (p_t - p_mt)) / (4 * dt * dh)
            area = (wt @ np.abs(jac)) @ we
            expected = (t1 - t0) * (h1 - h0)
            assert area == pytest.approx(expected, rel=1e-6)

    def test_poisson_bracket_is_one(self):
        # {tau, H} = 1 by central differences away from the branch cut
        rng = np.random.default_rng(11)
        model = HamiltonianModel.harmonic(m=1.2, omega=0.7)
        pts = 0
        while pts < 200:
            q = rng.uniform(-3, 3)
            p = rng.uniform(-3, 3)
            r = np.hypot(model.m * model.omega * q, p)
            if r < 0.5 or abs(np.arctan2(model.m * model.omega * q, p)) > np.pi - 0.1:
                continue  # stay away from the origin and the cut
            pts += 1
            h = 1e-5 * r
            dtau_dq = (
                dynamical_time(model, q + h, p).tau - dynamical_time(model, q - h, p).tau
            ) / (2 * h)
            dtau_dp = (
                dynamical_time(model, q, p + h).tau - dynamical_time(model, q, p - h).tau
            ) / (2 * h)
            bracket = dtau_dq * model.grad_p(p) - model.grad_q(q) * dtau_dp
            assert bracket == pytest.approx(1.0, abs=1e-6)

    def test_flow_advances_tau_by_t(self):
        rng = np.random.default_rng(5)
        model = HamiltonianModel.harmonic(m=1.0, omega=1.3)
        period = 2 * np.pi / model.omega
        q = rng.uniform(-2, 2, 500)
        p = rng.uniform(-2, 2, 500)
        keep = np.hypot(q, p) > 1e-3
        q, p = q[keep], p[keep]
        t = 0.37
        tau0, e0 = dynamical_time(model, q, p)
        q1, p1 = flow(model, q, p, t)
        tau1, e1 = dynamical_time(model, q1, p1)
        shift = (tau1 - tau0 - t) % period
        shift = np.minimum(shift, period - shift)
        np.testing.assert_array_less(shift, 1e-10)
        # energy conservation along the flow
        np.testing.assert_allclose(e1, e0, rtol=1e-12, atol=1e-14)
