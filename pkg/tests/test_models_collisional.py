import numpy as np
import pytest
from numpy.testing import assert_allclose

from decoherence.core import Grid1D
from decoherence.lindblad import IntegratorConfig, evolve
from decoherence.models import (
    CollisionalParams,
    collisional_decoherence_time,
    collisional_evolve_split_step,
    collisional_generator,
    decoherence_dissipation_ratio,
    effective_cross_section,
    hard_sphere_amplitude_sq,
    interference_pattern,
    scattering_constant,
)


class TestLongWavelength:
    def test_off_diagonal_ratio_matches_exponential_law(self):
        # H = 0: every pair decays as exp(-Lambda (x - x')^2 t)
        grid = Grid1D(64, -2.0, 2.0)
        params = CollisionalParams(Lambda=1.0)
        psi0 = grid.gaussian_packet(0.0, 1.0)
        gen = collisional_generator(params, grid, include_free_dynamics=False)
        t = 0.25
        res = evolve(gen, psi0.density(),
                     IntegratorConfig(dt=1e-3, t_final=t, record_stride=250),
                     check_positivity=False)
        ratio = res.final().matrix / psi0.density().matrix
        expected = np.exp(-params.Lambda * np.subtract.outer(grid.x, grid.x) ** 2 * t)
        assert np.max(np.abs(ratio - expected)) < 1e-6

    def test_single_separation_headline_value(self):
        # Lambda = 1, dx = 2, t = 0.25 -> suppression e^-1
        # (33 points over [-2, 2] puts grid points exactly at +/- 1)
        grid = Grid1D(33, -2.0, 2.0)
        gen = collisional_generator(CollisionalParams(Lambda=1.0), grid,
                                    include_free_dynamics=False)
        psi0 = grid.gaussian_packet(0.0, 1.2)
        res = evolve(gen, psi0.density(),
                     IntegratorConfig(dt=1e-3, t_final=0.25, record_stride=250),
                     check_positivity=False)
        i = int(np.argmin(np.abs(grid.x - 1.0)))
        j = int(np.argmin(np.abs(grid.x + 1.0)))
        assert grid.x[i] == pytest.approx(1.0) and grid.x[j] == pytest.approx(-1.0)
        ratio = abs(res.final().matrix[i, j] / psi0.density().matrix[i, j])
        assert ratio == pytest.approx(np.exp(-1.0), rel=1e-6)

    def test_diagonal_is_untouched(self):
        grid = Grid1D(32, -2.0, 2.0)
        gen = collisional_generator(CollisionalParams(Lambda=2.0), grid,
                                    include_free_dynamics=False)
        psi0 = grid.two_packet_cat(1.0, 0.4)
        res = evolve(gen, psi0.density(),
                     IntegratorConfig(dt=1e-3, t_final=0.5, record_stride=500),
                     check_positivity=False)
        assert_allclose(np.diag(res.final().matrix), np.diag(psi0.density().matrix),
                        atol=1e-10)


class TestGridResolutionGuard:
    def test_coarse_grid_rejected_when_packet_width_given(self):
        grid = Grid1D(16, -8.0, 8.0)  # dx ~ 1.07
        with pytest.raises(ValueError, match="coarse"):
            collisional_generator(CollisionalParams(Lambda=1.0), grid,
                                  packet_width=0.5)

    def test_resolved_packet_accepted(self):
        grid = Grid1D(256, -8.0, 8.0)  # dx ~ 0.063: 9.6 points across 0.6
        gen = collisional_generator(CollisionalParams(Lambda=1.0), grid,
                                    packet_width=0.6)
        assert gen.dim == 256


class TestShortWavelength:
    def test_flat_rate_decay_independent_of_separation(self):
        grid = Grid1D(24, -1.5, 1.5)
        g_tot = 3.0
        params = CollisionalParams(Gamma_tot=g_tot, regime="short_wavelength")
        gen = collisional_generator(params, grid, include_free_dynamics=False)
        psi0 = grid.gaussian_packet(0.0, 0.8)
        t = 0.4
        res = evolve(gen, psi0.density(),
                     IntegratorConfig(dt=2e-3, t_final=t, record_stride=200),
                     check_positivity=False)
        rho0 = psi0.density().matrix
        rho_t = res.final().matrix
        off = ~np.eye(grid.n_points, dtype=bool)
        ratios = np.abs(rho_t[off] / rho0[off])
        assert np.max(np.abs(ratios - np.exp(-g_tot * t))) < 1e-6
        assert_allclose(np.diag(rho_t), np.diag(rho0), atol=1e-10)


class TestSplitStep:
    def test_matches_rk4_with_free_dynamics(self):
        # independent-route check: spectral split-step against dense RK4
        grid = Grid1D(48, -6.0, 6.0)
        params = CollisionalParams(Lambda=0.4, mass=2.0)
        psi0 = grid.two_packet_cat(1.5, 0.5)
        t, n_steps, dt = 0.5, 500, 1e-3
        times, mats = collisional_evolve_split_step(params, grid, psi0, dt, n_steps)
        gen = collisional_generator(params, grid, include_free_dynamics=True)
        res = evolve(gen, psi0.density(),
                     IntegratorConfig(dt=dt, t_final=t, record_stride=n_steps),
                     check_positivity=False)
        assert np.max(np.abs(mats[-1] - res.final().matrix)) < 5e-6

    def test_decay_only_mode_is_exact(self):
        grid = Grid1D(32, -2.0, 2.0)
        params = CollisionalParams(Lambda=1.3)
        psi0 = grid.gaussian_packet(0.0, 0.9)
        _, mats = collisional_evolve_split_step(params, grid, psi0, 0.05, 10,
                                                include_free_dynamics=False)
        expected = psi0.density().matrix * np.exp(
            -params.Lambda * np.subtract.outer(grid.x, grid.x) ** 2 * 0.5)
        assert np.max(np.abs(mats[-1] - expected)) < 1e-12


class TestDecoherenceTime:
    def test_unit_values(self):
        assert collisional_decoherence_time(1.0, 1.0) == 1.0

    def test_doubling_separation_quarters_the_time(self):
        assert collisional_decoherence_time(2.0, 2.0) == \
            pytest.approx(collisional_decoherence_time(2.0, 1.0) / 4.0)

    def test_magnitude_arithmetic(self):
        # Lambda = 1e19 1/(m^2 s) over dx = 10 nm -> millisecond scale
        assert collisional_decoherence_time(1e19, 1e-8) == pytest.approx(1e-3)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            collisional_decoherence_time(0.0, 1.0)


class TestDecoherenceDissipationRatio:
    def test_gram_object_at_room_temperature(self):
        # 1 g, 300 K, 1 cm separation: ratio ~ 1e40
        ratio = decoherence_dissipation_ratio(1e-3, 300.0, 1e-2)
        assert 1e39 < ratio < 1e41

    def test_separation_equal_to_thermal_wavelength(self):
        from decoherence.constants import thermal_de_broglie_wavelength
        lam = thermal_de_broglie_wavelength(1e-3, 300.0)
        assert decoherence_dissipation_ratio(1e-3, 300.0, lam) == pytest.approx(1.0)

    def test_linear_scaling_in_mass_and_temperature(self):
        base = decoherence_dissipation_ratio(1e-3, 300.0, 1e-2)
        assert decoherence_dissipation_ratio(2e-3, 300.0, 1e-2) == \
            pytest.approx(2.0 * base, rel=1e-12)
        assert decoherence_dissipation_ratio(1e-3, 600.0, 1e-2) == \
            pytest.approx(2.0 * base, rel=1e-12)


class TestScatteringQuadratures:
    def test_hard_sphere_effective_cross_section(self):
        # (2 pi / 3) * (R^2/4) * int_-1^1 (1 - c) dc = pi R^2 / 3
        r = 2.0
        got = effective_cross_section(hard_sphere_amplitude_sq(r), q=1.0)
        assert got == pytest.approx(np.pi * r * r / 3.0, rel=1e-10)

    def test_scattering_constant_monochromatic_window(self):
        # density and speed constant over q in [0, 1]: Lambda reduces to
        # sigma_eff * integral of q^2 = sigma_eff / 3
        r = 1.0
        sigma = np.pi * r * r / 3.0
        lam = scattering_constant(lambda q: 1.0, lambda q: 1.0,
                                  hard_sphere_amplitude_sq(r), q_max=1.0)
        assert lam == pytest.approx(sigma / 3.0, rel=1e-8)


class TestInterferencePattern:
    def grid_and_packets(self):
        # box wide enough that the fat envelope has fully decayed at the
        # edges; the envelope stays nearly unmodulated over a central fringe
        grid = Grid1D(8192, -40.0, 40.0)
        psi1 = grid.gaussian_packet(0.0, 6.0, k0=+4.0)
        psi2 = grid.gaussian_packet(0.0, 6.0, k0=-4.0)
        return grid, psi1, psi2

    @staticmethod
    def visibility(p):
        return (np.max(p) - np.min(p)) / (np.max(p) + np.min(p))

    def test_full_overlap_gives_full_fringes(self):
        grid, psi1, psi2 = self.grid_and_packets()
        a = 1 / np.sqrt(2)
        p = interference_pattern(a, a, psi1, psi2, 1.0, grid.dx)
        assert np.sum(p) * grid.dx == pytest.approx(1.0, abs=1e-9)
        assert np.min(p) / np.max(p) < 1e-3  # nulls down to sampling limits

    def test_zero_overlap_kills_the_cross_term(self):
        grid, psi1, psi2 = self.grid_and_packets()
        a = 1 / np.sqrt(2)
        p = interference_pattern(a, a, psi1, psi2, 0.0, grid.dx)
        classical = 0.5 * (np.abs(psi1.amplitudes) ** 2
                           + np.abs(psi2.amplitudes) ** 2) / grid.dx
        assert_allclose(p, classical, atol=1e-12)

    def test_half_overlap_halves_the_visibility(self):
        grid, psi1, psi2 = self.grid_and_packets()
        a = 1 / np.sqrt(2)
        # one full fringe period around the envelope peak (|x| <= 0.4 for
        # relative wavenumber 8), where the envelope varies by < 0.3%
        center = np.abs(grid.x) <= 0.4
        v_full = self.visibility(
            interference_pattern(a, a, psi1, psi2, 1.0, grid.dx)[center])
        v_half = self.visibility(
            interference_pattern(a, a, psi1, psi2, 0.5, grid.dx)[center])
        assert v_full == pytest.approx(1.0, abs=0.01)
        assert v_half == pytest.approx(0.5 * v_full, rel=0.02)

    def test_rejects_bad_weights(self):
        grid, psi1, psi2 = self.grid_and_packets()
        with pytest.raises(ValueError):
            interference_pattern(1.0, 1.0, psi1, psi2, 1.0, grid.dx)
        with pytest.raises(ValueError):
            interference_pattern(1 / np.sqrt(2), 1 / np.sqrt(2), psi1, psi2,
                                 1.5, grid.dx)
