import numpy as np
import pytest
from numpy.testing import assert_allclose

from decoherence.core import FockSpace, Grid1D, Operator
from decoherence.lindblad import ExtraTerm, LindbladGenerator, apply_generator
from decoherence.models import (
    QBMParams,
    caldeira_leggett_generator,
    qbm_coefficients,
    qbm_generator,
    qbm_moment_matrix,
    qbm_position_variance,
)
from decoherence.models.qbm import localization_rate

from conftest import random_density

HIGH_T = QBMParams(mass=1.0, Omega=1.0, gamma0=0.1, T=1e6, cutoff=1e3)


@pytest.fixture(scope="module")
def high_t_coefficients():
    return qbm_coefficients(HIGH_T)


def fock_xp(n=24):
    space = FockSpace(n)
    a = space.annihilation().matrix
    x = Operator((a + a.conj().T) / np.sqrt(2.0))
    p = Operator(1j * (a.conj().T - a) / np.sqrt(2.0))
    return x, p


def build_fock_generator(mass, omega_sq, gamma, D, f, n=24):
    """Oscillator-basis generator with explicit coefficients (test double)."""
    x, p = fock_xp(n)
    h = Operator(p.matrix @ p.matrix / (2.0 * mass)
                 + 0.5 * mass * omega_sq * x.matrix @ x.matrix)
    extra = [ExtraTerm("comm_anticomm", x, p, -1j * gamma, label="damping"),
             ExtraTerm("double_comm", x, p, -f, label="anomalous")]
    return LindbladGenerator(h, [(2.0 * D, x)], extra_terms=extra), x, p


class TestCoefficients:
    def test_high_temperature_limit_of_d(self, high_t_coefficients):
        want = 2.0 * HIGH_T.mass * HIGH_T.gamma0 * HIGH_T.T
        assert high_t_coefficients.D == pytest.approx(want, rel=0.02)

    def test_frequency_shift_is_negative_and_cutoff_dominated(self, high_t_coefficients):
        # -(2/M) int eta cos(Omega t) ~ -2 gamma0 Lambda for Lambda >> Omega
        want = -2.0 * HIGH_T.gamma0 * HIGH_T.cutoff
        assert high_t_coefficients.omega_shift_sq == pytest.approx(want, rel=0.01)

    def test_high_temperature_flag(self):
        assert HIGH_T.is_high_temperature()
        assert not QBMParams(1.0, 1.0, 0.1, 5.0, 1e3).is_high_temperature()


class TestGeneratorStructure:
    def test_grid_generator_terms(self, high_t_coefficients):
        grid = Grid1D(16, -3.0, 3.0)
        gen = qbm_generator(HIGH_T, grid, coefficients=high_t_coefficients)
        labels = sorted(t.label for t in gen.extra_terms)
        assert labels == ["anomalous", "damping"]
        assert gen.lindblad_ops[0][0] == pytest.approx(
            2.0 * high_t_coefficients.D)

    def test_anomalous_term_switchable(self, high_t_coefficients):
        grid = Grid1D(16, -3.0, 3.0)
        gen = qbm_generator(HIGH_T, grid, include_anomalous=False,
                            coefficients=high_t_coefficients)
        assert [t.label for t in gen.extra_terms] == ["damping"]

    def test_dissipator_alone_conserves_position_populations(self, rng,
                                                             high_t_coefficients):
        # with damping and the anomalous term off, the remaining dissipator
        # is diagonal in position and cannot move the diagonal
        grid = Grid1D(12, -2.0, 2.0)
        gen = qbm_generator(HIGH_T, grid, include_dissipation=False,
                            coefficients=high_t_coefficients)
        h_only = LindbladGenerator(gen.hamiltonian)
        rho = random_density(rng, 12)
        dissipator = apply_generator(gen, rho) - apply_generator(h_only, rho)
        scale = np.max(np.abs(dissipator))
        assert np.max(np.abs(np.diag(dissipator))) < 1e-13 * scale

    def test_caldeira_leggett_uses_closed_form_coefficients(self):
        grid = Grid1D(16, -3.0, 3.0)
        gen = caldeira_leggett_generator(HIGH_T, grid)
        want = 2.0 * HIGH_T.mass * HIGH_T.gamma0 * HIGH_T.T
        assert gen.lindblad_ops[0][0] == pytest.approx(2.0 * want)

    def test_caldeira_leggett_warns_outside_the_high_t_regime(self):
        import pytest as _pytest
        grid = Grid1D(16, -3.0, 3.0)
        cold = QBMParams(mass=1.0, Omega=1.0, gamma0=0.1, T=2.0, cutoff=1e3)
        with _pytest.warns(UserWarning, match="high-T"):
            caldeira_leggett_generator(cold, grid)


class TestMomentFlow:
    def test_moment_matrix_matches_generator_on_random_states(self, rng):
        # oracle for the moment-closure derivation: Tr(A L[rho]) must equal
        # the matrix flow row for A in {x, p, x^2, xp+px, p^2}; the Fock
        # commutator [x, p] = i is exact on low-lying states
        mass, omega_sq, gamma, D, f = 1.4, 0.8, 0.23, 0.9, 0.17
        gen, x, p = build_fock_generator(mass, omega_sq, gamma, D, f, n=30)
        A, b = qbm_moment_matrix(mass, omega_sq, gamma, D, f)
        xm, pm = x.matrix, p.matrix
        obs = [xm, pm, xm @ xm, xm @ pm + pm @ xm, pm @ pm]
        rho = random_density(rng, 30, rank=3)
        # keep support away from the truncation edge
        proj = np.zeros((30, 30))
        proj[:10, :10] = np.eye(10)
        m = proj @ rho.matrix @ proj
        m = m / np.trace(m)
        rhs = gen.apply(m)
        moments = np.array([np.trace(o @ m).real for o in obs])
        got = np.array([np.trace(o @ rhs).real for o in obs])
        want = A @ moments + b
        assert_allclose(got, want, rtol=1e-9, atol=1e-9)

    def test_late_time_variance_growth_rate(self, high_t_coefficients):
        # free particle, anomalous term off: Var(x) grows at D / (2 M^2 gamma^2)
        c = high_t_coefficients
        gamma = c.gamma
        t_end = 20.0 / gamma
        times = np.linspace(0.0, t_end, 400)
        # minimum-uncertainty packet at rest: Var(x) = 1/2, Var(p) = 1/2
        m0 = np.array([0.0, 0.0, 0.5, 0.0, 0.5])
        var = qbm_position_variance(HIGH_T, times, m0, coefficients=c,
                                    free_particle=True, include_anomalous=False)
        late = times > 10.0 / gamma
        slope = np.polyfit(times[late], var[late], 1)[0]
        want = c.D / (2.0 * HIGH_T.mass ** 2 * gamma ** 2)
        assert slope == pytest.approx(want, rel=0.05)

    def test_localization_rate_matches_decoherence_coefficient(self,
                                                               high_t_coefficients):
        # D dx^2 at high temperature equals gamma0 (dx / lambda_th)^2 with
        # lambda_th = 1 / sqrt(2 m k_B T) in natural units
        dx = 0.3
        lam_th = 1.0 / np.sqrt(2.0 * HIGH_T.mass * HIGH_T.T)
        want = HIGH_T.gamma0 * (dx / lam_th) ** 2
        assert localization_rate(HIGH_T.mass, HIGH_T.gamma0, HIGH_T.T, dx) == \
            pytest.approx(want, rel=1e-12)
        assert high_t_coefficients.D * dx ** 2 == pytest.approx(want, rel=0.02)


class TestGridEvolution:
    def test_coherence_decays_faster_than_populations_spread(self):
        # short CL evolution of a small cat: off-diagonal peak collapses
        # while the diagonal stays near its initial profile
        from decoherence.lindblad import IntegratorConfig, evolve
        params = QBMParams(mass=5.0, Omega=0.5, gamma0=0.01, T=200.0, cutoff=50.0)
        grid = Grid1D(64, -4.0, 4.0)
        psi0 = grid.two_packet_cat(1.2, 0.35)
        # T/cutoff = 4 is deliberately marginal (keeps the run short), so
        # the regime warning is expected
        with pytest.warns(UserWarning, match="high-T"):
            gen = caldeira_leggett_generator(params, grid)
        rho0 = psi0.density()
        d = 2.0 * params.mass * params.gamma0 * params.T  # decoherence strength
        t_final = 4.0 / (d * (2 * 1.2) ** 2)  # four units of the cat's decay
        res = evolve(gen, rho0, IntegratorConfig(dt=t_final / 400, t_final=t_final,
                                                 record_stride=400),
                     check_positivity=False)
        # look at the cat's off-diagonal peak near (x, x') = (x0, -x0)
        sep = np.abs(np.subtract.outer(grid.x, grid.x))
        off = sep > 2.0
        before = np.max(np.abs(rho0.matrix)[off])
        after = np.max(np.abs(res.final().matrix)[off])
        assert after < 0.1 * before
        # diagonal barely moves over this short time
        assert np.max(np.abs(np.diag(res.final().matrix) - np.diag(rho0.matrix))) \
            < 0.05 * np.max(np.abs(np.diag(rho0.matrix)))
