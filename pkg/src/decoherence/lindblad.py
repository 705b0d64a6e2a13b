"""Markovian master equations and a deterministic fixed-step integrator.

A generator assembles

    d rho / dt = -(i/hbar)(H rho - rho H^dag)
                 + sum_mu kappa_mu (L rho L^dag - {L^dag L, rho}/2)
                 + extra commutator-structured terms,

with hbar = 1.  The Lindblad part covers completely positive semigroups
(diagonal form, or diagonalized from a first-standard-form coefficient
matrix).  The extra terms admit the non-Lindblad pieces of microscopically
derived equations: double commutators c [A,[B,rho]], commutator-
anticommutator terms c [A,{B,rho}], and paired sandwich terms c A rho B.
A non-Hermitian H is propagated as H rho - rho H^dag, which the sandwich
terms of the weak-coupling two-level equation rely on to conserve trace.

Integration is classical fixed-step 4th-order (reproducible time series);
`convergence_check` estimates the step error by halving dt.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
import scipy.integrate
from scipy.integrate import quad

from .core import DensityMatrix, Operator

TRACE_DRIFT_TOL = 1e-7
POSITIVITY_DRIFT_TOL = 1e-7


# ---------------------------------------------------------------------------
# Generator terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtraTerm:
    """One non-Lindblad term of a master equation.

    kind 'double_comm':    coeff * [A, [B, rho]]
    kind 'comm_anticomm':  coeff * [A, {B, rho}]
    kind 'sandwich':       coeff * A rho B
    """

    kind: Literal["double_comm", "comm_anticomm", "sandwich"]
    a: Operator
    b: Operator
    coeff: complex
    label: str = ""

    def apply(self, rho: np.ndarray) -> np.ndarray:
        A, B = self.a.matrix, self.b.matrix
        if self.kind == "double_comm":
            inner = B @ rho - rho @ B
            return self.coeff * (A @ inner - inner @ A)
        if self.kind == "comm_anticomm":
            inner = B @ rho + rho @ B
            return self.coeff * (A @ inner - inner @ A)
        if self.kind == "sandwich":
            return self.coeff * (A @ rho @ B)
        raise ValueError(f"unknown term kind {self.kind}")


def _diag_or_none(m: np.ndarray) -> np.ndarray | None:
    d = np.diag(m)
    if np.max(np.abs(m - np.diag(d))) == 0.0:
        return d
    return None


class LindbladGenerator:
    """Hamiltonian plus weighted Lindblad operators plus optional extra terms."""

    def __init__(self, hamiltonian: Operator | None,
                 lindblad_ops: Sequence[tuple[float, Operator]] = (),
                 extra_terms: Sequence[ExtraTerm] = (),
                 form_tag: str = "diagonal"):
        dims = set()
        if hamiltonian is not None:
            dims.add(hamiltonian.dim)
        for rate, op in lindblad_ops:
            if rate < 0:
                raise ValueError(f"Lindblad rate must be nonnegative, got {rate}")
            dims.add(op.dim)
        for t in extra_terms:
            dims.add(t.a.dim)
            dims.add(t.b.dim)
        if len(dims) > 1:
            raise ValueError(f"mixed operator dimensions {dims}")
        if not dims:
            raise ValueError("generator needs at least one operator")
        self.dim = dims.pop()
        self.hamiltonian = hamiltonian
        self.lindblad_ops = tuple((float(r), op) for r, op in lindblad_ops)
        self.extra_terms = tuple(extra_terms)
        self.form_tag = form_tag
        # precompute L^dag L and diagonal fast paths (position-basis models
        # have diagonal L, which turns the dissipator into O(dim^2) work)
        self._ldl = [op.matrix.conj().T @ op.matrix for _, op in self.lindblad_ops]
        self._ldiag = [_diag_or_none(op.matrix) for _, op in self.lindblad_ops]
        self._h_is_hermitian = hamiltonian is None or hamiltonian.is_hermitian(1e-12)

    @classmethod
    def from_first_standard_form(cls, hamiltonian: Operator | None,
                                 gamma: np.ndarray, basis: Sequence[Operator],
                                 tol: float = 1e-8) -> "LindbladGenerator":
        """Diagonalize a first-standard-form coefficient matrix.

        gamma must be Hermitian with eigenvalues >= -tol; eigenvalues in
        [-tol, 0) are clamped to zero.  The resulting Lindblad operators are
        the eigenvector-weighted combinations of the basis operators.
        """
        g = np.asarray(gamma, dtype=complex)
        n = len(basis)
        if g.shape != (n, n):
            raise ValueError("coefficient matrix shape does not match basis size")
        if np.max(np.abs(g - g.conj().T)) > 1e-10:
            raise ValueError("coefficient matrix must be Hermitian")
        w, v = np.linalg.eigh(g)
        if w[0] < -tol:
            raise ValueError(
                f"coefficient matrix has negative eigenvalue {w[0]}; "
                "not a valid semigroup generator")
        ops = []
        for mu in range(n):
            rate = max(float(w[mu]), 0.0)
            if rate == 0.0:
                continue
            l = sum(v[alpha, mu] * basis[alpha].matrix for alpha in range(n))
            ops.append((rate, Operator(l)))
        return cls(hamiltonian, ops, form_tag="first_standard")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Right-hand side of the master equation for a raw state matrix."""
        out = np.zeros_like(rho, dtype=complex)
        if self.hamiltonian is not None:
            h = self.hamiltonian.matrix
            if self._h_is_hermitian:
                out += -1j * (h @ rho - rho @ h)
            else:
                out += -1j * (h @ rho - rho @ h.conj().T)
        for (rate, op), ldl, d in zip(self.lindblad_ops, self._ldl, self._ldiag):
            if d is not None:
                sand = (d[:, None] * rho) * d.conj()[None, :]
                dd = np.real(d * d.conj())
                anti = 0.5 * (dd[:, None] + dd[None, :]) * rho
                out += rate * (sand - anti)
            else:
                l = op.matrix
                out += rate * (l @ rho @ l.conj().T - 0.5 * (ldl @ rho + rho @ ldl))
        for term in self.extra_terms:
            out += term.apply(rho)
        return out

    def superoperator(self) -> np.ndarray:
        """Dense dim^2 x dim^2 matrix of the generator on row-major vec(rho)."""
        d = self.dim
        s = np.zeros((d * d, d * d), dtype=complex)
        basis = np.zeros((d, d), dtype=complex)
        for i in range(d):
            for j in range(d):
                basis[i, j] = 1.0
                s[:, i * d + j] = self.apply(basis).reshape(-1)
                basis[i, j] = 0.0
        return s


def apply_generator(gen: LindbladGenerator, rho: DensityMatrix) -> np.ndarray:
    """Master-equation time derivative of a density matrix."""
    if rho.dim != gen.dim:
        raise ValueError("state dimension does not match the generator")
    return gen.apply(np.array(rho.matrix))


# ---------------------------------------------------------------------------
# Fixed-step integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_final: float
    record_stride: int = 1
    method_tag: str = "rk4"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_final < self.dt:
            raise ValueError("t_final must be at least one step")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")


@dataclass
class EvolutionResult:
    times: np.ndarray
    states: list[DensityMatrix]

    def final(self) -> DensityMatrix:
        return self.states[-1]


class PositivityLossError(RuntimeError):
    """State positivity drifted past tolerance: dt too large or generator invalid."""


def _rk4_step(gen: LindbladGenerator, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = gen.apply(rho)
    k2 = gen.apply(rho + 0.5 * dt * k1)
    k3 = gen.apply(rho + 0.5 * dt * k2)
    k4 = gen.apply(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve(gen: LindbladGenerator, rho0: DensityMatrix, cfg: IntegratorConfig,
           check_positivity: bool = True) -> EvolutionResult:
    """Integrate the master equation, recording every record_stride-th step.

    Recorded states are validated (Hermitian, unit trace, positive within
    drift tolerance); violations raise PositivityLossError.
    """
    n_steps = int(round(cfg.t_final / cfg.dt))
    rho = np.array(rho0.matrix)
    times = [0.0]
    states = [rho0]
    for step in range(1, n_steps + 1):
        rho = _rk4_step(gen, rho, cfg.dt)
        if step % cfg.record_stride == 0 or step == n_steps:
            tr_err = abs(np.trace(rho) - 1.0)
            if not np.isfinite(tr_err) or tr_err > TRACE_DRIFT_TOL:
                raise PositivityLossError(
                    f"trace drifted by {tr_err:.3e} at t={step * cfg.dt:.6g}")
            if check_positivity:
                if not np.all(np.isfinite(rho)):
                    raise PositivityLossError(
                        f"state overflowed at t={step * cfg.dt:.6g}; reduce dt")
                wmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
                if wmin < -POSITIVITY_DRIFT_TOL:
                    raise PositivityLossError(
                        f"min eigenvalue {wmin:.3e} at t={step * cfg.dt:.6g}; "
                        "reduce dt or check the generator")
            times.append(step * cfg.dt)
            states.append(DensityMatrix(rho, tol=1e-6, clamp=POSITIVITY_DRIFT_TOL))
    return EvolutionResult(np.array(times), states)


def evolve_observables(gen: LindbladGenerator, rho0: DensityMatrix,
                       cfg: IntegratorConfig,
                       observables: dict[str, Callable[[np.ndarray], float]],
                       ) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Streaming variant of evolve: record scalar functionals, not states."""
    n_steps = int(round(cfg.t_final / cfg.dt))
    rho = np.array(rho0.matrix)
    times = [0.0]
    records = {name: [f(rho)] for name, f in observables.items()}
    for step in range(1, n_steps + 1):
        rho = _rk4_step(gen, rho, cfg.dt)
        if step % cfg.record_stride == 0 or step == n_steps:
            if abs(np.trace(rho) - 1.0) > TRACE_DRIFT_TOL:
                raise PositivityLossError(f"trace drift at step {step}")
            times.append(step * cfg.dt)
            for name, f in observables.items():
                records[name].append(f(rho))
    return np.array(times), {k: np.array(v) for k, v in records.items()}


def convergence_check(gen: LindbladGenerator, rho0: DensityMatrix,
                      cfg: IntegratorConfig) -> float:
    """Max-entry change of the final state when dt is halved."""
    coarse = evolve(gen, rho0, cfg, check_positivity=False).final()
    fine_cfg = IntegratorConfig(cfg.dt / 2.0, cfg.t_final,
                                record_stride=2 * cfg.record_stride)
    fine = evolve(gen, rho0, fine_cfg, check_positivity=False).final()
    return float(np.max(np.abs(coarse.matrix - fine.matrix)))


# ---------------------------------------------------------------------------
# Spectral densities, environment kernels, and weak-coupling coefficients
# ---------------------------------------------------------------------------

def ohmic_spectral_density(omega: float, mass: float, gamma0: float,
                           cutoff: float) -> float:
    """Ohmic spectral density with Lorentz-Drude rolloff.

    J(w) = (2 M gamma0 / pi) w Lambda^2 / (Lambda^2 + w^2); linear in w well
    below the cutoff and falling off as 1/w above it.
    """
    if omega < 0:
        raise ValueError("frequency must be nonnegative")
    return (2.0 * mass * gamma0 / math.pi) * omega * cutoff ** 2 / (cutoff ** 2 + omega ** 2)


def ohmic(mass: float, gamma0: float, cutoff: float) -> Callable[[float], float]:
    return lambda w: ohmic_spectral_density(w, mass, gamma0, cutoff)


def _coth(x: float) -> float:
    # series switch keeps the w -> 0 limit of J(w) coth(w/2T) finite
    if x < 1e-6:
        return 1.0 / x + x / 3.0
    if x > 36.0:
        return 1.0
    return 1.0 / math.tanh(x)


@dataclass(frozen=True)
class CorrelationKernelSpec:
    """Noise and dissipation kernels of a stationary environment."""

    nu: Callable[[float], float]
    eta: Callable[[float], float]
    cutoff_time: float


class QuadratureError(RuntimeError):
    """An environment integral failed to converge; increase the cutoff."""


def noise_dissipation_kernels(J: Callable[[float], float], T: float,
                              cutoff_time: float) -> CorrelationKernelSpec:
    """Build nu(tau) and eta(tau) from a spectral density at temperature T.

    nu(tau)  = int_0^inf J(w) coth(w / 2 T) cos(w tau) dw
    eta(tau) = int_0^inf J(w) sin(w tau) dw

    evaluated with Fourier-weighted adaptive quadrature.  T = 0 is taken as
    the coth -> 1 limit.
    """
    if T < 0:
        raise ValueError("temperature must be nonnegative")

    def weighted(w: float) -> float:
        # w = 0 is a 0 * inf limit point for ohmic densities; nudging into
        # the smallest normal range evaluates the limit correctly
        if T > 0 and w < 1e-300:
            w = 1e-300
        return J(w) * (_coth(w / (2.0 * T)) if T > 0 else 1.0)

    def nu(tau: float) -> float:
        if tau == 0.0:
            tau = 1e-12 * cutoff_time
        with warnings.catch_warnings():
            # slow tail convergence of the Fourier extrapolation is benign
            # here; divergence still surfaces as a non-finite value
            warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
            val, _ = quad(weighted, 0.0, np.inf, weight="cos", wvar=tau,
                          limit=400, limlst=200)
        if not np.isfinite(val):
            raise QuadratureError(f"noise kernel diverged at tau={tau}")
        return val

    def eta(tau: float) -> float:
        if tau == 0.0:
            return 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
            val, _ = quad(J, 0.0, np.inf, weight="sin", wvar=tau,
                          limit=400, limlst=200)
        if not np.isfinite(val):
            raise QuadratureError(f"dissipation kernel diverged at tau={tau}")
        return val

    return CorrelationKernelSpec(nu=nu, eta=eta, cutoff_time=cutoff_time)


@dataclass(frozen=True)
class BornMarkovCoefficients:
    """Weak-coupling coefficients of the oscillator master equation.

    omega_shift_sq renormalizes the squared frequency; gamma damps momentum;
    D multiplies the position double commutator (spatial decoherence); f
    multiplies the anomalous x-p double commutator.
    """

    omega_shift_sq: float
    gamma: float
    D: float
    f: float
    quadrature_error: float


def born_markov_coefficients(kernels: CorrelationKernelSpec, omega: float,
                             mass: float = 1.0,
                             rtol: float = 1e-8) -> BornMarkovCoefficients:
    """Integrate the kernels against the system frequency.

    omega_shift_sq = -(2/M)   int_0^tc eta(tau) cos(omega tau) dtau
    gamma          = (2/M w)  int_0^tc eta(tau) sin(omega tau) dtau
    D              =          int_0^tc nu(tau)  cos(omega tau) dtau
    f              = -(1/M w) int_0^tc nu(tau)  sin(omega tau) dtau
    """
    tc = kernels.cutoff_time
    total_err = 0.0

    def integrate(f: Callable[[float], float]) -> float:
        nonlocal total_err
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
            val, err = quad(f, 0.0, tc, epsrel=rtol, limit=400)
        if not np.isfinite(val) or (abs(val) > 0 and err > 1e-2 * abs(val)):
            raise QuadratureError(
                f"coefficient integral did not converge (value {val}, error {err}); "
                "cutoff_time may be too small")
        total_err += err
        return val

    eta_cos = integrate(lambda t: kernels.eta(t) * math.cos(omega * t))
    eta_sin = integrate(lambda t: kernels.eta(t) * math.sin(omega * t))
    nu_cos = integrate(lambda t: kernels.nu(t) * math.cos(omega * t))
    nu_sin = integrate(lambda t: kernels.nu(t) * math.sin(omega * t))
    return BornMarkovCoefficients(
        omega_shift_sq=-2.0 / mass * eta_cos,
        gamma=2.0 / (mass * omega) * eta_sin,
        D=nu_cos,
        f=-nu_sin / (mass * omega),
        quadrature_error=total_err,
    )


def born_markov_generator(hamiltonian: Operator | None,
                          system_ops: Sequence[Operator],
                          interaction_picture_ops: Sequence[Callable[[float], np.ndarray]],
                          correlation: Callable[[int, int, float], complex],
                          cutoff_time: float,
                          n_quadrature: int = 1001) -> LindbladGenerator:
    """Assemble a weak-coupling generator from correlation functions.

    For a monitoring interaction sum_alpha S_alpha (x) E_alpha the equation
    reads (hbar = 1)

        d rho/dt = -i [H, rho]
                   - sum_alpha ([S_alpha, B_alpha rho] + [rho C_alpha, S_alpha]),

    with the dressed operators

        B_alpha = int_0^tc sum_beta  corr(alpha, beta, tau)  S_beta(-tau) dtau
        C_alpha = int_0^tc sum_beta  corr(beta, alpha, -tau) S_beta(-tau) dtau.

    The caller supplies the interaction-picture trajectories tau ->
    S_beta(-tau) (these are model-specific: free evolution under the system
    Hamiltonian) and the environment correlation corr(alpha, beta, tau),
    for which stationarity gives corr(beta, alpha, -tau) =
    conj(corr(alpha, beta, tau)); that identity is used here.  The tau
    integrals run to cutoff_time on a Simpson grid of n_quadrature points
    (correlations must have decayed by then).  Each commutator is carried
    as a pair of sandwich terms, which keeps the generator exactly
    trace-preserving.  Note the result is generally not of completely
    positive form.
    """
    import scipy.integrate as _si

    if len(system_ops) != len(interaction_picture_ops):
        raise ValueError("one trajectory per system operator required")
    if n_quadrature < 5 or n_quadrature % 2 == 0:
        raise ValueError("n_quadrature must be odd and >= 5")
    taus = np.linspace(0.0, cutoff_time, n_quadrature)
    dim = system_ops[0].dim
    n_ops = len(system_ops)
    # sample the trajectories once: traj[beta, k] = S_beta(-tau_k)
    traj = np.empty((n_ops, n_quadrature, dim, dim), dtype=complex)
    for beta, s_traj in enumerate(interaction_picture_ops):
        for k, tau in enumerate(taus):
            traj[beta, k] = np.asarray(s_traj(tau), dtype=complex)

    extra: list[ExtraTerm] = []
    ident = Operator.identity(dim)
    for alpha, s_op in enumerate(system_ops):
        b_integrand = np.zeros((n_quadrature, dim, dim), dtype=complex)
        c_integrand = np.zeros((n_quadrature, dim, dim), dtype=complex)
        for beta in range(n_ops):
            corr = np.array([correlation(alpha, beta, tau) for tau in taus])
            b_integrand += corr[:, None, None] * traj[beta]
            c_integrand += np.conj(corr)[:, None, None] * traj[beta]
        b_mat = _si.simpson(b_integrand, x=taus, axis=0)
        c_mat = _si.simpson(c_integrand, x=taus, axis=0)
        s = s_op.matrix
        # -[S, B rho] = -(S B) rho I + B rho S
        extra.append(ExtraTerm("sandwich", Operator(s @ b_mat), ident, -1.0,
                               label=f"bm_left_{alpha}"))
        extra.append(ExtraTerm("sandwich", Operator(b_mat), s_op, +1.0,
                               label=f"bm_left_{alpha}*"))
        # -[rho C, S] = -I rho (C S) + S rho C
        extra.append(ExtraTerm("sandwich", ident, Operator(c_mat @ s), -1.0,
                               label=f"bm_right_{alpha}"))
        extra.append(ExtraTerm("sandwich", s_op, Operator(c_mat), +1.0,
                               label=f"bm_right_{alpha}*"))
    return LindbladGenerator(hamiltonian, [], extra_terms=extra,
                             form_tag="born_markov")


def caldeira_leggett_lindblad_operator(mass: float, T: float,
                                       x: Operator, p: Operator) -> Operator:
    """Single Lindblad operator of the minimally repaired high-T equation.

    L = sqrt(4 M k_B T) x + i sqrt(1 / (4 M k_B T)) p   (hbar = k_B = 1).
    With rate gamma0 this reproduces the high-temperature dissipator up to a
    small [p, [p, rho]] correction and a Hamiltonian {x,p}/2 shift, restoring
    complete positivity.
    """
    if T <= 0:
        raise ValueError("temperature must be positive")
    a = math.sqrt(4.0 * mass * T)
    b = math.sqrt(1.0 / (4.0 * mass * T))
    return Operator(a * x.matrix + 1j * b * p.matrix)


def lindblad_repair_caldeira_leggett(mass: float, gamma0: float, T: float,
                                     x: Operator, p: Operator,
                                     hamiltonian: Operator | None = None,
                                     ) -> LindbladGenerator:
    """Completely positive repair of the high-temperature limit.

    The generator carries the single Lindblad operator above at rate gamma0
    plus the Hamiltonian shift gamma0 {x, p} / 2 that the rewriting induces.
    """
    L = caldeira_leggett_lindblad_operator(mass, T, x, p)
    h_shift = 0.5 * gamma0 * (x.matrix @ p.matrix + p.matrix @ x.matrix)
    h = h_shift if hamiltonian is None else hamiltonian.matrix + h_shift
    return LindbladGenerator(Operator(h), [(gamma0, L)], form_tag="diagonal")


def pure_dephasing_qubit(D: float, hamiltonian: Operator | None = None,
                         ) -> LindbladGenerator:
    """Qubit monitored in the sigma_z basis.

    Implements the literal double commutator -D [sz, [sz, rho]] as the
    Lindblad pair (rate 2D, L = sigma_z).  Expanding it elementwise, the
    off-diagonal matrix elements decay at the effective rate 4D (the double
    commutator contributes 4 rho_01, not rho_01; texts that quote the decay
    rate as D are using a convention that differs by this factor of 4 from
    the literal operator expression).
    """
    from .core import SIGMA_Z
    if D < 0:
        raise ValueError("dephasing strength must be nonnegative")
    return LindbladGenerator(hamiltonian, [(2.0 * D, SIGMA_Z)])


#: Off-diagonal decay rate per unit dephasing strength for the literal
#: double-commutator convention.
PURE_DEPHASING_RATE_FACTOR = 4.0
