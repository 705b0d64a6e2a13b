"""Quantum Brownian motion: a particle position-coupled to a thermal bath.

The weak-coupling master equation for an oscillator of mass M and frequency
Omega bilinearly coupled to an ohmic oscillator bath carries four
coefficients obtained from the bath kernels: a squared-frequency shift, a
momentum-damping rate gamma, a spatial-decoherence strength D, and an
anomalous x-p diffusion strength f.  In the high-temperature, large-cutoff
regime D approaches 2 M gamma0 k_B T (hbar = k_B = 1) and the equation
becomes the familiar high-T limit with its (Delta x / lambda_th)^2
localization rate.

The full equation is not of Lindblad form (the damping and anomalous terms
are not completely positive on their own), so the generator carries them as
structured extra terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

from ..core import Grid1D, Operator
from ..lindblad import (
    BornMarkovCoefficients,
    ExtraTerm,
    LindbladGenerator,
    born_markov_coefficients,
    noise_dissipation_kernels,
    ohmic,
)


@dataclass(frozen=True)
class QBMParams:
    mass: float
    Omega: float
    gamma0: float
    T: float
    cutoff: float

    def __post_init__(self):
        for name in ("mass", "Omega", "gamma0", "T", "cutoff"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def is_high_temperature(self) -> bool:
        """k_B T well above both hbar Omega and hbar Lambda."""
        return self.T >= 10.0 * self.Omega and self.T >= 10.0 * self.cutoff


def qbm_coefficients(params: QBMParams,
                     cutoff_time: float | None = None) -> BornMarkovCoefficients:
    """Kernel quadratures for the ohmic bath at the system frequency."""
    tc = cutoff_time if cutoff_time is not None else 50.0 / params.cutoff
    kernels = noise_dissipation_kernels(
        ohmic(params.mass, params.gamma0, params.cutoff), params.T, tc)
    return born_markov_coefficients(kernels, params.Omega, mass=params.mass)


def qbm_generator(params: QBMParams, grid: Grid1D,
                  include_anomalous: bool = True,
                  include_dissipation: bool = True,
                  coefficients: BornMarkovCoefficients | None = None,
                  ) -> LindbladGenerator:
    """Weak-coupling oscillator-bath generator on a position grid.

    The decoherence term -D [x, [x, rho]] is carried as the Lindblad pair
    (rate 2D, L = x); damping and the anomalous term (switchable; it is
    usually negligible at high temperature but belongs to the equation) are
    extra terms.
    """
    c = coefficients if coefficients is not None else qbm_coefficients(params)
    x = grid.position_operator()
    p = grid.momentum_operator()
    omega_sq = params.Omega ** 2 + c.omega_shift_sq
    h = grid.kinetic_hamiltonian(params.mass).matrix \
        + 0.5 * params.mass * omega_sq * np.diag((grid.x ** 2).astype(complex))
    extra = []
    if include_dissipation:
        extra.append(ExtraTerm("comm_anticomm", x, p, -1j * c.gamma, label="damping"))
        if include_anomalous:
            extra.append(ExtraTerm("double_comm", x, p, -c.f, label="anomalous"))
    return LindbladGenerator(Operator(h), [(2.0 * c.D, x)], extra_terms=extra)


def caldeira_leggett_generator(params: QBMParams, grid: Grid1D,
                               include_dissipation: bool = True,
                               ) -> LindbladGenerator:
    """High-temperature limit with closed-form coefficients.

    Uses D = 2 M gamma0 k_B T, damping gamma0, frequency shift
    -2 gamma0 Lambda, and drops the anomalous term (negligible for
    Lambda >> Omega).  Warns when the parameters are outside the
    high-temperature regime the closed forms assume.
    """
    if not params.is_high_temperature():
        import warnings
        warnings.warn(
            f"closed-form high-T coefficients used at k_B T = {params.T} "
            f"with Omega = {params.Omega}, cutoff = {params.cutoff}; "
            "the limit assumes k_B T well above both",
            stacklevel=2)
    x = grid.position_operator()
    p = grid.momentum_operator()
    omega_sq = params.Omega ** 2 - 2.0 * params.gamma0 * params.cutoff
    h = grid.kinetic_hamiltonian(params.mass).matrix \
        + 0.5 * params.mass * omega_sq * np.diag((grid.x ** 2).astype(complex))
    D = 2.0 * params.mass * params.gamma0 * params.T
    extra = []
    if include_dissipation:
        extra.append(ExtraTerm("comm_anticomm", x, p, -1j * params.gamma0,
                               label="damping"))
    return LindbladGenerator(Operator(h), [(2.0 * D, x)], extra_terms=extra)


# ---------------------------------------------------------------------------
# Moment flow
# ---------------------------------------------------------------------------

def qbm_moment_matrix(mass: float, omega_sq: float, gamma: float, D: float,
                      f: float) -> tuple[np.ndarray, np.ndarray]:
    """Linear flow of (<x>, <p>, <x^2>, <xp+px>, <p^2>) under the equation.

    Returns (A, b) with d m / dt = A m + b.  Derived by taking
    Tr(observable * rhs) term by term; the quadratic Hamiltonian closes the
    hierarchy at second order.
    """
    A = np.zeros((5, 5))
    b = np.zeros(5)
    M = mass
    # unitary part, H = p^2/2M + (M omega_sq/2) x^2
    A[0, 1] = 1.0 / M
    A[1, 0] = -M * omega_sq
    A[2, 3] = 1.0 / M
    A[3, 2] = -2.0 * M * omega_sq
    A[3, 4] = 2.0 / M
    A[4, 3] = -M * omega_sq
    # damping -(i gamma)[x, {p, rho}]
    A[1, 1] += -2.0 * gamma
    A[3, 3] += -2.0 * gamma
    A[4, 4] += -4.0 * gamma
    # decoherence -D [x, [x, rho]]: momentum diffusion
    b[4] += 2.0 * D
    # anomalous -f [x, [p, rho]]
    b[3] += -2.0 * f
    return A, b


def qbm_position_variance(params: QBMParams, times: np.ndarray,
                          initial_moments: np.ndarray,
                          coefficients: BornMarkovCoefficients | None = None,
                          free_particle: bool = False,
                          include_anomalous: bool = True) -> np.ndarray:
    """Var(x)(t) from the second-moment flow.

    free_particle drops the (shifted) potential, the regime in which the
    late-time variance grows linearly at rate D / (2 M^2 gamma^2).
    """
    c = coefficients if coefficients is not None else qbm_coefficients(params)
    omega_sq = 0.0 if free_particle else params.Omega ** 2 + c.omega_shift_sq
    A, b = qbm_moment_matrix(params.mass, omega_sq, c.gamma, c.D,
                             c.f if include_anomalous else 0.0)

    def rhs(t, m):
        return A @ m + b

    sol = scipy.integrate.solve_ivp(rhs, (times[0], times[-1]), initial_moments,
                                    t_eval=times, rtol=1e-10, atol=1e-12)
    if not sol.success:
        raise RuntimeError(f"moment integration failed: {sol.message}")
    x_mean, x_sq = sol.y[0], sol.y[2]
    return x_sq - x_mean ** 2


def localization_rate(mass: float, gamma0: float, T: float, dx: float) -> float:
    """Spatial decoherence rate D dx^2 = gamma0 (dx / lambda_th)^2 at high T."""
    D = 2.0 * mass * gamma0 * T
    return D * dx * dx
