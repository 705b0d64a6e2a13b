"""Oscillator in a hot ohmic bath: coefficients, localization, diffusion.

The weak-coupling master equation's four coefficients come from quadratures
of the bath's noise and dissipation kernels.  At high temperature the
decoherence coefficient approaches 2 M gamma0 k_B T, spatial coherence over
dx dies at rate gamma0 (dx / lambda_th)^2, and the late-time position
variance of a free particle grows diffusively.
"""

import numpy as np

from decoherence.models import QBMParams, qbm_coefficients, qbm_position_variance
from decoherence.models.qbm import localization_rate

params = QBMParams(mass=1.0, Omega=1.0, gamma0=0.1, T=1e6, cutoff=1e3)
print("bath: ohmic, cutoff/Omega = 1e3, k_B T/cutoff = 1e3 (hbar = k_B = 1)")
c = qbm_coefficients(params)
print(f"  frequency-shift^2 = {c.omega_shift_sq:.4g}  "
      f"(closed form -2 gamma0 cutoff = {-2 * params.gamma0 * params.cutoff:.4g})")
print(f"  damping gamma     = {c.gamma:.4g}")
print(f"  decoherence D     = {c.D:.6g}  "
      f"(high-T value 2 M gamma0 T = {2 * params.mass * params.gamma0 * params.T:.6g})")
print(f"  anomalous f       = {c.f:.4g}  (negligible at high T)")

lam_th = 1.0 / np.sqrt(2.0 * params.mass * params.T)
print(f"\nthermal wavelength lambda_th = {lam_th:.3e}")
print("localization rate gamma0 (dx / lambda_th)^2:")
for dx in (1e-3, 1e-2, 1e-1):
    print(f"  dx = {dx:6.0e}: rate = {localization_rate(params.mass, params.gamma0, params.T, dx):.3e}"
          f"   (D dx^2 = {c.D * dx * dx:.3e})")

print("\nfree-particle variance growth (moment flow, anomalous term off):")
t_end = 20.0 / c.gamma
times = np.linspace(0.0, t_end, 200)
var = qbm_position_variance(params, times, np.array([0, 0, 0.5, 0, 0.5]),
                            coefficients=c, free_particle=True,
                            include_anomalous=False)
late = times > 10.0 / c.gamma
slope = np.polyfit(times[late], var[late], 1)[0]
print(f"  late-time slope = {slope:.4g} vs D/(2 M^2 gamma^2) = "
      f"{c.D / (2 * params.mass ** 2 * c.gamma ** 2):.4g}")
