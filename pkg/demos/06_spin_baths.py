"""Spin baths: exact bosonic dephasing and the static spin-spin factor.

Without tunneling, a qubit in a bosonic bath dephases with an exact
integral expression whose thermal stage sets in at tau_B = 2 / k_B T.  A
static bath of spins instead multiplies the coherence by an N-term product
whose magnitude turns Gaussian for large baths, with full recurrences for a
single bath spin.
"""

import numpy as np

from decoherence.models import (
    SpinSpinParams,
    spin_boson_pure_dephasing,
    spin_spin_brute_force_factor,
    spin_spin_coherence_factor,
    spin_spin_gaussian_rate,
)
from decoherence.models.spin_boson import SpinBosonParams, ohmic_coupling

# --- bosonic bath, exact solution -------------------------------------------
p = SpinBosonParams(omega0=0.0, Delta0=0.0, J=ohmic_coupling(0.1, 50.0),
                    T=1.0, cutoff=50.0)
factor = spin_boson_pure_dephasing(p)
tau_b = p.thermal_correlation_time()
print(f"bosonic bath (alpha = 0.1, T = 1): tau_B = {tau_b}")
for mult in (0.5, 1, 2, 5):
    t = mult * tau_b
    print(f"  |rho01({mult:3} tau_B)| / |rho01(0)| = {factor(t):.4f}")

# --- spin bath: recurrence vs Gaussian collapse ------------------------------
print("\nsingle bath spin in |+>: periodic recurrence")
single = SpinSpinParams.plus_states([0.8])
for t in (0.0, 2.0, 2 * np.pi / 0.8):
    print(f"  |z({t:5.2f})| = {abs(spin_spin_coherence_factor(single, t)):.4f}")

rng = np.random.default_rng(7)
big = SpinSpinParams.plus_states(rng.uniform(0.0, 1.0, 128))
gamma = spin_spin_gaussian_rate(big)
print(f"\n128 bath spins: Gaussian rate estimate Gamma = {gamma:.3f}")
ts = np.linspace(1e-3, 3.0 / gamma, 300)
z = np.abs(spin_spin_coherence_factor(big, ts))
window = (z >= 0.1) & (z <= 0.9)
coeffs = np.polyfit(ts[window] ** 2, -np.log(z[window]), 1)
print(f"  fit of -log|z| to Gamma^2 t^2 gives Gamma = {np.sqrt(coeffs[0]):.3f}")

small = SpinSpinParams.plus_states(rng.uniform(0.2, 1.0, 8))
tt = np.linspace(0, 4, 9)
dev = np.max(np.abs(spin_spin_coherence_factor(small, tt)
                    - spin_spin_brute_force_factor(small, tt)))
print(f"\nproduct form vs full 2^9-dimensional evolution (N = 8): "
      f"max dev = {dev:.2e}")
