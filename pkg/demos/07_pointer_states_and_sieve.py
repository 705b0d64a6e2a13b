"""Pointer states: the commutator criterion and the predictability sieve.

Observables commuting with the monitored system operator are immune to the
monitoring; their eigenstates are the pointer states.  When no exact
commutant exists, the sieve ranks candidate states by how much purity they
keep under the open dynamics, and recovers the same answer.
"""

import numpy as np

from decoherence.core import SIGMA_X, SIGMA_Y, SIGMA_Z, bloch_state
from decoherence.lindblad import pure_dephasing_qubit
from decoherence.measures import pointer_commutator_residual, predictability_sieve

print("commutator residual ||[O, S]|| against the monitored operator S = sz:")
for name, op in (("sz", SIGMA_Z), ("sx", SIGMA_X), ("sy", SIGMA_Y)):
    print(f"  O = {name}: {pointer_commutator_residual(op, SIGMA_Z):.4f}")

gen = pure_dephasing_qubit(0.5)
mesh = [(t, p) for t in np.linspace(0.0, np.pi, 7) for p in (0.0, np.pi / 2)]
candidates = [bloch_state(t, p) for t, p in mesh]
report = predictability_sieve(gen, candidates, horizon=1.0, dt=5e-3)

print("\nsieve over a Bloch-sphere mesh (purity kept after t = 1):")
for rank, idx in enumerate(report.ranking[:6]):
    t, p = mesh[idx]
    print(f"  #{rank + 1}: theta = {t:5.2f}, phi = {p:4.2f}, "
          f"score = {report.scores[idx]:.6f}")
print("the winners sit at the poles: the sigma_z eigenstates, matching the")
print("zero-residual pointer observable.")
