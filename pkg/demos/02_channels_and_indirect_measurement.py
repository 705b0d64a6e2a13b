"""Kraus channels, complete positivity, and the environment as a probe.

A joint unitary on system + environment, with the environment traced out,
defines a channel on the system alone.  Reading the environment out instead
of tracing it gives an indirect measurement; forgetting the outcome
reproduces the channel exactly.  The Choi matrix certifies which linear
maps are physical: transposition famously is not.
"""

import numpy as np

from decoherence.channels import (
    apply_channel,
    check_complete_positivity,
    indirect_measurement,
    kraus_from_unitary,
    unread_average,
)
from decoherence.core import KET_0, KET_PLUS, Operator

CNOT = Operator(np.array([[1, 0, 0, 0],
                          [0, 1, 0, 0],
                          [0, 0, 0, 1],
                          [0, 0, 1, 0]], dtype=complex))

# --- the environment copies the system's basis: full dephasing -------------
channel = kraus_from_unitary(CNOT, KET_0.density(), dims=(2, 2))
print(f"channel from CNOT dilation: {len(channel)} Kraus operators")
rho = KET_PLUS.density()
out = apply_channel(channel, rho)
print("|+><+| after the channel (coherence gone):")
print(np.round(out.matrix.real, 6))

# --- the same physics as an indirect measurement ---------------------------
projectors = [Operator(np.diag([1.0, 0.0]).astype(complex)),
              Operator(np.diag([0.0, 1.0]).astype(complex))]
outcomes = indirect_measurement(CNOT, rho, KET_0.density(), projectors)
print("\nreading the environment out:")
for o in outcomes:
    diag = np.round(np.real(np.diag(o.conditional_state.matrix)), 6)
    print(f"  outcome {o.outcome}: p = {o.probability:.3f}, "
          f"conditional diag = {diag}")
avg = unread_average(outcomes)
print(f"unread average equals the channel: "
      f"max dev = {np.max(np.abs(avg.matrix - out.matrix)):.2e}")

# --- complete positivity certificates --------------------------------------
print("\nChoi-matrix certificates:")
dephasing = channel.superoperator()
print(f"  dephasing channel: {check_complete_positivity(dephasing)}")
transpose = np.zeros((4, 4))
for i in range(2):
    for j in range(2):
        transpose[j * 2 + i, i * 2 + j] = 1.0
print(f"  transposition map: {check_complete_positivity(transpose)}")
