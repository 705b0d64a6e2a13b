"""Cavity-field cat states: overlap, catness, and decoherence timescales.

A dispersive atom-field interaction splits a coherent state |alpha| e^{i chi}
against |alpha| e^{-i chi}.  The squared overlap of the two components is
exp(-4 nbar sin^2 chi); its exponent D^2 = 4 nbar sin^2 chi quantifies the
"catness" (squared phase-space separation of the components), and a damped
cavity destroys the superposition on the timescale T_d = 2 T_r / D^2, far
faster than the energy damping time T_r for any mesoscopic D^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CavityCatParams:
    """Mean photon number, dispersive phase shift (radians), damping time."""

    nbar: float
    chi: float
    Tr: float

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError("mean photon number must be nonnegative")
        if self.Tr <= 0:
            raise ValueError("cavity damping time must be positive")


def cat_overlap(params: CavityCatParams) -> dict:
    """Overlap of the two coherent components and the catness parameter.

    Returns squared overlap exp(-4 nbar sin^2 chi), amplitude overlap
    exp(-2 nbar sin^2 chi), and catness D^2 = 4 nbar sin^2 chi.
    """
    d_sq = 4.0 * params.nbar * math.sin(params.chi) ** 2
    return {
        "overlap_sq": math.exp(-d_sq),
        "overlap": math.exp(-0.5 * d_sq),
        "catness": d_sq,
    }


def cat_decoherence_time(params: CavityCatParams) -> float:
    """T_d = 2 T_r / D^2; undefined for D^2 = 0 (no superposition to lose)."""
    d_sq = 4.0 * params.nbar * math.sin(params.chi) ** 2
    if d_sq <= 0.0:
        raise ValueError("catness is zero: the components coincide and no "
                         "decoherence time is defined")
    return 2.0 * params.Tr / d_sq


def cat_coherence_decay(params: CavityCatParams, t: float) -> float:
    """Coherence fraction exp(-t / T_d) remaining after a wait time t."""
    return math.exp(-t / cat_decoherence_time(params))


def two_atom_correlation_limits(coherence_fraction: float) -> float:
    """Two-atom correlation eta = P_ee - P_eg for a given residual coherence.

    The limiting values are exact: full coherence gives perfectly correlated
    detections (P_ee = 1, P_eg = 1/2, eta = 1/2) and full decoherence gives
    none (eta = 0).  Between them this interpolates linearly,
    eta = coherence / 2, which is a modeling choice rather than a derived
    law; only the endpoints are pinned by the correlation argument.
    """
    if not 0.0 <= coherence_fraction <= 1.0:
        raise ValueError("coherence fraction must lie in [0, 1]")
    return 0.5 * coherence_fraction
