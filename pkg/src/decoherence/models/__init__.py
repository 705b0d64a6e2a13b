"""Decoherence model families: scattering, oscillator baths, spin baths, cavity fields."""

from .collisional import (
    CollisionalParams,
    collisional_generator,
    collisional_decoherence_time,
    collisional_evolve_split_step,
    decoherence_dissipation_ratio,
    scattering_constant,
    effective_cross_section,
    hard_sphere_amplitude_sq,
    interference_pattern,
)
from .qbm import (
    QBMParams,
    qbm_generator,
    qbm_coefficients,
    qbm_moment_matrix,
    qbm_position_variance,
    caldeira_leggett_generator,
)
from .spin_boson import (
    SpinBosonParams,
    spin_boson_pure_dephasing,
    spin_boson_born_markov,
    effective_spin_env_spectral_density,
)
from .spin_spin import (
    SpinSpinParams,
    spin_spin_coherence_factor,
    spin_spin_brute_force_factor,
    spin_spin_gaussian_rate,
)
from .cavity import (
    CavityCatParams,
    cat_overlap,
    cat_decoherence_time,
    cat_coherence_decay,
    two_atom_correlation_limits,
)

__all__ = [name for name in dir() if not name.startswith("_")]
