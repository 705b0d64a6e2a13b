"""Diffusive stochastic unraveling of Lindblad dynamics.

Each trajectory integrates

    d rho = L[rho] dt + sum_mu sqrt(kappa_mu) W[L_mu] rho dW_mu,
    W[L] rho = L rho + rho L^dag - rho Tr{L rho + rho L^dag},

with independent Wiener increments dW ~ Normal(0, dt), Ito convention,
Euler-Maruyama stepping.  The W functional is traceless by construction,
so the trace is conserved step by step; with Hermitian Lindblad operators
pure states stay (numerically almost) pure along each trajectory, while
the trajectory average converges to the deterministic master-equation
solution at the usual 1/sqrt(N) Monte Carlo rate.

Reproducibility: trajectory j draws its increments from an independent
counter-based stream (Philox keyed by the ensemble seed, jumped j times),
with Gaussians produced by the inverse CDF applied to that stream's
uniforms.  Results are a deterministic function of (seed, config,
generator) with a fixed summation order, regardless of how the per-chunk
work is scheduled (thread fan-out is controlled by the
DECOHERENCE_NUM_THREADS environment variable).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .core import DensityMatrix, Operator
from .lindblad import LindbladGenerator

TRACE_DRIFT_LIMIT = 1e-4


@dataclass(frozen=True)
class TrajectoryConfig:
    n_trajectories: int
    dt: float
    t_final: float
    seed: int
    record_stride: int = 1

    def __post_init__(self):
        if self.n_trajectories < 1:
            raise ValueError("need at least one trajectory")
        if self.dt <= 0 or self.t_final < self.dt:
            raise ValueError("invalid time stepping")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))


@dataclass
class TrajectoryEnsemble:
    times: np.ndarray
    #: shape (n_trajectories, n_recorded, dim, dim)
    conditioned_states: np.ndarray
    ensemble_mean: list[DensityMatrix]

    @property
    def n_trajectories(self) -> int:
        return self.conditioned_states.shape[0]


class StepInstabilityError(RuntimeError):
    """Per-trajectory trace drift exceeded tolerance; dt is too large."""


def _gaussian_increments(seed: int, traj_index: int, n_steps: int,
                         n_ops: int, dt: float) -> np.ndarray:
    """Wiener increments for one trajectory from its own Philox substream."""
    stream = np.random.Generator(np.random.Philox(key=seed).jumped(traj_index))
    u = stream.random((n_steps, n_ops))
    # inverse-CDF transform pins the mapping from uniforms to Gaussians
    return ndtri(u) * math.sqrt(dt)


def unravel(gen: LindbladGenerator, rho0: DensityMatrix,
            cfg: TrajectoryConfig) -> TrajectoryEnsemble:
    """Integrate an ensemble of diffusive trajectories.

    Requires Hermitian Lindblad operators (the measurement-unraveling
    setting); generators with extra non-Lindblad terms are rejected.
    """
    if gen.extra_terms:
        raise ValueError("unraveling covers pure Lindblad generators only")
    for rate, op in gen.lindblad_ops:
        if not op.is_hermitian(1e-10):
            raise ValueError("unraveling requires Hermitian Lindblad operators")
    if rho0.dim != gen.dim:
        raise ValueError("state dimension does not match the generator")

    n_steps = cfg.n_steps
    recorded = [s for s in range(0, n_steps + 1)
                if s % cfg.record_stride == 0 or s == n_steps]
    times = np.array([s * cfg.dt for s in recorded])
    rates_ops = [(rate, op.matrix, op.matrix.conj().T @ op.matrix)
                 for rate, op in gen.lindblad_ops]
    sqrt_rates = [math.sqrt(rate) for rate, _, _ in rates_ops]
    n_ops = len(rates_ops)
    dim = gen.dim
    h = gen.hamiltonian.matrix if gen.hamiltonian is not None else None

    def batched_drift(rho: np.ndarray) -> np.ndarray:
        # deterministic Lindblad right-hand side on a (n, dim, dim) batch
        out = np.zeros_like(rho)
        if h is not None:
            out += -1j * (h @ rho - rho @ h)
        for rate, l, ldl in rates_ops:
            out += rate * (l @ rho @ l.conj().T - 0.5 * (ldl @ rho + rho @ ldl))
        return out

    def run_chunk(idx_lo: int, idx_hi: int) -> np.ndarray:
        n_traj = idx_hi - idx_lo
        rho = np.broadcast_to(rho0.matrix, (n_traj, dim, dim)).copy()
        out = np.empty((n_traj, len(recorded), dim, dim), dtype=complex)
        dw = np.stack([_gaussian_increments(cfg.seed, j, n_steps, n_ops, cfg.dt)
                       for j in range(idx_lo, idx_hi)])  # (n_traj, n_steps, n_ops)
        rec_pos = 0
        if recorded[0] == 0:
            out[:, 0] = rho
            rec_pos = 1
        for step in range(n_steps):
            new = rho + cfg.dt * batched_drift(rho)
            for mu, (rate_l_ldl, sr) in enumerate(zip(rates_ops, sqrt_rates)):
                l = rate_l_ldl[1]
                w = l @ rho + rho @ l.conj().T
                tr = np.trace(w, axis1=1, axis2=2)
                w = w - tr[:, None, None] * rho
                new = new + sr * dw[:, step, mu][:, None, None] * w
            rho = new
            if rec_pos < len(recorded) and recorded[rec_pos] == step + 1:
                tr_err = np.max(np.abs(np.trace(rho, axis1=1, axis2=2) - 1.0))
                # the update is traceless by construction, so a drifting or
                # non-finite trace means the state itself blew up
                if not np.isfinite(tr_err) or tr_err > TRACE_DRIFT_LIMIT \
                        or not np.all(np.isfinite(rho)):
                    raise StepInstabilityError(
                        f"trace drifted by {tr_err:.2e} at step {step + 1}; "
                        "reduce dt")
                out[:, rec_pos] = rho
                rec_pos += 1
        return out

    n_threads = max(1, int(os.environ.get("DECOHERENCE_NUM_THREADS", "1")))
    chunks = _chunk_ranges(cfg.n_trajectories, n_threads)
    if n_threads == 1 or len(chunks) == 1:
        parts = [run_chunk(lo, hi) for lo, hi in chunks]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(pool.map(lambda c: run_chunk(*c), chunks))
    states = np.concatenate(parts, axis=0)

    # fixed reduction order: ascending trajectory index.  Euler-Maruyama
    # conditioned states fluctuate O(sqrt(dt)) around the positive cone, so
    # the mean is validated with a correspondingly loose clamp; anything
    # beyond the percent level still signals a broken run.
    mean_raw = np.mean(states, axis=0)
    ensemble_mean = [DensityMatrix(0.5 * (m + m.conj().T), tol=1e-2, clamp=1e-2)
                     for m in mean_raw]
    return TrajectoryEnsemble(times, states, ensemble_mean)


def _chunk_ranges(n: int, n_chunks: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(n / n_chunks))
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]


def ensemble_statistics(ens: TrajectoryEnsemble, obs: Operator) -> dict:
    """Per-time mean and standard error of <obs> across trajectories."""
    n, n_rec, dim, _ = ens.conditioned_states.shape
    if obs.dim != dim:
        raise ValueError("observable dimension mismatch")
    if n < 2:
        raise ValueError("standard error undefined for a single trajectory")
    vals = np.real(np.einsum("ntij,ji->nt", ens.conditioned_states, obs.matrix))
    mean = np.mean(vals, axis=0)
    stderr = np.std(vals, axis=0, ddof=1) / math.sqrt(n)
    return {"times": ens.times, "mean": mean, "stderr": stderr}


def export_ensemble_csv(ens: TrajectoryEnsemble, obs: Operator, path) -> None:
    """Rows (trajectory_id, t, value) of <obs> along each trajectory."""
    import csv
    vals = np.real(np.einsum("ntij,ji->nt", ens.conditioned_states, obs.matrix))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trajectory_id", "t", "value"])
        for j in range(vals.shape[0]):
            for k, t in enumerate(ens.times):
                writer.writerow([j, repr(float(t)), repr(float(vals[j, k]))])


def export_ensemble_summary_json(ens: TrajectoryEnsemble, obs: Operator, path) -> None:
    """JSON summary with per-time mean and standard error."""
    import json
    stats = ensemble_statistics(ens, obs)
    payload = {
        "n_trajectories": int(ens.n_trajectories),
        "times": [float(t) for t in stats["times"]],
        "mean": [float(v) for v in stats["mean"]],
        "stderr": [float(v) for v in stats["stderr"]],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
