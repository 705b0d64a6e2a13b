"""Dense complex linear-algebra substrate.

Operators, state vectors, and density matrices are thin immutable wrappers
around dense complex numpy arrays, plus the handful of constructions the
rest of the package is built on: tensor products, partial traces, spectral
decompositions, coherent/Fock states, and uniform position grids.

Everything is dense and aimed at desk scale (dimensions up to a few
thousand).  Arrays are frozen after construction so values can be shared
freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

#: Default tolerance for Hermiticity / unit-trace / positivity checks.
DEFAULT_TOL = 1e-9

#: Eigenvalues in [-DEFAULT_TOL, 0) are treated as integrator round-off and
#: clamped to zero (with renormalization) when validating density matrices.
EIGENVALUE_CLAMP = 1e-9


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


class Operator:
    """A dense complex square matrix on a finite-dimensional Hilbert space."""

    __slots__ = ("matrix", "dim")

    def __init__(self, matrix):
        m = _freeze(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("operator dimension must be >= 1")
        self.matrix = m
        self.dim = m.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(np.eye(dim))

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T)

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T))) <= tol

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        d = self.matrix @ self.matrix.conj().T - np.eye(self.dim)
        return float(np.max(np.abs(d))) <= tol

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    # Arithmetic returns plain Operators; scalars multiply elementwise.
    def __add__(self, other):
        return Operator(self.matrix + _as_matrix(other, self.dim))

    def __sub__(self, other):
        return Operator(self.matrix - _as_matrix(other, self.dim))

    def __mul__(self, scalar):
        return Operator(self.matrix * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return Operator(-self.matrix)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return StateVector(self.matrix @ other.amplitudes, normalize=False)
        return Operator(self.matrix @ _as_matrix(other, self.dim))

    def __repr__(self):
        return f"Operator(dim={self.dim})"


def _as_matrix(x, dim: int) -> np.ndarray:
    if isinstance(x, Operator):
        m = x.matrix
    elif isinstance(x, DensityMatrix):
        m = x.matrix
    else:
        m = np.asarray(x, dtype=complex)
    if m.shape != (dim, dim):
        raise ValueError(f"dimension mismatch: expected {(dim, dim)}, got {m.shape}")
    return m


class StateVector:
    """A normalized pure state."""

    __slots__ = ("amplitudes", "dim")

    def __init__(self, amplitudes, normalize: bool = False, tol: float = 1e-8):
        a = np.array(amplitudes, dtype=complex).reshape(-1)
        if a.size < 1:
            raise ValueError("state vector must have dimension >= 1")
        n = np.linalg.norm(a)
        if normalize:
            if n == 0:
                raise ValueError("cannot normalize the zero vector")
            a = a / n
        elif abs(n - 1.0) > tol:
            raise ValueError(f"state vector norm {n} deviates from 1 beyond tol={tol}")
        a.setflags(write=False)
        self.amplitudes = a
        self.dim = a.size

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return cls(a)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(np.kron(self.amplitudes, other.amplitudes), normalize=False)

    def __repr__(self):
        return f"StateVector(dim={self.dim})"


class DensityMatrix:
    """A Hermitian, trace-one, positive-semidefinite operator.

    Small negative eigenvalues in [-clamp, 0), as produced by integrator
    drift, are clamped to zero and the spectrum is renormalized.  Anything
    more negative raises.
    """

    __slots__ = ("matrix", "dim")

    def __init__(self, matrix, tol: float = DEFAULT_TOL, clamp: float = EIGENVALUE_CLAMP):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > tol:
            raise ValueError(f"density matrix not Hermitian: max |rho - rho^dag| = {herm}")
        tr = np.trace(m)
        if abs(tr - 1.0) > max(tol, 1e-12):
            raise ValueError(f"density matrix trace {tr} deviates from 1")
        m = 0.5 * (m + m.conj().T)
        w = np.linalg.eigvalsh(m)
        wmin = float(w[0])
        if wmin < -clamp:
            raise ValueError(f"density matrix has negative eigenvalue {wmin}")
        if wmin < 0.0:
            # clamp round-off negatives and renormalize
            w_full, v = np.linalg.eigh(m)
            w_full = np.clip(w_full, 0.0, None)
            w_full = w_full / np.sum(w_full)
            m = (v * w_full) @ v.conj().T
        self.matrix = _freeze(m)
        self.dim = m.shape[0]

    @classmethod
    def from_state(cls, psi: StateVector) -> "DensityMatrix":
        return psi.density()

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


# ---------------------------------------------------------------------------
# Pauli and qubit conveniences
# ---------------------------------------------------------------------------

SIGMA_X = Operator([[0, 1], [1, 0]])
SIGMA_Y = Operator([[0, -1j], [1j, 0]])
SIGMA_Z = Operator([[1, 0], [0, -1]])
IDENTITY_2 = Operator.identity(2)

KET_0 = StateVector.basis(2, 0)
KET_1 = StateVector.basis(2, 1)
KET_PLUS = StateVector(np.array([1, 1]) / np.sqrt(2))
KET_MINUS = StateVector(np.array([1, -1]) / np.sqrt(2))


def bloch_state(theta: float, phi: float) -> StateVector:
    """Qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return StateVector([math.cos(theta / 2.0),
                        complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)])


# ---------------------------------------------------------------------------
# Tensor products and partial trace
# ---------------------------------------------------------------------------

def tensor(a: Operator, b: Operator, *rest: Operator) -> Operator:
    """Kronecker product of two or more operators."""
    m = np.kron(a.matrix, b.matrix)
    for op in rest:
        m = np.kron(m, op.matrix)
    return Operator(m)


def tensor_state(a: StateVector, b: StateVector, *rest: StateVector) -> StateVector:
    v = np.kron(a.amplitudes, b.amplitudes)
    for s in rest:
        v = np.kron(v, s.amplitudes)
    return StateVector(v, normalize=False)


def partial_trace(rho: DensityMatrix, dims: tuple[int, int], keep: int) -> DensityMatrix:
    """Trace out one factor of a bipartite state.

    dims = (dA, dB) with dA * dB == rho.dim; keep = 0 retains subsystem A,
    keep = 1 retains subsystem B.
    """
    dA, dB = dims
    if dA * dB != rho.dim:
        raise ValueError(f"dims {dims} incompatible with density matrix of dim {rho.dim}")
    if keep not in (0, 1):
        raise ValueError("keep must be 0 (subsystem A) or 1 (subsystem B)")
    r = rho.matrix.reshape(dA, dB, dA, dB)
    if keep == 0:
        out = np.trace(r, axis1=1, axis2=3)
    else:
        out = np.trace(r, axis1=0, axis2=2)
    return DensityMatrix(out)


def partial_trace_matrix(m: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Partial trace on a raw matrix (no density-matrix validation)."""
    dA, dB = dims
    r = np.asarray(m).reshape(dA, dB, dA, dB)
    return np.trace(r, axis1=1, axis2=3) if keep == 0 else np.trace(r, axis1=0, axis2=2)


def expectation(rho: DensityMatrix, obs: Operator, tol: float = 1e-8) -> float:
    """Tr(rho O) for a Hermitian observable."""
    if not obs.is_hermitian(tol=max(tol, DEFAULT_TOL)):
        raise ValueError("observable must be Hermitian")
    if obs.dim != rho.dim:
        raise ValueError("dimension mismatch between state and observable")
    val = complex(np.trace(rho.matrix @ obs.matrix))
    if abs(val.imag) > tol * max(1.0, abs(val.real)):
        raise ValueError(f"expectation value has imaginary part {val.imag}")
    return float(val.real)


def eigh(op: Operator, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian operator.

    Returns (eigenvalues ascending, eigenvectors as columns).
    """
    if not op.is_hermitian(tol):
        raise ValueError("eigh requires a Hermitian operator")
    w, v = np.linalg.eigh(op.matrix)
    return w, v


# ---------------------------------------------------------------------------
# Fock space and coherent states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FockSpace:
    """Photon-number basis truncated at occupation n_max - 1 (dimension n_max)."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def dim(self) -> int:
        return self.n_max

    def annihilation(self) -> Operator:
        n = np.arange(1, self.n_max)
        return Operator(np.diag(np.sqrt(n), k=1))

    def number_operator(self) -> Operator:
        return Operator(np.diag(np.arange(self.n_max, dtype=float)))


def default_fock_cutoff(alpha: complex) -> int:
    """Truncation keeping coherent-state norm loss below ~1e-8 for nbar <= 30."""
    a = abs(alpha)
    return int(math.ceil(a * a + 6.0 * a + 10.0))


def coherent_state(alpha: complex, space: FockSpace | None = None,
                   truncation_tol: float = 1e-8) -> StateVector:
    """Coherent state with amplitudes e^{-|a|^2/2} a^n / sqrt(n!), renormalized.

    Raises if the truncated norm falls short of 1 by more than truncation_tol.
    """
    if space is None:
        space = FockSpace(default_fock_cutoff(alpha))
    # recurrence amps[k+1] = amps[k] * alpha / sqrt(k+1) avoids overflow in n!
    amps = np.zeros(space.n_max, dtype=complex)
    term = complex(np.exp(-0.5 * abs(alpha) ** 2))
    for k in range(space.n_max):
        amps[k] = term
        term = term * alpha / math.sqrt(k + 1)
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    if norm_sq < 1.0 - truncation_tol:
        raise ValueError(
            f"Fock truncation n_max={space.n_max} loses {1.0 - norm_sq:.3e} of the norm "
            f"for |alpha|={abs(alpha):.3f}; increase n_max")
    return StateVector(amps / math.sqrt(norm_sq))


# ---------------------------------------------------------------------------
# Position grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid1D:
    """Uniform position grid on [x_min, x_max] with n_points samples."""

    n_points: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if self.n_points < 8:
            raise ValueError("grid needs at least 8 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers of the FFT modes (hbar = 1 momenta)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def position_operator(self) -> Operator:
        return Operator(np.diag(self.x.astype(complex)))

    def momentum_operator(self) -> Operator:
        """Dense spectral momentum operator F^dag diag(k) F."""
        f = scipy.linalg.dft(self.n_points) / math.sqrt(self.n_points)
        return Operator(f.conj().T @ np.diag(self.k.astype(complex)) @ f)

    def kinetic_hamiltonian(self, mass: float) -> Operator:
        """Dense spectral kinetic operator p^2 / 2m."""
        f = scipy.linalg.dft(self.n_points) / math.sqrt(self.n_points)
        return Operator(f.conj().T @ np.diag((self.k ** 2 / (2.0 * mass)).astype(complex)) @ f)

    def gaussian_packet(self, x0: float, sigma: float, k0: float = 0.0) -> StateVector:
        """Normalized Gaussian wave packet centered at x0 with momentum k0."""
        psi = np.exp(-((self.x - x0) ** 2) / (4.0 * sigma ** 2) + 1j * k0 * self.x)
        psi = psi / (np.linalg.norm(psi))
        return StateVector(psi)

    def two_packet_cat(self, x0: float, sigma: float, k0: float = 0.0) -> StateVector:
        """Symmetric superposition of packets at +/- x0."""
        a = np.exp(-((self.x - x0) ** 2) / (4.0 * sigma ** 2) + 1j * k0 * self.x)
        b = np.exp(-((self.x + x0) ** 2) / (4.0 * sigma ** 2) - 1j * k0 * self.x)
        psi = a + b
        return StateVector(psi / np.linalg.norm(psi))
