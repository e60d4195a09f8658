"""Finite-dimensional state vectors, spectral decomposition, unitary evolution
and projective measurement with collapse.

Projectors are stored either as dense ``(d, d)`` matrices or, for observables
that are diagonal in the computational basis, as 1-D 0/1 masks of length ``d``.
The mask form keeps measurement of a single register bit cheap on
``2**(n+1)``-dimensional spaces where a dense projector would not fit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateOutcome, DimensionMismatch, NonHermitianInput, NotNormalized

NORM_TOL = 1e-12
CLUSTER_TOL = 1e-9
_ZERO_AMPLITUDE = 1e-12


def _as_vector(amplitudes) -> np.ndarray:
    vec = np.asarray(amplitudes, dtype=complex)
    if vec.ndim != 1:
        raise DimensionMismatch(f"amplitudes must be 1-D, got shape {vec.shape}")
    return vec


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm complex amplitude vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        vec = _as_vector(self.amplitudes)
        if vec.size < 1:
            raise DimensionMismatch("state space must have dimension >= 1")
        norm2 = float(np.vdot(vec, vec).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalized(f"squared norm is {norm2!r}, expected 1")
        vec = vec.copy()
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        vec = _as_vector(amplitudes)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise NotNormalized("cannot normalize the zero vector")
        return cls(vec / norm)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        vec = np.zeros(dim, dtype=complex)
        vec[index] = 1.0
        return cls(vec)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        _check_dims(self.dim, other.dim)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def equals_up_to_phase(self, other: "StateVector", atol: float = 1e-10) -> bool:
        return self.dim == other.dim and abs(abs(self.overlap(other)) - 1.0) <= atol

    def canonical(self) -> "StateVector":
        """Same ray, with the first nonzero amplitude made real-positive."""
        vec = self.amplitudes
        cutoff = _ZERO_AMPLITUDE * np.max(np.abs(vec))
        first = vec[np.argmax(np.abs(vec) > cutoff)]
        return StateVector(vec * (abs(first) / first))

    def __repr__(self):
        return f"StateVector(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    entries: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {mat.shape}")
        scale = max(1.0, float(np.max(np.abs(mat), initial=0.0)))
        if not np.allclose(mat, mat.conj().T, rtol=0.0, atol=NORM_TOL * scale):
            raise NonHermitianInput("operator differs from its adjoint")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct eigenvalues (ascending) with their orthogonal projectors."""

    eigenvalues: np.ndarray
    projectors: tuple

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "SpectralDecomposition":
        """Decomposition of a real diagonal observable, with mask projectors."""
        values = np.asarray(values, dtype=float)
        distinct = np.unique(values)
        masks = tuple((values == v).astype(float) for v in distinct)
        return cls(distinct, masks)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self):
        return len(self.eigenvalues)

    def project(self, index: int, vec: np.ndarray) -> np.ndarray:
        proj = self.projectors[index]
        return proj * vec if proj.ndim == 1 else proj @ vec

    def dense_projector(self, index: int) -> np.ndarray:
        proj = self.projectors[index]
        return np.diag(proj).astype(complex) if proj.ndim == 1 else proj

    def reconstruct(self) -> np.ndarray:
        return sum(a * self.dense_projector(i) for i, a in enumerate(self.eigenvalues))

    def index_of(self, value: float, atol: float = 1e-9) -> int:
        hits = np.flatnonzero(np.abs(self.eigenvalues - value) <= atol)
        if hits.size == 0:
            raise KeyError(f"no eigenvalue {value}")
        return int(hits[0])


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    value: float
    index: int
    post_state: StateVector
    probability: float


def _check_dims(a: int, b: int):
    if a != b:
        raise DimensionMismatch(f"dimension {a} does not match {b}")


def spectral_decompose(op: HermitianOperator | np.ndarray) -> SpectralDecomposition:
    """Decompose a self-adjoint operator as a sum of eigenvalue-weighted projectors.

    Eigenvalues closer than ``CLUSTER_TOL`` times the spectral radius are merged
    and their eigenvectors share one projector.
    """
    if not isinstance(op, HermitianOperator):
        op = HermitianOperator(op)
    mat = op.entries
    evals, evecs = np.linalg.eigh((mat + mat.conj().T) / 2)
    radius = float(np.max(np.abs(evals)))
    tol = CLUSTER_TOL * radius

    groups = [[0]]
    for i in range(1, evals.size):
        if evals[i] - evals[groups[-1][0]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])

    values, projectors = [], []
    for idx in groups:
        vecs = evecs[:, idx]
        values.append(float(np.mean(evals[idx])))
        projectors.append(vecs @ vecs.conj().T)
    return SpectralDecomposition(np.array(values), tuple(projectors))


def evolve(hamiltonian: HermitianOperator | SpectralDecomposition, t: float, psi0: StateVector) -> StateVector:
    """Return exp(-iHt) psi0, applying the phase exp(-i a t) on each eigenspace."""
    decomp = hamiltonian if isinstance(hamiltonian, SpectralDecomposition) else spectral_decompose(hamiltonian)
    _check_dims(decomp.dim, psi0.dim)
    out = np.zeros(psi0.dim, dtype=complex)
    for i, a in enumerate(decomp.eigenvalues):
        out += np.exp(-1j * a * t) * decomp.project(i, psi0.amplitudes)
    return StateVector(out)


def born_probabilities(psi: StateVector, decomp: SpectralDecomposition) -> np.ndarray:
    """Probability ||P_i psi||^2 of each eigenvalue, in decomposition order."""
    _check_dims(decomp.dim, psi.dim)
    probs = np.empty(len(decomp))
    for i in range(len(decomp)):
        proj = decomp.projectors[i]
        if proj.ndim == 1:
            probs[i] = float(np.sum(proj * np.abs(psi.amplitudes) ** 2))
        else:
            v = proj @ psi.amplitudes
            probs[i] = float(np.vdot(v, v).real)
    return np.clip(probs, 0.0, 1.0)


def _sample_indices(probs: np.ndarray, size, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    draws = rng.random(size)
    return np.minimum(np.searchsorted(cdf, draws, side="right"), probs.size - 1)


def measure(psi: StateVector, decomp: SpectralDecomposition, rng: np.random.Generator) -> MeasurementOutcome:
    """Projective measurement: sample an eigenvalue by the Born rule and collapse."""
    probs = born_probabilities(psi, decomp)
    i = int(_sample_indices(probs, None, rng))
    collapsed = decomp.project(i, psi.amplitudes)
    norm = np.linalg.norm(collapsed)
    if norm < _ZERO_AMPLITUDE:
        raise DegenerateOutcome(f"outcome {i} sampled with ||P psi|| = {norm:.3g}")
    post = StateVector(collapsed / norm).canonical()
    return MeasurementOutcome(float(decomp.eigenvalues[i]), i, post, float(probs[i]))


def sample_outcomes(psi: StateVector, decomp: SpectralDecomposition, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Outcome indices of ``shots`` measurements, each on a fresh copy of psi.

    Draws from the same distribution as repeated :func:`measure` calls without
    building the collapsed states.
    """
    probs = born_probabilities(psi, decomp)
    return _sample_indices(probs, shots, rng)
