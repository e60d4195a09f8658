"""Two-filter query models: the 4-state electron model and the 8-state ion model.

States are numbered from 1. Odd states are the outcomes of filter A, even
states the outcomes of filter B. ``table[i-1, k-1]`` is the probability that
query "is the state k?" answers YES on an object prepared in state i.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import SpectralDecomposition, StateVector, spectral_decompose
from .errors import IndexOutOfRange, UnsupportedSize

SUPPORTED_SIZES = (4, 8)


class Answer(enum.Enum):
    YES = "YES"
    NO = "NO"

    def __bool__(self):
        return self is Answer.YES


@dataclass(frozen=True, eq=False)
class QueryModel:
    num_states: int
    table: np.ndarray

    @property
    def filter_size(self) -> int:
        return self.num_states // 2

    @property
    def cross_probability(self) -> float:
        return 2 / self.num_states

    def p(self, i: int, k: int) -> float:
        check_state(self, i)
        check_state(self, k)
        return float(self.table[i - 1, k - 1])

    def states(self) -> range:
        return range(1, self.num_states + 1)


def check_state(model: QueryModel, i: int):
    if not 1 <= i <= model.num_states:
        raise IndexOutOfRange(f"state {i} outside 1..{model.num_states}")


def same_filter(i: int, k: int) -> bool:
    return (i - k) % 2 == 0


def make_model(num_states: int) -> QueryModel:
    """Outcome table: 1 on the diagonal, 0 within a filter, 2/num_states across."""
    if num_states not in SUPPORTED_SIZES:
        raise UnsupportedSize(f"num_states must be one of {SUPPORTED_SIZES}, got {num_states}")
    idx = np.arange(1, num_states + 1)
    same = (idx[:, None] - idx[None, :]) % 2 == 0
    table = np.where(same, 0.0, 2 / num_states)
    np.fill_diagonal(table, 1.0)
    table.setflags(write=False)
    return QueryModel(num_states, table)


@dataclass(frozen=True, eq=False)
class HilbertRealization:
    """Two mutually unbiased bases of C^dim; basis vectors are the rows."""

    model: QueryModel
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis_a.shape[0]

    def state(self, i: int) -> StateVector:
        check_state(self.model, i)
        if i % 2:
            return StateVector(self.basis_a[(i - 1) // 2])
        return StateVector(self.basis_b[i // 2 - 1])

    def filter_states(self, which: str) -> list[int]:
        start = {"A": 1, "B": 2}[which]
        return list(range(start, self.model.num_states + 1, 2))

    @cached_property
    def _filters(self) -> dict:
        out = {}
        for which in ("A", "B"):
            labels = self.filter_states(which)
            op = sum(k * np.outer(self.state(k).amplitudes, self.state(k).amplitudes.conj()) for k in labels)
            d = spectral_decompose(op)
            # eigenvalues are the integer state labels up to round-off
            out[which] = SpectralDecomposition(np.rint(d.eigenvalues), d.projectors)
        return out

    def filter(self, which: str) -> SpectralDecomposition:
        """The filter as an observable whose eigenvalues are the state labels it detects."""
        return self._filters[which]

    def filter_of(self, k: int) -> SpectralDecomposition:
        return self.filter("B" if k % 2 == 0 else "A")

    def born_table(self) -> np.ndarray:
        states = np.array([self.state(i).amplitudes for i in self.model.states()])
        return np.abs(states.conj() @ states.T) ** 2


def fourier_basis(dim: int) -> np.ndarray:
    j = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)


def realize_in_hilbert(model: QueryModel) -> HilbertRealization:
    """Computational basis for filter A, discrete Fourier basis for filter B."""
    dim = model.filter_size
    return HilbertRealization(model, np.eye(dim, dtype=complex), fourier_basis(dim))


def sample_outcome(model: QueryModel, true_state: int, query: int, rng: np.random.Generator) -> Answer:
    """Answer to query "is the state ``query``?" on one freshly prepared object."""
    p = model.p(true_state, query)
    return Answer.YES if rng.random() < p else Answer.NO


def sample_yes_count(model: QueryModel, true_state: int, query: int, draws: int, rng: np.random.Generator) -> int:
    p = model.p(true_state, query)
    return int(np.count_nonzero(rng.random(draws) < p))
