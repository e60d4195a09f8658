"""Reversible propositional oracle and the trembling-input satisfiability test.

The processor acts on C^(2^(n+1)) with basis index ``b * 2**n + x``: ``x`` is
the input assignment and ``b`` the output bit. Loading the program fixes the
permutation ``(x, b) -> (x, b XOR P(x))``.

Instead of a classical input, the register is prepared in the superposition
with real amplitudes ``sqrt(p_x(theta))``, where

    p_x(theta) = (1 + eps * cos(w_x * theta)) / Z(theta)

and the frequencies ``w_x`` are distinct. The probability of reading output
bit 1 is then

    f(theta) = (|S| + eps * C_S(theta)) / (2**n + eps * C_all(theta)),
    C_T(theta) = sum_{x in T} cos(w_x * theta),

which is constant in theta exactly when the satisfying set S is empty
(f = 0) or everything (f = 1).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import SpectralDecomposition, StateVector, born_probabilities, measure, sample_outcomes
from .errors import BadEpsilon, BadSampleCount, DimensionMismatch, IndexOutOfRange, InfeasibleRequest, VariableLimit
from .formula import TABLE_VAR_CAP, TruthTable

DECISION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GedankenComputer:
    n: int
    truth: TruthTable
    oracle: np.ndarray  # oracle[i] is the image of basis index i

    @property
    def dim(self) -> int:
        return 2 ** (self.n + 1)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        out = np.empty_like(amplitudes)
        out[self.oracle] = amplitudes
        return out

    def matrix(self) -> np.ndarray:
        """Dense permutation matrix; only sensible for small n."""
        mat = np.zeros((self.dim, self.dim))
        mat[self.oracle, np.arange(self.dim)] = 1.0
        return mat

    def flips(self) -> np.ndarray:
        """Boolean mask over inputs: does the oracle send (x, 0) into the b=1 half?"""
        return self.oracle[: 2 ** self.n] >= 2 ** self.n


def build_computer(table: TruthTable, cap: int = TABLE_VAR_CAP) -> GedankenComputer:
    if table.n > cap:
        raise VariableLimit(f"{table.n} variables exceeds the cap {cap}")
    size = 2 ** table.n
    idx = np.arange(2 * size)
    x, b = idx % size, idx // size
    oracle = (b ^ table.bits[x].astype(np.int64)) * size + x
    oracle.setflags(write=False)
    return GedankenComputer(table.n, table, oracle)


@lru_cache(maxsize=None)
def output_bit_observable(n: int) -> SpectralDecomposition:
    """Diagonal observable reading the output bit; eigenvalues [0, 1]."""
    return SpectralDecomposition.diagonal(np.arange(2 ** (n + 1)) >> n)


def classical_run(gc: GedankenComputer, x: int, rng: Optional[np.random.Generator] = None) -> bool:
    """Load basis input (x, b=0), run the processor, measure the output bit."""
    if not 0 <= x < 2 ** gc.n:
        raise IndexOutOfRange(f"assignment {x} outside 0..{2 ** gc.n - 1}")
    psi = StateVector.basis(gc.dim, x)
    out = StateVector(gc.apply(psi.amplitudes))
    outcome = measure(out, output_bit_observable(gc.n), rng if rng is not None else np.random.default_rng(0))
    return outcome.value == 1.0


@dataclass(frozen=True, eq=False)
class TrembleSchedule:
    n: int
    epsilon: float
    frequencies: np.ndarray = field(default=None)

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise BadEpsilon(f"epsilon must lie in [0, 1), got {self.epsilon}")
        freqs = self.frequencies
        freqs = np.arange(1, 2 ** self.n + 1, dtype=float) if freqs is None else np.asarray(freqs, dtype=float)
        if freqs.shape != (2 ** self.n,):
            raise DimensionMismatch(f"need {2 ** self.n} frequencies, got {freqs.shape}")
        freqs.setflags(write=False)
        object.__setattr__(self, "frequencies", freqs)

    def with_top_frequencies(self, inputs) -> "TrembleSchedule":
        """Swap frequencies so ``inputs`` receive the highest ones."""
        freqs = self.frequencies.copy()
        top = np.sort(freqs)[::-1]
        for rank, x in enumerate(inputs):
            j = int(np.flatnonzero(freqs == top[rank])[0])
            freqs[[x, j]] = freqs[[j, x]]
        return replace(self, frequencies=freqs)

    def weights(self, theta):
        """Return (p, dp/dtheta); a vector for scalar theta, rows per theta otherwise."""
        theta = np.asarray(theta, dtype=float)
        phase = np.multiply.outer(theta, self.frequencies)
        g = 1.0 + self.epsilon * np.cos(phase)
        dg = -self.epsilon * self.frequencies * np.sin(phase)
        z = g.sum(axis=-1, keepdims=True)
        dz = dg.sum(axis=-1, keepdims=True)
        return g / z, (dg * z - g * dz) / z ** 2


def tremble_state(sched: TrembleSchedule, theta: float) -> StateVector:
    """Input superposition with amplitudes sqrt(p_x(theta)), all strictly positive."""
    p, _ = sched.weights(theta)
    return StateVector(np.sqrt(p).astype(complex))


def _check(gc: GedankenComputer, sched: TrembleSchedule):
    if gc.n != sched.n:
        raise DimensionMismatch(f"computer has n={gc.n}, schedule has n={sched.n}")


def processor_output(gc: GedankenComputer, sched: TrembleSchedule, theta: float) -> StateVector:
    """State after the oracle acts on tremble_state(theta) with output bit 0."""
    _check(gc, sched)
    psi = np.zeros(gc.dim, dtype=complex)
    psi[: 2 ** gc.n] = tremble_state(sched, theta).amplitudes
    return StateVector(gc.apply(psi))


def output_expectation(gc: GedankenComputer, sched: TrembleSchedule, theta: float) -> float:
    """Probability that the output bit reads 1, by state-vector simulation."""
    probs = born_probabilities(processor_output(gc, sched, theta), output_bit_observable(gc.n))
    return float(probs[1])


def output_derivative(gc: GedankenComputer, sched: TrembleSchedule, theta: float) -> float:
    """d f / d theta by the quotient rule.

    The oracle maps basis inputs to basis outputs and the amplitudes are real,
    so f is linear in the weights p_x and f' = sum over flipping x of p_x'.
    """
    _check(gc, sched)
    _, dp = sched.weights(theta)
    return float(np.sum(dp[gc.flips()]))


def scan(gc: GedankenComputer, sched: TrembleSchedule, thetas, chunk: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (f, f') over an array of theta values."""
    _check(gc, sched)
    thetas = np.asarray(thetas, dtype=float)
    mask = gc.flips()
    f = np.empty(thetas.size)
    df = np.empty(thetas.size)
    for start in range(0, thetas.size, chunk):
        p, dp = sched.weights(thetas[start:start + chunk])
        f[start:start + chunk] = p[:, mask].sum(axis=1)
        df[start:start + chunk] = dp[:, mask].sum(axis=1)
    return f, df


def closed_form_expectation(table: TruthTable, sched: TrembleSchedule, theta):
    theta = np.asarray(theta, dtype=float)
    cos = np.cos(np.multiply.outer(theta, sched.frequencies))
    num = table.satisfying_count + sched.epsilon * cos[..., table.bits].sum(axis=-1)
    den = 2 ** table.n + sched.epsilon * cos.sum(axis=-1)
    return num / den


def closed_form_derivative(table: TruthTable, sched: TrembleSchedule, theta):
    theta = np.asarray(theta, dtype=float)
    phase = np.multiply.outer(theta, sched.frequencies)
    cos, dsin = np.cos(phase), sched.frequencies * np.sin(phase)
    eps = sched.epsilon
    num = table.satisfying_count + eps * cos[..., table.bits].sum(axis=-1)
    den = 2 ** table.n + eps * cos.sum(axis=-1)
    dnum = -eps * dsin[..., table.bits].sum(axis=-1)
    dden = -eps * dsin.sum(axis=-1)
    return (dnum * den - num * dden) / den ** 2


class Verdict(enum.Enum):
    UNSAT = "UNSAT"
    SAT = "SAT"
    TAUTOLOGY = "TAUTOLOGY"

    @property
    def satisfiable(self) -> bool:
        return self is not Verdict.UNSAT


@dataclass(frozen=True, eq=False)
class ZitterVerdict:
    outcome: Verdict
    thetas: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    tol: float

    @property
    def trembles(self) -> bool:
        return bool(np.max(np.abs(self.derivatives)) >= self.tol)


def decide_sat(gc: GedankenComputer, sched: TrembleSchedule, num_samples: int = 32,
               rng: Optional[np.random.Generator] = None, tol: float = DECISION_TOL) -> ZitterVerdict:
    """Sample theta uniformly on [0, 2 pi) and read value and derivative.

    A trembling output (some |f'| >= tol) proves a witness exists. A still
    output is either f = 0 (no witness) or f = 1 (every input is a witness).
    """
    if num_samples < 3:
        raise BadSampleCount(f"num_samples must be >= 3, got {num_samples}")
    _check(gc, sched)
    rng = rng if rng is not None else np.random.default_rng(0)
    thetas = rng.uniform(0.0, 2 * np.pi, num_samples)
    values = np.array([output_expectation(gc, sched, t) for t in thetas])
    derivs = np.array([output_derivative(gc, sched, t) for t in thetas])

    if np.max(np.abs(derivs)) >= tol:
        outcome = Verdict.SAT
    elif np.max(np.abs(values)) < tol:
        outcome = Verdict.UNSAT
    elif np.min(values) > 1 - tol:
        outcome = Verdict.TAUTOLOGY
    else:
        # still at every sample yet strictly between 0 and 1: unlucky thetas
        outcome = Verdict.SAT
    return ZitterVerdict(outcome, thetas, values, derivs, tol)


def estimate_expectation(gc: GedankenComputer, sched: TrembleSchedule, theta: float, shots: int,
                         rng: np.random.Generator) -> float:
    """Fraction of ``shots`` output-bit measurements that read 1."""
    if shots < 1:
        raise BadSampleCount(f"shots must be >= 1, got {shots}")
    obs = output_bit_observable(gc.n)
    idx = sample_outcomes(processor_output(gc, sched, theta), obs, shots, rng)
    return float(np.count_nonzero(obs.eigenvalues[idx] == 1.0)) / shots


def binomial_stderr(p_hat: float, shots: int) -> float:
    return float(np.sqrt(max(p_hat * (1 - p_hat), 0.0) / shots))


@dataclass(frozen=True)
class MagnitudeReport:
    n: int
    satisfying_count: int
    epsilon: float
    grid: int
    witnesses: tuple
    witness_frequencies: tuple
    max_value: float
    max_derivative: float

    @property
    def value_bounds(self) -> tuple[float, float]:
        """Range of f over all theta when |S| = satisfying_count."""
        s, e, size = self.satisfying_count, self.epsilon, 2 ** self.n
        return s * (1 - e) / (size * (1 + e)), s * (1 + e) / (size * (1 - e))

    @property
    def predicted_derivative(self) -> float:
        """Leading-order peak of |f'|: eps * sum of witness frequencies / 2**n."""
        return self.epsilon * sum(self.witness_frequencies) / 2 ** self.n


def derivative_magnitude_study(n: int, satisfying_count: int, sched: Optional[TrembleSchedule] = None,
                               grid: Optional[int] = None, *, epsilon: float = 0.5, amplify: bool = True,
                               rng: Optional[np.random.Generator] = None) -> MagnitudeReport:
    """Plant ``satisfying_count`` witnesses and measure peak |f| and |f'| on a theta grid.

    With ``amplify`` the witnesses take the highest trembling frequencies, which
    lifts the derivative peak to about eps * w / 2**n while the value stays
    of order |S| / 2**n.
    """
    if n < 0 or n > TABLE_VAR_CAP:
        raise InfeasibleRequest(f"n={n} outside 0..{TABLE_VAR_CAP}")
    if not 0 <= satisfying_count <= 2 ** n:
        raise InfeasibleRequest(f"cannot plant {satisfying_count} witnesses among {2 ** n} inputs")
    rng = rng if rng is not None else np.random.default_rng(0)
    sched = sched if sched is not None else TrembleSchedule(n, epsilon)
    if sched.n != n:
        raise DimensionMismatch(f"schedule has n={sched.n}, study asks for n={n}")

    witnesses = np.sort(rng.choice(2 ** n, size=satisfying_count, replace=False))
    bits = np.zeros(2 ** n, dtype=bool)
    bits[witnesses] = True
    if amplify:
        sched = sched.with_top_frequencies(witnesses)
    gc = build_computer(TruthTable(n, bits))

    grid = grid if grid is not None else int(16 * np.max(sched.frequencies))
    thetas = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    f, df = scan(gc, sched, thetas)
    return MagnitudeReport(
        n=n, satisfying_count=satisfying_count, epsilon=sched.epsilon, grid=grid,
        witnesses=tuple(int(w) for w in witnesses),
        witness_frequencies=tuple(float(sched.frequencies[w]) for w in witnesses),
        max_value=float(np.max(np.abs(f))), max_derivative=float(np.max(np.abs(df))),
    )
