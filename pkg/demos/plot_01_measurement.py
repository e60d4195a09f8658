"""
Measurement on a small Hilbert space
====================================

Build a random Hermitian operator, decompose it, evolve a state and measure.
"""

import numpy as np

from zitter import core

rng = np.random.default_rng(0)

# a random 4x4 Hermitian operator with a doubly degenerate eigenvalue
q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
h = q @ np.diag([-1.0, 0.5, 0.5, 2.0]) @ q.conj().T
decomp = core.spectral_decompose(h)
print("distinct eigenvalues:", decomp.eigenvalues)
print("reconstruction error:", np.abs(decomp.reconstruct() - h).max())

# evolve |0> for a while and look at the outcome distribution
psi = core.evolve(decomp, 0.7, core.StateVector.basis(4, 0))
probs = core.born_probabilities(psi, decomp)
print("P(outcome):", np.round(probs, 4), "sum", probs.sum())

# energy is conserved, so the distribution does not move with t
later = core.evolve(decomp, 13.0, psi)
print("after more evolution:", np.round(core.born_probabilities(later, decomp), 4))

# one measurement collapses the state; repeating it gives the same value
first = core.measure(psi, decomp, rng)
again = core.measure(first.post_state, decomp, rng)
print("measured", first.value, "then", again.value)

# many shots reproduce the Born weights
idx = core.sample_outcomes(psi, decomp, 20_000, rng)
print("shot frequencies:", np.round(np.bincount(idx, minlength=len(decomp)) / idx.size, 4))
