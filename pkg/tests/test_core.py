import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zitter import core, querymodel
from zitter.core import HermitianOperator, SpectralDecomposition, StateVector
from zitter.errors import DegenerateOutcome, DimensionMismatch, NonHermitianInput, NotNormalized

from conftest import expm_series, random_hermitian


class TestStateVector:
    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            StateVector([1.0, 1.0])

    def test_rejects_empty(self):
        with pytest.raises(DimensionMismatch):
            StateVector([])

    def test_normalized_constructor(self):
        psi = StateVector.normalized([3, 4j])
        np.testing.assert_allclose(psi.amplitudes, [0.6, 0.8j])

    def test_immutable(self):
        psi = StateVector.basis(2, 0)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0

    def test_canonical_phase(self):
        psi = StateVector(np.array([0, 1j, 0]))
        np.testing.assert_allclose(psi.canonical().amplitudes, [0, 1, 0])
        phi = StateVector.normalized([1j, -1j])
        assert phi.canonical().amplitudes[0].real > 0
        assert phi.equals_up_to_phase(phi.canonical())


class TestHermitian:
    def test_rejects_nonhermitian(self):
        with pytest.raises(NonHermitianInput):
            core.spectral_decompose(np.array([[0, 1], [0, 0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(DimensionMismatch):
            HermitianOperator(np.zeros((2, 3)))


class TestSpectralDecompose:
    def test_scalar_operator(self):
        d = core.spectral_decompose(np.diag([3.0, 3.0]))
        np.testing.assert_allclose(d.eigenvalues, [3.0])
        np.testing.assert_allclose(d.projectors[0], np.eye(2), atol=1e-12)

    def test_pauli_x(self):
        d = core.spectral_decompose(np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(d.eigenvalues, [-1.0, 1.0])
        np.testing.assert_allclose(d.projectors[0], 0.5 * np.array([[1, -1], [-1, 1]]), atol=1e-12)
        np.testing.assert_allclose(d.projectors[1], 0.5 * np.array([[1, 1], [1, 1]]), atol=1e-12)

    def test_zero_operator(self):
        d = core.spectral_decompose(np.zeros((3, 3)))
        assert len(d) == 1

    def test_clusters_near_degenerate(self):
        d = core.spectral_decompose(np.diag([1.0, 1.0 + 1e-12, 2.0]))
        assert len(d) == 2
        assert np.trace(d.projectors[0]).real == pytest.approx(2.0)

    def test_random_4x4_reconstruction(self, rng):
        h = random_hermitian(4, rng)
        d = core.spectral_decompose(h)
        np.testing.assert_allclose(d.reconstruct(), h, atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(dim=st.integers(1, 64), seed=st.integers(0, 2 ** 32 - 1))
    def test_invariants(self, dim, seed):
        h = random_hermitian(dim, np.random.default_rng(seed))
        d = core.spectral_decompose(h)
        assert np.all(np.diff(d.eigenvalues) > 0)
        total = np.zeros((dim, dim), dtype=complex)
        for i, p in enumerate(d.projectors):
            np.testing.assert_allclose(p @ p, p, atol=1e-10)
            np.testing.assert_allclose(p, p.conj().T, atol=1e-10)
            for j in range(i + 1, len(d)):
                np.testing.assert_allclose(p @ d.projectors[j], 0, atol=1e-10)
            total += p
        np.testing.assert_allclose(total, np.eye(dim), atol=1e-10)
        np.testing.assert_allclose(d.reconstruct(), h, atol=1e-10)

    def test_diagonal_masks_match_dense(self):
        mask = SpectralDecomposition.diagonal([0, 1, 0, 1])
        dense = core.spectral_decompose(np.diag([0.0, 1.0, 0.0, 1.0]))
        np.testing.assert_allclose(mask.eigenvalues, dense.eigenvalues)
        for i in range(2):
            np.testing.assert_allclose(mask.dense_projector(i), dense.projectors[i], atol=1e-12)


class TestEvolve:
    def test_zero_hamiltonian(self, rng):
        psi = StateVector.normalized(rng.normal(size=3) + 1j)
        out = core.evolve(np.zeros((3, 3)), 2.7, psi)
        np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-14)

    def test_eigenvector_picks_up_phase(self, rng):
        h = random_hermitian(4, rng)
        lam, vecs = np.linalg.eigh(h)
        psi = StateVector(vecs[:, 2])
        out = core.evolve(h, 1.3, psi)
        np.testing.assert_allclose(out.amplitudes, np.exp(-1j * lam[2] * 1.3) * psi.amplitudes, atol=1e-10)
        assert abs(out.overlap(psi)) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_pauli_x_quarter_period(self):
        h = np.array([[0, 1], [1, 0]], dtype=complex)
        t = np.pi / 2
        expected = expm_series(-1j * h * t) @ np.array([1, 0])
        np.testing.assert_allclose(expected, [0, -1j], atol=1e-12)
        out = core.evolve(h, t, StateVector.basis(2, 0))
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)

    def test_matches_series_on_random(self, rng):
        h = random_hermitian(5, rng) / 3
        psi = StateVector.normalized(rng.normal(size=5) + 1j * rng.normal(size=5))
        out = core.evolve(h, 0.8, psi)
        np.testing.assert_allclose(out.amplitudes, expm_series(-1j * h * 0.8) @ psi.amplitudes, atol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            core.evolve(np.eye(3), 1.0, StateVector.basis(2, 0))

    @settings(max_examples=30, deadline=None)
    @given(dim=st.integers(1, 16), seed=st.integers(0, 2 ** 32 - 1),
           t=st.floats(-20, 20), s=st.floats(-20, 20))
    def test_unitarity_and_semigroup(self, dim, seed, t, s):
        rng = np.random.default_rng(seed)
        d = core.spectral_decompose(random_hermitian(dim, rng))
        psi = StateVector.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        a = core.evolve(d, t + s, psi)
        b = core.evolve(d, t, core.evolve(d, s, psi))
        assert np.linalg.norm(a.amplitudes) == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-10)


class TestBorn:
    def test_eigenvector_certain(self, rng):
        h = random_hermitian(5, rng)
        d = core.spectral_decompose(h)
        _, vecs = np.linalg.eigh(h)
        probs = core.born_probabilities(StateVector(vecs[:, 3]), d)
        expected = np.zeros(5)
        expected[3] = 1
        np.testing.assert_allclose(probs, expected, atol=1e-10)

    def test_equal_superposition(self):
        d = SpectralDecomposition.diagonal([0, 1])
        probs = core.born_probabilities(StateVector.normalized([1, 1]), d)
        np.testing.assert_allclose(probs, [0.5, 0.5], atol=1e-15)

    def test_electron_state_one_through_z_filter(self):
        real = querymodel.realize_in_hilbert(querymodel.make_model(4))
        probs = core.born_probabilities(real.state(1), real.filter("B"))
        np.testing.assert_allclose(probs, [0.5, 0.5], atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(dim=st.integers(1, 20), seed=st.integers(0, 2 ** 32 - 1))
    def test_completeness(self, dim, seed):
        rng = np.random.default_rng(seed)
        d = core.spectral_decompose(random_hermitian(dim, rng))
        psi = StateVector.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        probs = core.born_probabilities(psi, d)
        assert np.all((probs >= 0) & (probs <= 1))
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)


class TestMeasure:
    def test_eigenstate_unchanged(self, rng):
        h = random_hermitian(4, rng)
        d = core.spectral_decompose(h)
        evals, vecs = np.linalg.eigh(h)
        psi = StateVector(vecs[:, 1] * np.exp(0.4j))
        out = core.measure(psi, d, rng)
        assert out.value == pytest.approx(evals[1])
        assert out.probability == pytest.approx(1.0)
        assert out.post_state.equals_up_to_phase(psi)

    def test_collapse_to_basis(self):
        d = SpectralDecomposition.diagonal([0, 1])
        psi = StateVector.normalized([1, 1])
        out = core.measure(psi, d, np.random.default_rng(5))
        np.testing.assert_allclose(out.post_state.amplitudes, np.eye(2)[out.index])
        assert out.probability == pytest.approx(0.5)

    def test_repeat_gives_same_value(self, rng):
        d = core.spectral_decompose(random_hermitian(6, rng))
        for _ in range(100):
            psi = StateVector.normalized(rng.normal(size=6) + 1j * rng.normal(size=6))
            first = core.measure(psi, d, rng)
            second = core.measure(first.post_state, d, rng)
            assert second.value == first.value
            assert second.probability == pytest.approx(1.0, abs=1e-10)

    def test_deterministic_under_seed(self, rng):
        d = core.spectral_decompose(random_hermitian(5, rng))
        psi = StateVector.normalized(np.arange(1, 6) + 1j)
        a = [core.measure(psi, d, np.random.default_rng(11)).index for _ in range(3)]
        b = [core.measure(psi, d, np.random.default_rng(11)).index for _ in range(3)]
        assert a == b

    def test_monte_carlo_frequency(self):
        real = querymodel.realize_in_hilbert(querymodel.make_model(4))
        z = real.filter("B")
        rng = np.random.default_rng(99)
        psi = real.state(1)
        hits = sum(core.measure(psi, z, rng).value == 2.0 for _ in range(100_000))
        assert hits / 100_000 == pytest.approx(0.5, abs=0.005)

    def test_sample_outcomes_matches_born(self):
        d = SpectralDecomposition.diagonal([0, 1, 2])
        psi = StateVector.normalized(np.sqrt([0.2, 0.3, 0.5]))
        idx = core.sample_outcomes(psi, d, 200_000, np.random.default_rng(1))
        freq = np.bincount(idx, minlength=3) / idx.size
        np.testing.assert_allclose(freq, [0.2, 0.3, 0.5], atol=0.005)

    def test_degenerate_outcome_detected(self):
        # an out-of-range draw lands on a zero-probability branch
        class BrokenStream:
            def random(self, size=None):
                return 1.0

        d = SpectralDecomposition(np.array([0.0, 1.0]), (np.array([1.0, 1.0]), np.array([0.0, 0.0])))
        with pytest.raises(DegenerateOutcome):
            core.measure(StateVector.basis(2, 0), d, BrokenStream())
