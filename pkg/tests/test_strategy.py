"""Tests for strategies and seeded sampling."""

import numpy as np
import pytest

from modules.errors import InvalidArgumentError
from modules.layout import build_layout
from modules.qcore import I_SIGMA_X, IDENTITY
from modules.strategy import (
    U_ONE,
    MixedStrategy,
    PureStrategy,
    canonical_u,
    classical_operator,
    classical_profile,
    paper_mixture,
    player_streams,
    pure_profile,
    sample,
    sample_indices,
    uniform_pure,
)


class TestCanonicalOperators:
    """Test the operators the canonical mixture is built from."""

    def test_canonical_u(self):
        """Test u(0) = I and u(1) = diag(i, -i)."""
        np.testing.assert_array_equal(canonical_u(0).matrix, np.eye(2))
        np.testing.assert_array_equal(canonical_u(1).matrix, np.diag([1j, -1j]))

    def test_canonical_u_rejects_other_values(self):
        """Test canonical_u only takes 0 or 1."""
        with pytest.raises(InvalidArgumentError, match="0 or 1"):
            canonical_u(2)

    def test_classical_operator(self):
        """Test cooperate keeps the bit and defect flips it."""
        assert classical_operator(0) is IDENTITY
        assert classical_operator(1) is I_SIGMA_X


class TestMixtures:
    """Test mixed strategy construction."""

    def test_paper_mixture_all_pairs(self):
        """Test the canonical mixture lifts u(b) to every owned qubit."""
        layout = build_layout("all_pairs", 4)
        mixture = paper_mixture(layout)
        assert len(mixture) == 4
        for mixed in mixture:
            assert mixed.probabilities == (0.5, 0.5)
            assert mixed.num_ops == 3
            assert all(op is IDENTITY for op in mixed.support[0])
            assert all(op is U_ONE for op in mixed.support[1])

    def test_probabilities_must_sum_to_one(self):
        """Test probabilities off by more than 1e-12 are rejected."""
        pure = uniform_pure(IDENTITY, 1)
        with pytest.raises(InvalidArgumentError, match="sum to 1"):
            MixedStrategy((pure, pure), (0.5, 0.4))

    def test_negative_probability(self):
        """Test negative weights are rejected."""
        pure = uniform_pure(IDENTITY, 1)
        with pytest.raises(InvalidArgumentError, match="non-negative"):
            MixedStrategy((pure, pure), (1.5, -0.5))

    def test_empty_support(self):
        """Test an empty support is rejected."""
        with pytest.raises(InvalidArgumentError, match="non-empty"):
            MixedStrategy((), ())

    def test_mismatched_support_sizes(self):
        """Test support entries must cover the same qubits."""
        with pytest.raises(InvalidArgumentError, match="same number"):
            MixedStrategy((uniform_pure(IDENTITY, 1), uniform_pure(IDENTITY, 2)), (0.5, 0.5))

    def test_pure_profile_checks_layout(self):
        """Test operator counts must match owned qubits."""
        layout = build_layout("all_pairs", 3)
        with pytest.raises(InvalidArgumentError, match="owns 2 qubits"):
            pure_profile([[IDENTITY], [IDENTITY, IDENTITY], [IDENTITY, IDENTITY]], layout)

    def test_classical_profile(self):
        """Test classical bits become uniform classical operators."""
        layout = build_layout("neighbor_ring", 3)
        profile = classical_profile([1, 0, 1], layout)
        assert profile[0] == PureStrategy((I_SIGMA_X, I_SIGMA_X))
        assert profile[1] == PureStrategy((IDENTITY, IDENTITY))


class TestSampling:
    """Test seeded draws from mixtures."""

    @pytest.fixture
    def mixture(self):
        return MixedStrategy((uniform_pure(IDENTITY, 1), uniform_pure(U_ONE, 1)), (0.3, 0.7))

    def test_sample_frequency(self, mixture):
        """Test draw frequencies stay within 3 sigma of the weights."""
        rng = np.random.default_rng(5)
        draws = 20_000
        hits = sum(sample(mixture, rng) == mixture.support[1] for _ in range(draws))
        sigma = np.sqrt(draws * 0.7 * 0.3)
        assert abs(hits - 0.7 * draws) < 3 * sigma

    def test_vectorized_frequency(self, mixture):
        """Test vectorized draws follow the same distribution."""
        indices = sample_indices(mixture, np.random.default_rng(6), 100_000)
        sigma = np.sqrt(100_000 * 0.7 * 0.3)
        assert abs(indices.sum() - 70_000) < 3 * sigma

    def test_pure_sampling_draws_nothing(self):
        """Test a one-point mixture returns its only entry."""
        pure = uniform_pure(U_ONE, 2)
        mixed = MixedStrategy((pure,), (1.0,))
        assert sample(mixed, np.random.default_rng(0)) is pure
        assert not sample_indices(mixed, np.random.default_rng(0), 10).any()

    def test_player_streams_deterministic(self, mixture):
        """Test the same seed reproduces every player's draws."""
        first = [sample_indices(mixture, rng, 50) for rng in player_streams(42, 3)]
        second = [sample_indices(mixture, rng, 50) for rng in player_streams(42, 3)]
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)
        assert not np.array_equal(first[0], first[1])
