"""Tests for register layouts."""

import pytest

from modules.errors import InvalidArgumentError, UnsupportedConfigurationError
from modules.layout import EntanglementScheme, build_layout


class TestLayoutSizes:
    """Test qubit and pair counts per scheme."""

    @pytest.mark.parametrize("n", range(2, 13))
    def test_full_counts(self, n):
        """Test the full scheme has one qubit per player and no pairs."""
        layout = build_layout(EntanglementScheme.FULL, n)
        assert layout.total_qubits == n
        assert layout.pairs == ()
        assert all(len(owned) == 1 for owned in layout.ownership)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_all_pairs_counts(self, n):
        """Test all-pairs has n(n-1) qubits and n-1 per player."""
        layout = build_layout("all_pairs", n)
        assert layout.total_qubits == n * (n - 1)
        assert len(layout.pairs) == n * (n - 1) // 2
        assert all(len(owned) == n - 1 for owned in layout.ownership)

    @pytest.mark.parametrize("n", range(3, 13))
    def test_ring_counts(self, n):
        """Test the neighbor ring has 2n qubits and 2 per player."""
        layout = build_layout("neighbor_ring", n)
        assert layout.total_qubits == 2 * n
        assert len(layout.pairs) == n
        assert all(len(owned) == 2 for owned in layout.ownership)

    @pytest.mark.parametrize("scheme", ["full", "all_pairs", "neighbor_ring"])
    def test_ownership_partitions_register(self, scheme):
        """Test every qubit has exactly one owner."""
        layout = build_layout(scheme, 5)
        owned = sorted(q for qubits in layout.ownership for q in qubits)
        assert owned == list(range(layout.total_qubits))


class TestLayoutStructure:
    """Test pair placement and ownership."""

    def test_all_pairs_three_players(self):
        """Test the three-player all-pairs register."""
        layout = build_layout("all_pairs", 3)
        assert layout.pairs == ((0, 1), (2, 3), (4, 5))
        assert layout.pair_players == ((0, 1), (0, 2), (1, 2))
        assert layout.ownership == ((0, 2), (1, 4), (3, 5))

    def test_ring_pairs(self):
        """Test neighbors are paired around the ring, closing at (n-1, 0)."""
        layout = build_layout("neighbor_ring", 4)
        assert layout.pair_players == ((0, 1), (1, 2), (2, 3), (3, 0))
        assert layout.ownership[0] == (0, 7)
        assert layout.owner_of(6) == 3
        assert layout.local_index(7) == 1

    def test_ring_order(self):
        """Test a custom ring order changes who neighbors whom."""
        layout = build_layout("neighbor_ring", 4, ring_order=[0, 2, 1, 3])
        assert layout.pair_players == ((0, 2), (2, 1), (1, 3), (3, 0))

    def test_pairs_disjoint(self):
        """Test no qubit appears in two pairs."""
        layout = build_layout("all_pairs", 6)
        flat = [q for pair in layout.pairs for q in pair]
        assert len(flat) == len(set(flat))


class TestLayoutErrors:
    """Test rejected layouts."""

    def test_too_few_players(self):
        """Test a single player is rejected."""
        with pytest.raises(InvalidArgumentError, match="At least 2"):
            build_layout("full", 1)

    def test_two_player_ring(self):
        """Test a ring of two players is unsupported."""
        with pytest.raises(UnsupportedConfigurationError, match="ring"):
            build_layout("neighbor_ring", 2)

    def test_bad_ring_order(self):
        """Test ring orders must be permutations."""
        with pytest.raises(InvalidArgumentError, match="permutation"):
            build_layout("neighbor_ring", 3, ring_order=[0, 0, 1])

    def test_ring_order_on_other_scheme(self):
        """Test ring_order is rejected outside the ring scheme."""
        with pytest.raises(InvalidArgumentError, match="ring_order"):
            build_layout("all_pairs", 3, ring_order=[0, 1, 2])

    def test_unknown_qubit(self):
        """Test owner_of rejects qubits outside the register."""
        with pytest.raises(InvalidArgumentError, match="not part"):
            build_layout("full", 3).owner_of(5)
