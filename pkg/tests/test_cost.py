"""Tests for the entanglement cost model."""

import pytest

from modules.cost import CostQuery, compare_schemes, expected_trials, pairs_required
from modules.errors import InvalidArgumentError
from modules.layout import EntanglementScheme


class TestExpectedTrials:
    """Test trial counts per scheme."""

    def test_full(self):
        """Test full entanglement scales as beta^-n."""
        assert expected_trials(CostQuery("full", 3, 0.5)) == pytest.approx(8.0)

    def test_all_pairs(self):
        """Test all pairs need n(n-1)/(2 beta) trials."""
        assert expected_trials(CostQuery("all_pairs", 4, 0.5)) == pytest.approx(12.0)

    def test_ring(self):
        """Test the ring needs n/beta trials."""
        assert expected_trials(CostQuery(EntanglementScheme.NEIGHBOR_RING, 5, 0.25)) == pytest.approx(20.0)

    @pytest.mark.parametrize("n", [3, 6, 10])
    def test_perfect_success(self, n):
        """Test beta = 1 gives the resource counts."""
        assert expected_trials(CostQuery("full", n, 1.0)) == 1.0
        assert expected_trials(CostQuery("all_pairs", n, 1.0)) == n * (n - 1) / 2
        assert expected_trials(CostQuery("neighbor_ring", n, 1.0)) == n

    @pytest.mark.parametrize("n", range(4, 16))
    @pytest.mark.parametrize("beta", [0.05, 0.3, 0.5])
    def test_feasibility_ordering(self, n, beta):
        """Test full > all pairs > ring for n >= 4 and beta <= 1/2."""
        full = expected_trials(CostQuery("full", n, beta))
        pairs = expected_trials(CostQuery("all_pairs", n, beta))
        ring = expected_trials(CostQuery("neighbor_ring", n, beta))
        assert full > pairs > ring

    def test_ordering_reverses_near_one(self):
        """Test reliable sources make the single n-qubit state cheaper than all pairs."""
        assert expected_trials(CostQuery("full", 4, 0.9)) < expected_trials(CostQuery("all_pairs", 4, 0.9))
        assert expected_trials(CostQuery("all_pairs", 4, 0.9)) > expected_trials(CostQuery("neighbor_ring", 4, 0.9))

    @pytest.mark.parametrize("beta", [0.0, -0.1, 1.5, float("nan")])
    def test_beta_out_of_range(self, beta):
        """Test beta must lie in (0, 1]."""
        with pytest.raises(InvalidArgumentError, match="beta"):
            CostQuery("full", 3, beta)


class TestCompareSchemes:
    """Test the scheme comparison table."""

    def test_table(self):
        """Test the table lists every scheme, most expensive first."""
        table = compare_schemes(6, 0.5)
        assert list(table.columns) == ["scheme", "resources", "expected_trials"]
        assert list(table["scheme"]) == ["full", "all_pairs", "neighbor_ring"]
        assert list(table["resources"]) == [1, 15, 6]

    def test_pairs_required(self):
        """Test resource counts."""
        assert pairs_required("full", 7) == 1
        assert pairs_required("all_pairs", 7) == 21
        assert pairs_required("neighbor_ring", 7) == 7
