"""Tests for closed forms and deviation searches."""

import itertools
import math

import pytest

from modules.errors import InvalidArgumentError, NoClosedFormError, UnsupportedConfigurationError
from modules.engine import expected_payoffs
from modules.equilibrium import (
    DEVIATION_TOLERANCE,
    SearchConfig,
    SearchSpace,
    best_response,
    best_response_gap,
    closed_form_payoff,
    covered_configurations,
    deviation_candidates,
    deviation_payoff,
    product_grid,
    pure_equilibrium_search,
    verify_deviation_independence,
)
from modules.payoff import GameSpec
from modules.qcore import I_SIGMA_X, IDENTITY, build_operator
from modules.strategy import U_ONE, PureStrategy, degenerate, paper_mixture, uniform_pure

SMALL_SEARCH = SearchConfig(grid=4, random_samples=16, seed=3, max_grid_points=128)


def covered_specs(n, a=2.0):
    for scheme, rule in covered_configurations():
        if scheme.value == "neighbor_ring" and n < 3:
            continue
        yield GameSpec(n=n, a=a, scheme=scheme, interpretation=rule)


class TestClosedForm:
    """Test closed-form equilibrium payoffs."""

    @pytest.mark.parametrize("a", [1.5, 2.0, 3.5])
    def test_all_pairs_four_players(self, a):
        """Test all-pairs all-or-none with four players is (1+7a)/8."""
        assert closed_form_payoff("all_pairs", "all_or_none", 4, a) == pytest.approx((1 + 7 * a) / 8)

    def test_ring_any_size(self):
        """Test the ring pays (1+3a)/4 for seven players."""
        assert closed_form_payoff("neighbor_ring", "all_or_none", 7, 2.0) == pytest.approx(1.75)

    def test_all_pairs_approaches_optimum(self):
        """Test all-pairs all-or-none approaches a for many players."""
        assert closed_form_payoff("all_pairs", "all_or_none", 40, 2.0) == pytest.approx(2.0, abs=1e-10)

    @pytest.mark.parametrize("a", [1.1, 2.0, 2.9])
    def test_three_player_schemes_agree(self, a):
        """Test all-pairs and ring coincide for three players."""
        assert closed_form_payoff("all_pairs", "all_or_none", 3, a) == pytest.approx(
            closed_form_payoff("neighbor_ring", "all_or_none", 3, a)
        )

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_matches_engine(self, n):
        """Test every covered closed form against exact enumeration."""
        for a in (1.25, 2.0, n - 0.25):
            for spec in covered_specs(n, a):
                layout = spec.layout()
                report = expected_payoffs(paper_mixture(layout), spec, layout)
                expected = closed_form_payoff(spec.scheme, spec.interpretation, n, a)
                assert max(abs(p - expected) for p in report.expected) < 1e-10

    def test_majority_has_no_closed_form(self):
        """Test uncovered rules point to the engine."""
        with pytest.raises(NoClosedFormError, match="engine"):
            closed_form_payoff("all_pairs", "majority", 4, 2.0)
        with pytest.raises(LookupError):
            closed_form_payoff("full", "partial", 4, 2.0)

    def test_multiplier_out_of_range(self):
        """Test closed forms need 1 < a < n."""
        with pytest.raises(InvalidArgumentError, match="1 < a < n"):
            closed_form_payoff("full", "direct", 3, 3.0)

    def test_two_player_ring(self):
        """Test a two-player ring is unsupported."""
        with pytest.raises(UnsupportedConfigurationError):
            closed_form_payoff("neighbor_ring", "partial", 2, 1.5)


class TestDeviationIndependence:
    """Test the deviator's payoff is constant against the canonical mixture."""

    def test_full_three_players(self):
        """Test deviator 1 always gets (1+a)/2 with full entanglement."""
        spec = GameSpec(n=3, a=2.0)
        report = verify_deviation_independence(spec, spec.layout(), 1, SMALL_SEARCH)
        assert report.baseline == pytest.approx(1.5, abs=1e-12)
        assert report.max_abs_deviation < DEVIATION_TOLERANCE
        assert report.payoff_is_constant

    def test_different_operators_per_bit(self):
        """Test distinct operators on a player's two bits leave 1.75 unchanged."""
        spec = GameSpec(n=3, a=2.0, scheme="all_pairs", interpretation="all_or_none")
        layout = spec.layout()
        deviation = PureStrategy((build_operator(0.7, 1.9, 4.2), build_operator(2.5, 0.3, 5.9)))
        payoff = deviation_payoff(spec, layout, paper_mixture(layout), 0, deviation)
        assert payoff == pytest.approx(1.75, abs=1e-9)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_covered_configurations(self, n):
        """Test every covered configuration for deviator 0."""
        for spec in covered_specs(n):
            report = verify_deviation_independence(spec, spec.layout(), 0, SMALL_SEARCH)
            assert report.max_abs_deviation < DEVIATION_TOLERANCE, spec

    def test_two_player_full(self):
        """Test the two-player full game is covered too."""
        spec = GameSpec(n=2, a=1.5)
        report = verify_deviation_independence(spec, spec.layout(), 1, SMALL_SEARCH)
        assert report.max_abs_deviation < DEVIATION_TOLERANCE

    def test_mixture_against_itself(self):
        """Test playing the mixture itself gains exactly nothing."""
        spec = GameSpec(n=4, a=2.0, scheme="all_pairs", interpretation="all_or_none")
        layout = spec.layout()
        mixture = paper_mixture(layout)
        baseline = expected_payoffs(mixture, spec, layout).expected[2]
        assert deviation_payoff(spec, layout, mixture, 2, mixture[2]) == baseline

    def test_relabelled_ring(self):
        """Test independence on a ring with a non-identity order."""
        spec = GameSpec(n=5, a=2.0, scheme="neighbor_ring", interpretation="partial")
        layout = spec.layout(ring_order=[4, 1, 3, 0, 2])
        report = verify_deviation_independence(spec, layout, 3, SMALL_SEARCH)
        assert report.baseline == pytest.approx(1.5, abs=1e-12)
        assert report.max_abs_deviation < DEVIATION_TOLERANCE

    def test_workers_give_same_report(self):
        """Test threaded evaluation reports the same maximum."""
        spec = GameSpec(n=3, a=2.0, scheme="all_pairs", interpretation="partial")
        one = verify_deviation_independence(spec, spec.layout(), 0, SMALL_SEARCH, workers=1)
        three = verify_deviation_independence(spec, spec.layout(), 0, SMALL_SEARCH, workers=3)
        assert one == three


class TestBestResponseGap:
    """Test gaps against fixed profiles."""

    @pytest.fixture
    def spec(self):
        return GameSpec(n=3, a=2.0)

    def uniform_profile(self, op, spec):
        return [degenerate(uniform_pure(op, 1)) for _ in range(spec.n)]

    def test_all_defect_classical_space(self, spec):
        """Test mutual defection is a classical equilibrium."""
        search = SearchConfig(space="classical")
        gap = best_response_gap(spec, spec.layout(), self.uniform_profile(I_SIGMA_X, spec), 0, search)
        assert gap == 0.0

    def test_all_defect_full_space(self, spec):
        """Test u(1) exploits mutual defection once quantum operators are allowed."""
        gap = best_response_gap(spec, spec.layout(), self.uniform_profile(I_SIGMA_X, spec), 0, SMALL_SEARCH)
        assert gap == pytest.approx(4 / 3, abs=1e-9)

    def test_all_cooperate(self, spec):
        """Test cooperation leaves a defection temptation of 1 - a/n."""
        gap = best_response_gap(spec, spec.layout(), self.uniform_profile(IDENTITY, spec), 0, SMALL_SEARCH)
        assert gap >= (1 - 2.0 / 3) - 1e-6

    @pytest.mark.parametrize("scheme, rule", [("full", "direct"), ("all_pairs", "all_or_none")])
    def test_mixture_gap_zero(self, scheme, rule):
        """Test no deviation improves on the canonical mixture."""
        spec = GameSpec(n=4, a=2.0, scheme=scheme, interpretation=rule)
        layout = spec.layout()
        assert best_response_gap(spec, layout, paper_mixture(layout), 1, SMALL_SEARCH) < DEVIATION_TOLERANCE

    def test_best_response_mixes_operators_per_qubit(self):
        """Test a deviator facing a cooperator and a defector uses different operators per link."""
        spec = GameSpec(n=3, a=2.0, scheme="all_pairs", interpretation="partial")
        layout = spec.layout()
        cooperate = degenerate(uniform_pure(IDENTITY, 2))
        defect = degenerate(uniform_pure(I_SIGMA_X, 2))
        profile = [cooperate, cooperate, defect]
        report = best_response(spec, layout, profile, 0, SearchConfig(grid=3, random_samples=0))

        # qubit 0 is linked to player 1, qubit 2 to player 2
        mixed = deviation_payoff(spec, layout, profile, 0, PureStrategy((I_SIGMA_X, U_ONE)))
        assert mixed - report.baseline == pytest.approx(2 / 3, abs=1e-12)
        assert report.max_gain == pytest.approx(2 / 3, abs=1e-9)
        assert best_response_gap(spec, layout, profile, 0, SearchConfig(grid=3, random_samples=0)) > 0.6

    def test_player_out_of_range(self, spec):
        """Test the deviator index is checked."""
        with pytest.raises(InvalidArgumentError, match="out of range"):
            best_response_gap(spec, spec.layout(), paper_mixture(spec.layout()), 3)


class TestSearchConfig:
    """Test candidate generation."""

    def test_full_candidate_count(self):
        """Test anchor products, the per-qubit grid and random draws are all included."""
        candidates = deviation_candidates(2, SearchConfig(grid=3, random_samples=10))
        assert len(candidates) == 3 ** 2 + 27 ** 2 + 10
        assert all(len(c) == 2 for c in candidates)

    def test_operators_vary_per_qubit(self):
        """Test every per-qubit pairing of the canonical operators is a candidate."""
        candidates = {tuple(c) for c in deviation_candidates(2, SearchConfig(grid=2, random_samples=0))}
        for ops in itertools.product((IDENTITY, U_ONE, I_SIGMA_X), repeat=2):
            assert ops in candidates
        assert (IDENTITY, I_SIGMA_X) in candidates

    def test_product_grid_thinning(self):
        """Test the capped product grid keeps both corners and mixes operators."""
        ops = [build_operator(t, 0.0, 0.0) for t in (0.0, 1.0, 2.0)]
        grid = product_grid(ops, 4, max_points=10)
        assert len(grid) == len(set(grid)) == 10
        assert grid[0] == (ops[0],) * 4
        assert grid[-1] == (ops[-1],) * 4
        assert any(len(set(assignment)) > 1 for assignment in grid)
        assert len(product_grid(ops, 2)) == 9

    def test_grid_cap(self):
        """Test max_grid_points thins the grid."""
        candidates = deviation_candidates(1, SearchConfig(grid=9, random_samples=0, max_grid_points=50))
        assert len(candidates) == 3 + 50

    def test_anchor_products_share_the_cap(self):
        """Test anchor products beyond max_grid_points are thinned too, keeping both corners."""
        candidates = deviation_candidates(3, SearchConfig(grid=1, random_samples=0, max_grid_points=5))
        assert len(candidates) == 5 + 1
        assert tuple(candidates[0]) == (IDENTITY,) * 3
        assert tuple(candidates[4]) == (I_SIGMA_X,) * 3

    def test_classical_candidates(self):
        """Test the classical space enumerates every bit assignment."""
        candidates = deviation_candidates(3, SearchConfig(space=SearchSpace.CLASSICAL))
        assert len(candidates) == 8
        assert all(op in (IDENTITY, I_SIGMA_X) for c in candidates for op in c)

    def test_random_draws_reproducible(self):
        """Test the Sobol draws depend only on the seed."""
        first = deviation_candidates(2, SearchConfig(grid=1, random_samples=8, seed=5))
        second = deviation_candidates(2, SearchConfig(grid=1, random_samples=8, seed=5))
        assert first == second
        assert all(0.0 <= op.theta <= math.pi for c in first for op in c)

    def test_invalid_grid(self):
        """Test a grid needs at least one point."""
        with pytest.raises(InvalidArgumentError, match="grid"):
            SearchConfig(grid=0)

    def test_report_serializes(self):
        """Test the report dictionary carries the search settings."""
        spec = GameSpec(n=3, a=2.0)
        report = verify_deviation_independence(spec, spec.layout(), 0, SearchConfig(grid=2, random_samples=4))
        data = report.to_dict()
        assert data["search"]["space"] == "full"
        assert data["candidates"] == 3 + 8 + 4
        assert set(data["argmax_ops"][0]) == {"theta", "phi", "alpha"}


class TestPureEquilibriumSearch:
    """Test the best-effort pure equilibrium scan."""

    def test_scan_reports_smallest_gain(self):
        """Test the scan covers anchors plus grid and reports a non-negative gain."""
        spec = GameSpec(n=3, a=2.0)
        report = pure_equilibrium_search(spec, spec.layout(), SearchConfig(grid=2, random_samples=4))
        assert report.profiles_checked == 3 + 8
        assert report.best_gain >= 0.0
        assert report.found == (report.best_gain <= DEVIATION_TOLERANCE)
