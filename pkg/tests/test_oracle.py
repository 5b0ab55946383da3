import os
import sys
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.belief import Belief, filter_update
from src.errors import BudgetExceeded, ContractViolation, OracleMismatch
from src.models import Assignment
from src.oracle import (
    CheckResult,
    assert_calibrated,
    enumerate_filter,
    exhaustive_partition,
    exhaustive_schedule,
    integer_partitions,
    mc_success_estimate,
    random_assignment,
    random_belief,
    restricted_growth_strings,
    sample_observation,
    total_variation,
)
from src.oracle.calibration import (
    check_dp,
    check_filter,
    check_greedy,
    check_montecarlo,
    check_pima,
)
from src.schedulers import frame_efficiency, group_success_probability, pima_baseline_schedule
from src.traffic import rng_fork


class TestExhaustiveSchedule:

    def test_single_user(self):
        assignment, eta = exhaustive_schedule(Belief.point_mass((1,), capacity=1), 1, 0.1)
        assert assignment.q == (1,)
        assert eta == pytest.approx(1 / 1.1)

    def test_sure_actives_get_own_slots(self):
        assignment, eta = exhaustive_schedule(Belief.point_mass((1, 1), capacity=1), 2, 0.1)
        assert assignment.q == (1, 2)
        assert eta == pytest.approx(0.9524, abs=1e-4)

    def test_negative_correlation_shares_slot(self):
        belief = Belief.from_support({(1, 0): 1.0, (0, 1): 1.0}, 2, 1)
        assignment, eta = exhaustive_schedule(belief, 1, 0.1)
        assert assignment.q == (1, 1)
        assert eta == pytest.approx(0.9091, abs=1e-4)

    def test_over_budget(self):
        with pytest.raises(BudgetExceeded):
            exhaustive_schedule(Belief.point_mass((1, 0, 0, 0, 0), capacity=1), 1, 0.1)

    def test_restricted_growth_strings_count_set_partitions(self):
        # Bell numbers.
        assert len(list(restricted_growth_strings(3, 3))) == 5
        assert len(list(restricted_growth_strings(4, 4))) == 15
        assert len(list(restricted_growth_strings(4, 2))) == 8


class TestExhaustivePartition:

    def test_single_active(self):
        assignment, _ = exhaustive_partition(1, 5, 0.1)
        assert assignment.q == (1, 1, 1, 1, 1)

    def test_all_active(self):
        assignment, eta = exhaustive_partition(5, 5, 0.1)
        assert assignment.l2 == 5
        assert eta == pytest.approx(5 / 5.1)

    def test_baseline_reaches_optimum(self):
        for nu in (2, 3, 4):
            baseline = pima_baseline_schedule(nu, 5, 0.1)
            probs = [group_success_probability(len(g), 5, nu) for g in baseline.groups()]
            _, best_eta = exhaustive_partition(nu, 5, 0.1)
            assert frame_efficiency(probs, 0.1) == pytest.approx(best_eta, abs=1e-12)

    def test_integer_partitions(self):
        assert len(list(integer_partitions(5))) == 7


class TestEnumerateFilter:

    def test_point_mass_cases_agree(self):
        prior = Belief.point_mass((1, 1), capacity=2)
        assignment = Assignment(q=(1, 1))
        obs = sample_observation(rng_fork(1, 0), prior, assignment, 0.0)
        exact = enumerate_filter(prior, assignment, obs, 0.0)
        fast = filter_update(prior, assignment, obs, 0.0, prune_epsilon=0.0)
        assert exact.support() == fast.support() == {(1, 1): 1.0}

    def test_random_instances_agree(self):
        rng = rng_fork(5, 0)
        for _ in range(100):
            prior = random_belief(rng, 2, 2)
            assignment = random_assignment(rng, 2)
            mean = float(rng.uniform(0.05, 1.0))
            obs = sample_observation(rng, prior, assignment, mean)
            fast = filter_update(prior, assignment, obs, mean, prune_epsilon=0.0)
            exact = enumerate_filter(prior, assignment, obs, mean)
            assert total_variation(fast, exact) <= 1e-12


class TestMonteCarlo:

    def test_half_case(self):
        belief = Belief.from_support(
            {(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0, (1, 1): 1.0}, 2, 1
        )
        estimate = mc_success_estimate(belief, (1, 1), 1, 10**4, rng_fork(3, 0))
        assert 0.48 <= estimate <= 0.52

    def test_sure_success(self):
        belief = Belief.point_mass((1, 0), capacity=1)
        assert mc_success_estimate(belief, (1, 2), 1, 10**4, rng_fork(3, 0)) == 1.0

    def test_no_actives(self):
        belief = Belief.point_mass((0, 0), capacity=1)
        assert mc_success_estimate(belief, (1, 1), 1, 10**4, rng_fork(3, 0)) == 0.0

    def test_too_few_samples(self):
        belief = Belief.point_mass((1, 0), capacity=1)
        with pytest.raises(ContractViolation):
            mc_success_estimate(belief, (1, 2), 1, 100, rng_fork(3, 0))


class TestCalibration:

    def test_filter_suite_passes(self):
        result = check_filter(2024, cases=((2, 2, 30),))
        assert result.passed, result.line()

    def test_dp_suite_passes(self):
        result = check_dp(2024, instances=20)
        assert result.passed, result.line()

    def test_pima_suite_passes(self):
        assert check_pima().passed

    def test_greedy_never_beats_exhaustive(self):
        result = check_greedy(2024, instances=200)
        assert result.passed, result.line()
        assert result.instances == 200

    def test_montecarlo_suite_passes(self):
        result = check_montecarlo(2024)
        assert result.passed, result.line()

    def test_failed_check_raises(self):
        bad = CheckResult(name="demo", passed=False, instances=1, max_error=1.0, tolerance=0.0)
        assert bad.line().startswith("[FAIL] demo")
        with pytest.raises(OracleMismatch):
            assert_calibrated([bad])
