import math
import os
import sys
import pytest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.belief import (
    Belief,
    activation_probabilities,
    arrival_matrix,
    filter_update,
    slot_success_probability,
    transition_distribution,
)
from src.errors import ContractViolation, ObservationImpossible
from src.models import Assignment, Observation
from src.oracle import (
    enumerate_filter,
    random_assignment,
    random_belief,
    sample_observation,
    total_variation,
)
from src.traffic import rng_fork


def uniform_belief(states, n_users, capacity):
    return Belief.from_support({s: 1.0 for s in states}, n_users, capacity)


class TestTransition:

    def test_departures_only(self):
        dist = transition_distribution((1, 1), Assignment(q=(1, 2)), 0.0, 2)
        assert dist == {(0, 0): 1.0}

    def test_single_user_poisson_arrivals(self):
        dist = transition_distribution((0,), Assignment.empty(1), 0.5, 3)
        assert dist[(0,)] == pytest.approx(math.exp(-0.5), abs=1e-4)
        assert dist[(1,)] == pytest.approx(0.5 * math.exp(-0.5), abs=1e-4)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)

    def test_collision_keeps_both_packets(self):
        dist = transition_distribution((1, 1), Assignment(q=(1, 1)), 0.0, 2)
        assert dist == {(1, 1): 1.0}

    def test_overflow_lumped_at_capacity(self):
        matrix = arrival_matrix(2.0, 2)
        assert np.allclose(matrix.sum(axis=1), 1.0)
        assert matrix[2, 2] == pytest.approx(1.0)
        assert matrix[1, 0] == 0.0

    def test_state_outside_capacity_rejected(self):
        with pytest.raises(ContractViolation):
            transition_distribution((3, 0), Assignment(q=(1, 2)), 0.1, 2)


class TestFilterUpdate:

    def test_empty_system_stays_empty(self):
        prior = Belief.point_mass((0, 0), capacity=2)
        obs = Observation.initial(2, nu=0)
        posterior = filter_update(prior, Assignment.empty(2), obs, 0.3)
        assert posterior.support() == {(0, 0): 1.0}
        assert posterior.frame == 1

    def test_collision_pins_both_users(self):
        prior = uniform_belief([(0, 0), (1, 0), (0, 1), (1, 1)], 2, 1)
        assignment = Assignment(q=(1, 1))
        obs = Observation(
            nu=2,
            acks=(False, False),
            collided_slots=frozenset({1}),
            prev_assignment=assignment,
            prev_frame_len=1.1,
        )
        posterior = filter_update(prior, assignment, obs, 0.0)
        assert posterior.probability((1, 1)) == pytest.approx(1.0)

    def test_ack_and_idle_match_enumeration(self):
        prior = Belief(probs=np.full((3, 3), 1.0 / 9), capacity=2)
        assignment = Assignment(q=(1, 2))
        obs = Observation(
            nu=1,
            acks=(True, False),
            collided_slots=frozenset(),
            prev_assignment=assignment,
            prev_frame_len=2.1,
        )
        posterior = filter_update(prior, assignment, obs, 0.3, prune_epsilon=0.0)
        assert posterior.is_normalized()
        for state in posterior.support():
            assert sum(1 for k in state if k > 0) == 1

        exact = enumerate_filter(prior, assignment, obs, 0.3)
        assert total_variation(posterior, exact) <= 1e-12

    def test_impossible_observation(self):
        prior = Belief.point_mass((0, 0), capacity=2)
        assignment = Assignment(q=(1, 2))
        obs = Observation(
            nu=1,
            acks=(True, False),
            collided_slots=frozenset(),
            prev_assignment=assignment,
            prev_frame_len=2.1,
        )
        with pytest.raises(ObservationImpossible):
            filter_update(prior, assignment, obs, 0.3)

    def test_unreachable_active_count(self):
        prior = Belief.point_mass((0, 0), capacity=2)
        obs = Observation.initial(2, nu=2)
        with pytest.raises(ObservationImpossible):
            filter_update(prior, Assignment.empty(2), obs, 0.0)

    def test_sparse_support_matches_enumeration(self):
        rng = rng_fork(17, 0)
        for _ in range(20):
            prior = random_belief(rng, 3, 4, support_fraction=0.04)
            assignment = random_assignment(rng, 3)
            mean = float(rng.uniform(0.05, 1.0))
            obs = sample_observation(rng, prior, assignment, mean)
            fast = filter_update(prior, assignment, obs, mean, prune_epsilon=0.0)
            exact = enumerate_filter(prior, assignment, obs, mean)
            assert total_variation(fast, exact) <= 1e-12

    def test_pruning_drops_negligible_states(self):
        prior = Belief.point_mass((0, 0), capacity=8)
        obs = Observation.initial(2, nu=1)
        full = filter_update(prior, Assignment.empty(2), obs, 0.01, prune_epsilon=0.0)
        pruned = filter_update(prior, Assignment.empty(2), obs, 0.01, prune_epsilon=1e-12)
        assert len(pruned.support()) < len(full.support())
        assert pruned.is_normalized()
        assert total_variation(pruned, full) < 1e-10

    def test_stays_normalized_over_long_runs(self):
        rng = rng_fork(23, 0)
        belief = Belief.point_mass((0, 0, 0), capacity=3)
        for _ in range(10**4):
            assignment = random_assignment(rng, 3)
            obs = sample_observation(rng, belief, assignment, 0.2)
            belief = filter_update(belief, assignment, obs, 0.2)
            assert abs(belief.total() - 1.0) <= 1e-12
            assert activation_probabilities(belief).sum() == pytest.approx(obs.nu, abs=1e-9)
        assert belief.frame == 10**4


class TestActivationProbabilities:

    def test_point_mass(self):
        phi = activation_probabilities(Belief.point_mass((2, 0, 1), capacity=2))
        assert np.allclose(phi, [1.0, 0.0, 1.0])

    def test_symmetric_pair(self):
        phi = activation_probabilities(uniform_belief([(1, 0), (0, 1)], 2, 1))
        assert np.allclose(phi, [0.5, 0.5])

    def test_marginal_sum(self):
        belief = Belief.from_support({(1, 1): 0.3, (1, 0): 0.7}, 2, 1)
        phi = activation_probabilities(belief)
        assert np.allclose(phi, [1.0, 0.3])

    def test_uniform_with_actives_marginals_sum_to_nu(self):
        belief = Belief.uniform_with_actives(4, 2, 3)
        assert belief.is_normalized()
        assert activation_probabilities(belief).sum() == pytest.approx(3.0)


class TestSlotSuccessProbability:

    def test_sure_active_alone(self):
        belief = Belief.point_mass((1, 0), capacity=1)
        assert slot_success_probability(belief, (1, 2), 1) == pytest.approx(1.0)

    def test_negative_correlation(self):
        belief = uniform_belief([(1, 0), (0, 1)], 2, 1)
        assert slot_success_probability(belief, (1, 1), 1) == pytest.approx(1.0)

    def test_independent_halves(self):
        belief = uniform_belief([(0, 0), (1, 0), (0, 1), (1, 1)], 2, 1)
        assert slot_success_probability(belief, (1, 1), 1) == pytest.approx(0.5)

    def test_empty_slot_rejected(self):
        belief = Belief.point_mass((1, 0), capacity=1)
        with pytest.raises(ContractViolation):
            slot_success_probability(belief, (1, 1), 2)
