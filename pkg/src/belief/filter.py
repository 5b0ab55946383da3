import logging
from typing import Sequence

import numpy as np

from src.belief.kernel import arrival_matrix
from src.belief.model import Belief
from src.belief.state_space import StateSpace
from src.errors import ContractViolation, ObservationImpossible
from src.models import Assignment, Observation, OutcomeKind

logger = logging.getLogger(__name__)


def compatible_rows(states: np.ndarray, assignment: Assignment, obs: Observation) -> np.ndarray:
    try:
        kinds = obs.slot_kinds(assignment)
    except ContractViolation as e:
        raise ObservationImpossible(str(e)) from e

    active = states > 0
    keep = np.ones(len(states), dtype=bool)
    for slot, kind in kinds.items():
        users = list(assignment.users_in_slot(slot))
        count = active[:, users].sum(axis=1)
        if kind == OutcomeKind.SUCCESS:
            acked = [n for n in users if obs.acks[n]]
            keep &= active[:, acked[0]] & (count == 1)
        elif kind == OutcomeKind.COLLISION:
            keep &= count >= 2
        else:
            keep &= count == 0
    return keep


def _merge(space: StateSpace, states: np.ndarray, weights: np.ndarray):
    keys = np.ravel_multi_index(tuple(states.T), space.shape)
    unique, inverse = np.unique(keys, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=weights, minlength=len(unique))
    return np.stack(np.unravel_index(unique, space.shape), axis=1), merged


def _propagate_sparse(space: StateSpace, states, weights, matrix: np.ndarray, nu: int):
    for axis in range(space.n_users):
        rows = matrix[states[:, axis]]
        source, level = np.nonzero(rows)
        weights = weights[source] * rows[source, level]
        states = states[source]
        states[:, axis] = level
        # Arrivals never clear a buffer, so states past nu actives stay past it.
        keep = np.count_nonzero(states, axis=1) <= nu
        states, weights = _merge(space, states[keep], weights[keep])
    keep = np.count_nonzero(states, axis=1) == nu
    return states[keep], weights[keep]


def _propagate_dense(space: StateSpace, states, weights, matrix: np.ndarray, nu: int):
    probs = np.zeros(space.shape)
    probs[tuple(states.T)] = weights
    for axis in range(space.n_users):
        probs = np.moveaxis(np.tensordot(probs, matrix, axes=([axis], [0])), -1, axis)
    probs = np.where(space.active_count == nu, probs, 0.0)
    index = np.nonzero(probs)
    return np.stack(index, axis=1), probs[index]


def filter_update(
    prior: Belief,
    prev_assignment: Assignment,
    obs: Observation,
    arrival_mean: float,
    prune_epsilon: float = 1e-12,
) -> Belief:
    space = prior.space
    if prev_assignment.n_users != space.n_users:
        raise ContractViolation("assignment and belief disagree on the number of users")

    # z(t-1) and C(t-1) are checked against the prior state and the action.
    keep = compatible_rows(prior.states, prev_assignment, obs) & (prior.weights > 0)
    if not keep.any():
        raise ObservationImpossible(
            f"frame {prior.frame + 1}: no prior state explains acks/collisions"
        )
    states = prior.states[keep]
    weights = prior.weights[keep]

    acked = list(obs.acked_users)
    if acked:
        states[:, acked] -= 1

    # nu(t) is checked against the posterior state.
    matrix = arrival_matrix(arrival_mean, space.capacity)
    if len(states) * (space.capacity + 1) < space.size:
        states, weights = _propagate_sparse(space, states, weights, matrix, obs.nu)
    else:
        states, weights = _propagate_dense(space, states, weights, matrix, obs.nu)

    total = weights.sum()
    if total <= 0:
        raise ObservationImpossible(
            f"frame {prior.frame + 1}: no reachable state has {obs.nu} active users"
        )

    if prune_epsilon > 0:
        keep = weights >= prune_epsilon * total
        states, weights = states[keep], weights[keep]
    weights = weights / weights.sum()

    return Belief.from_arrays(states, weights, capacity=prior.capacity, frame=prior.frame + 1)


def activation_probabilities(belief: Belief) -> np.ndarray:
    phi = belief.weights @ (belief.states > 0).astype(float)
    return np.clip(phi, 0.0, 1.0)


class ActivityDistribution:
    """Joint law of the activity pattern (K_n > 0 per user) under a belief."""

    def __init__(self, pattern_probs: np.ndarray, patterns: np.ndarray):
        self._probs = pattern_probs
        self._patterns = patterns

    @classmethod
    def from_belief(cls, belief: Belief) -> "ActivityDistribution":
        return cls(belief.activity_pattern_probs(), belief.space.patterns)

    def exactly_one(self, users: Sequence[int]) -> float:
        users = list(users)
        if not users:
            return 0.0
        active_in_slot = self._patterns[:, users].sum(axis=1)
        return float(self._probs[active_in_slot == 1].sum())


def slot_success_probability(belief: Belief, q: Sequence[int], slot: int) -> float:
    users = [n for n, s in enumerate(q) if s == slot]
    if not users:
        raise ContractViolation(f"slot {slot} has no assigned user")
    return ActivityDistribution.from_belief(belief).exactly_one(users)
