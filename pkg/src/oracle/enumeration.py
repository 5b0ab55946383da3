import itertools
import logging
import math

import numpy as np

from src.belief import Belief, CompatibleClassBelief, Evidence, transition_distribution
from src.errors import ContractViolation, ObservationImpossible
from src.models import Assignment, Observation
from src.oracle.budget import DP_BUDGET, OracleBudget

logger = logging.getLogger(__name__)

FILTER_STATE_LIMIT = 10**6


def _compatible(state: tuple, assignment: Assignment, obs: Observation) -> bool:
    for slot in range(1, assignment.l2 + 1):
        users = assignment.users_in_slot(slot)
        active = [n for n in users if state[n] > 0]
        acked = [n for n in users if obs.acks[n]]
        if slot in obs.collided_slots:
            if acked or len(active) < 2:
                return False
        elif acked:
            if len(acked) > 1 or active != acked:
                return False
        elif active:
            return False
    return all(assignment.q[n] != 0 for n in obs.acked_users)


def enumerate_filter(
    prior: Belief,
    prev_assignment: Assignment,
    obs: Observation,
    arrival_mean: float,
    capacity: int = None,
    budget: OracleBudget = None,
) -> Belief:
    """Dense forward step over every state, without pruning."""
    budget = budget or OracleBudget()
    capacity = capacity or prior.capacity
    n_users = prior.n_users
    if (capacity + 1) ** n_users > FILTER_STATE_LIMIT:
        raise ContractViolation(f"dense filter limited to {FILTER_STATE_LIMIT} states")
    budget.check_states((capacity + 1) ** (2 * n_users), "state pairs")

    posterior = {}
    for state in itertools.product(range(capacity + 1), repeat=n_users):
        p = prior.probs[state]
        if p == 0 or not _compatible(state, prev_assignment, obs):
            continue
        for target, pt in transition_distribution(
            state, prev_assignment, arrival_mean, capacity
        ).items():
            if sum(1 for k in target if k > 0) != obs.nu:
                continue
            posterior[target] = posterior.get(target, 0.0) + p * pt

    if sum(posterior.values()) <= 0:
        raise ObservationImpossible("no enumerated state explains the observation")
    return Belief.from_support(posterior, n_users, capacity, frame=prior.frame + 1)


def _allowed_levels(kind: Evidence, capacity: int) -> range:
    if kind == Evidence.KNOWN_INACTIVE:
        return range(0, 1)
    if kind == Evidence.KNOWN_ACTIVE:
        return range(1, capacity + 1)
    return range(0, capacity + 1)


def brute_force_conditioned_success(
    cb: CompatibleClassBelief, obs_nu: int, slot_users, budget: OracleBudget = None
) -> float:
    """Enumerate every compatible previous state and every activity outcome."""
    budget = budget or DP_BUDGET
    n_users = cb.n_users
    budget.check_users(n_users)
    budget.check_capacity(cb.capacity)
    budget.check_states((cb.capacity + 1) ** n_users * 2**n_users, "state/pattern pairs")

    slot_users = set(slot_users)
    alpha = 1.0 - math.exp(-cb.arrival_mean)

    # Group compatible previous states by which users stay active after departures.
    sure_masks = {}
    levels = [_allowed_levels(kind, cb.capacity) for kind in cb.evidence]
    for state in itertools.product(*levels):
        if any(sum(1 for n in g if state[n] > 0) < 2 for g in cb.groups):
            continue
        if cb.prev_nu is not None and sum(1 for k in state if k > 0) != cb.prev_nu:
            continue
        after = [k - 1 if cb.departed[n] else k for n, k in enumerate(state)]
        mask = tuple(k > 0 for k in after)
        sure_masks[mask] = sure_masks.get(mask, 0) + 1

    if not sure_masks:
        raise ObservationImpossible("no previous state is compatible with the evidence")

    num = 0.0
    den = 0.0
    for mask, count in sure_masks.items():
        for pattern in itertools.product((0, 1), repeat=n_users):
            if sum(pattern) != obs_nu:
                continue
            p = float(count)
            for n, active in enumerate(pattern):
                if mask[n]:
                    p *= 1.0 if active else 0.0
                else:
                    p *= alpha if active else 1.0 - alpha
                if p == 0:
                    break
            if p == 0:
                continue
            den += p
            if sum(pattern[n] for n in slot_users) == 1:
                num += p

    if den <= 0:
        raise ObservationImpossible(f"no compatible outcome has {obs_nu} active users")
    return num / den


def slot_success_from_support(belief: Belief, users) -> float:
    users = list(users)
    total = 0.0
    for state, p in belief.support().items():
        if sum(1 for n in users if state[n] > 0) == 1:
            total += p
    return total


def total_variation(a: Belief, b: Belief) -> float:
    return 0.5 * float(np.abs(a.probs - b.probs).sum())
