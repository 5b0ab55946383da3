from typing import Optional

import numpy as np

from src.belief import Belief, CompatibleClassBelief, get_state_space, sgfeo_reconstruct
from src.belief.kernel import apply_departures
from src.errors import ObservationImpossible
from src.models import Assignment, Observation, OutcomeKind, SlotOutcome
from src.oracle.enumeration import brute_force_conditioned_success


def random_assignment(rng: np.random.Generator, n_users: int, max_l2: int = None) -> Assignment:
    max_l2 = max_l2 or n_users
    q = []
    used = 0
    for _ in range(n_users):
        slot = int(rng.integers(1, min(used + 1, max_l2) + 1))
        q.append(slot)
        used = max(used, slot)
    return Assignment(q=tuple(q))


def random_belief(
    rng: np.random.Generator,
    n_users: int,
    capacity: int,
    nu: Optional[int] = None,
    support_fraction: float = 0.5,
) -> Belief:
    """Random belief, restricted to states with exactly nu actives when nu is given."""
    space = get_state_space(n_users, capacity)
    allowed = np.ones(space.shape, dtype=bool)
    if nu is not None:
        allowed &= space.active_count == nu
    keep = allowed & (rng.random(space.shape) < support_fraction)
    if not keep.any():
        keep = allowed
    probs = np.where(keep, rng.random(space.shape), 0.0)
    if probs.sum() <= 0:
        probs = keep.astype(float)
    return Belief(probs=probs / probs.sum(), capacity=capacity)


def outcome_of(state, assignment: Assignment) -> tuple[tuple, frozenset]:
    acks = [False] * assignment.n_users
    collided = set()
    for slot, group in enumerate(assignment.groups(), start=1):
        outcome = SlotOutcome.from_transmitters([n for n in group if state[n] > 0])
        if outcome.kind == OutcomeKind.SUCCESS:
            acks[outcome.user] = True
        elif outcome.kind == OutcomeKind.COLLISION:
            collided.add(slot)
    return tuple(acks), frozenset(collided)


def sample_observation(
    rng: np.random.Generator,
    belief: Belief,
    assignment: Assignment,
    arrival_mean: float,
    frame_len: float = 1.0,
) -> Observation:
    """Draw a state from the belief, run one frame on it and report what the BS sees."""
    flat = belief.probs.ravel()
    index = int(rng.choice(flat.size, p=flat / flat.sum()))
    state = tuple(int(k) for k in np.unravel_index(index, belief.probs.shape))

    acks, collided = outcome_of(state, assignment)
    after = apply_departures(state, assignment)
    capacity = belief.capacity
    arrivals = rng.poisson(arrival_mean, size=len(state))
    target = [min(k + int(a), capacity) for k, a in zip(after, arrivals)]
    return Observation(
        nu=sum(1 for k in target if k > 0),
        acks=acks,
        collided_slots=collided,
        prev_assignment=assignment,
        prev_frame_len=frame_len,
    )


def random_class_instance(
    rng: np.random.Generator, n_users: int, capacity: int
) -> tuple[CompatibleClassBelief, int, Assignment, int]:
    """(class belief, observed active count, assignment, slot) with a feasible observation."""
    while True:
        prev_nu = int(rng.integers(0, n_users + 1))
        active = rng.permutation(n_users) < prev_nu
        state = tuple(int(rng.integers(1, capacity + 1)) if a else 0 for a in active)
        prev_assignment = random_assignment(rng, n_users)
        acks, collided = outcome_of(state, prev_assignment)
        frame_len = 0.1 + prev_assignment.l2
        arrival_mean = float(rng.uniform(0.02, 0.4)) * frame_len / n_users

        obs = Observation(
            nu=0,
            acks=acks,
            collided_slots=collided,
            prev_assignment=prev_assignment,
            prev_frame_len=frame_len,
        )
        if rng.random() < 0.1:
            cb = sgfeo_reconstruct(Observation.initial(n_users), None, arrival_mean, capacity)
        else:
            cb = sgfeo_reconstruct(obs, prev_nu, arrival_mean, capacity)

        q = random_assignment(rng, n_users)
        slot = int(rng.integers(1, q.l2 + 1))
        users = q.users_in_slot(slot)
        candidates = list(range(n_users + 1))
        rng.shuffle(candidates)
        for obs_nu in candidates:
            try:
                brute_force_conditioned_success(cb, int(obs_nu), users)
            except ObservationImpossible:
                continue
            return cb, int(obs_nu), q, slot
