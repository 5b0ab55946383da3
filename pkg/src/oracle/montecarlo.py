import logging
import math
from typing import Optional, Sequence

import numpy as np

from src.belief import Belief, CompatibleClassBelief, Evidence
from src.errors import ContractViolation, ObservationImpossible

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10**4
MAX_ROUNDS = 200


def _slot_users(q: Sequence[int], slot: int) -> list[int]:
    users = [n for n, s in enumerate(q) if s == slot]
    if not users:
        raise ContractViolation(f"slot {slot} has no assigned user")
    return users


def _sample_belief(belief: Belief, users: list[int], samples: int, rng) -> float:
    flat = belief.probs.ravel()
    picks = rng.choice(flat.size, size=samples, p=flat / flat.sum())
    states = np.stack(np.unravel_index(picks, belief.probs.shape), axis=1)
    hits = (states[:, users] > 0).sum(axis=1) == 1
    return float(hits.mean())


def _sample_class(
    cb: CompatibleClassBelief, obs_nu: int, users: list[int], samples: int, rng
) -> float:
    n_users = cb.n_users
    capacity = cb.capacity
    low = np.array([1 if e == Evidence.KNOWN_ACTIVE else 0 for e in cb.evidence])
    high = np.array([0 if e == Evidence.KNOWN_INACTIVE else capacity for e in cb.evidence])
    departed = np.array(cb.departed, dtype=int)
    alpha = 1.0 - math.exp(-cb.arrival_mean)

    accepted = 0
    hits = 0
    for _ in range(MAX_ROUNDS):
        # Uniform per-user proposals; rejection leaves the uniform law on compatible states.
        levels = rng.integers(low, high + 1, size=(samples, n_users))
        active = levels > 0
        keep = np.ones(samples, dtype=bool)
        for group in cb.groups:
            keep &= active[:, list(group)].sum(axis=1) >= 2
        if cb.prev_nu is not None:
            keep &= active.sum(axis=1) == cb.prev_nu

        after = levels - departed
        arrivals = rng.random((samples, n_users)) < alpha
        now_active = (after > 0) | arrivals
        keep &= now_active.sum(axis=1) == obs_nu

        accepted += int(keep.sum())
        hits += int(((now_active[keep][:, users]).sum(axis=1) == 1).sum())
        if accepted >= samples:
            break

    if accepted == 0:
        raise ObservationImpossible(f"rejection sampler found no state with {obs_nu} actives")
    return hits / accepted


def mc_success_estimate(
    belief,
    q: Sequence[int],
    slot: int,
    samples: int = MIN_SAMPLES,
    rng: np.random.Generator = None,
    obs_nu: Optional[int] = None,
) -> float:
    if samples < MIN_SAMPLES:
        raise ContractViolation(f"Monte-Carlo estimate needs at least {MIN_SAMPLES} samples")
    rng = rng or np.random.default_rng()
    users = _slot_users(q, slot)

    if isinstance(belief, CompatibleClassBelief):
        if obs_nu is None:
            raise ContractViolation("class beliefs are conditioned on the observed active count")
        return _sample_class(belief, obs_nu, users, samples, rng)
    return _sample_belief(belief, users, samples, rng)


def binomial_sigma(p: float, samples: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / samples)
