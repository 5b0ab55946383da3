import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.signal import convolve2d
from scipy.special import comb
from scipy.stats import binom

from src.errors import ContractViolation, ObservationImpossible
from src.models import Observation, OutcomeKind

logger = logging.getLogger(__name__)


class Evidence(str, Enum):
    KNOWN_ACTIVE = "KNOWN_ACTIVE"
    KNOWN_INACTIVE = "KNOWN_INACTIVE"
    COLLISION_MEMBER = "COLLISION_MEMBER"
    UNCONSTRAINED = "UNCONSTRAINED"


@dataclass(frozen=True)
class CompatibleClassBelief:
    """Uniform law over the states compatible with the last frame's observation.

    Only activity patterns are constrained; buffer levels of active users are
    uniform on 1..C. `remaining` is the number of actives still to place among
    the collision groups (None when the previous total is unknown).
    """

    evidence: tuple
    departed: tuple
    groups: tuple
    remaining: Optional[int]
    prev_nu: Optional[int]
    arrival_mean: float
    capacity: int

    @property
    def n_users(self) -> int:
        return len(self.evidence)

    @property
    def arrival_prob(self) -> float:
        return 1.0 - math.exp(-self.arrival_mean)

    def activation_probability(self, user: int) -> float:
        """P(user active next frame) for users outside the collision groups."""
        no_arrival = math.exp(-self.arrival_mean)
        kind = self.evidence[user]
        if kind == Evidence.KNOWN_ACTIVE:
            if self.departed[user]:
                # Active again unless its only packet left and nothing arrived.
                return 1.0 - no_arrival / self.capacity
            return 1.0
        if kind == Evidence.KNOWN_INACTIVE:
            return 1.0 - no_arrival
        if kind == Evidence.UNCONSTRAINED:
            return 1.0 - no_arrival / (self.capacity + 1)
        raise ContractViolation(f"user {user} belongs to a collision group")

    def collision_members(self) -> set:
        return {n for group in self.groups for n in group}


def sgfeo_reconstruct(
    obs: Observation, prev_nu: Optional[int], arrival_mean: float, capacity: int
) -> CompatibleClassBelief:
    n_users = obs.n_users
    if arrival_mean < 0:
        raise ContractViolation(f"arrival mean must be >= 0, got {arrival_mean}")

    if not obs.has_history:
        return CompatibleClassBelief(
            evidence=(Evidence.UNCONSTRAINED,) * n_users,
            departed=(False,) * n_users,
            groups=(),
            remaining=None,
            prev_nu=None,
            arrival_mean=arrival_mean,
            capacity=capacity,
        )

    if prev_nu is None or not 0 <= prev_nu <= n_users:
        raise ContractViolation(f"previous active count {prev_nu} outside 0..{n_users}")

    evidence = [Evidence.KNOWN_INACTIVE] * n_users
    departed = [False] * n_users
    groups = []

    try:
        kinds = obs.slot_kinds()
    except ContractViolation as e:
        raise ObservationImpossible(str(e)) from e

    for slot, kind in kinds.items():
        members = obs.prev_assignment.users_in_slot(slot)
        if kind == OutcomeKind.SUCCESS:
            for user in members:
                if obs.acks[user]:
                    evidence[user] = Evidence.KNOWN_ACTIVE
                    departed[user] = True
        elif kind == OutcomeKind.COLLISION:
            if len(members) < 2:
                raise ObservationImpossible(f"collision reported on single-user slot {slot}")
            if len(members) == 2:
                for user in members:
                    evidence[user] = Evidence.KNOWN_ACTIVE
            else:
                groups.append(tuple(members))

    known_active = sum(1 for e in evidence if e == Evidence.KNOWN_ACTIVE)
    remaining = prev_nu - known_active
    capacity_left = sum(len(g) for g in groups)
    if remaining < 0 or remaining < 2 * len(groups) or remaining > capacity_left:
        raise ObservationImpossible(
            f"{prev_nu} previous actives cannot explain {known_active} known actives "
            f"and {len(groups)} open collisions"
        )

    if remaining == capacity_left:
        for group in groups:
            for user in group:
                evidence[user] = Evidence.KNOWN_ACTIVE
        groups = []
        remaining = 0
    else:
        for group in groups:
            for user in group:
                evidence[user] = Evidence.COLLISION_MEMBER

    return CompatibleClassBelief(
        evidence=tuple(evidence),
        departed=tuple(departed),
        groups=tuple(groups),
        remaining=remaining,
        prev_nu=prev_nu,
        arrival_mean=arrival_mean,
        capacity=capacity,
    )


@lru_cache(maxsize=4096)
def _binomial_row(n: int, p: float) -> np.ndarray:
    row = binom.pmf(np.arange(n + 1), n, p)
    row.setflags(write=False)
    return row


def _clipped_convolve(table: np.ndarray, factor: np.ndarray) -> np.ndarray:
    """Add an independent count to `table`: budget and total add, slot count clips at 2."""
    n_u, n_t, _ = table.shape
    out = np.zeros_like(table)
    for s1 in range(3):
        left = table[:, :, s1]
        if not left.any():
            continue
        for s2 in range(3):
            right = factor[:, :, s2]
            if not right.any():
                continue
            out[:, :, min(s1 + s2, 2)] += convolve2d(left, right)[:n_u, :n_t]
    return out


def _independent_factor(count: int, p: float, in_slot: bool) -> np.ndarray:
    row = _binomial_row(count, p)
    factor = np.zeros((1, count + 1, 3))
    if in_slot:
        for j, w in enumerate(row):
            factor[0, j, min(j, 2)] = w
    else:
        factor[0, :, 0] = row
    return factor


@lru_cache(maxsize=1024)
def _group_factor(m: int, k: int, alpha: float, track_budget: bool) -> np.ndarray:
    """Count law of one open collision group of m members, k of them in the slot.

    Axes as in the count table; a >= 2 members were active at the collision and
    stay active, idle members turn active with probability alpha.
    """
    factor = np.zeros((m + 1 if track_budget else 1, m + 1, 3))
    for a in range(2, m + 1):
        du = a if track_budget else 0
        for i in range(max(0, a - (m - k)), min(k, a) + 1):
            sets = comb(k, i, exact=True) * comb(m - k, a - i, exact=True)
            idle_in = k - i
            idle_out = m - k - (a - i)
            py = sets * _binomial_row(idle_out, alpha)
            for x, px in enumerate(_binomial_row(idle_in, alpha)):
                lo = a + x
                factor[du, lo:lo + idle_out + 1, min(i + x, 2)] += px * py
    factor.setflags(write=False)
    return factor


@lru_cache(maxsize=256)
def _independent_classes(cb: CompatibleClassBelief) -> tuple:
    """Users outside the collision groups, grouped by activation probability."""
    members = cb.collision_members()
    classes = {}
    for user in range(cb.n_users):
        if user in members:
            continue
        classes.setdefault(cb.activation_probability(user), []).append(user)
    return tuple((p, frozenset(users)) for p, users in sorted(classes.items()))


@lru_cache(maxsize=8192)
def _count_table(cb: CompatibleClassBelief, class_hits: tuple, group_hits: tuple) -> np.ndarray:
    track_budget = cb.remaining is not None
    budget = cb.remaining if track_budget else 0
    # Axes: actives used from the collision budget, total actives at frame t,
    # actives among the slot's users clipped at 2.
    table = np.zeros((budget + 1, cb.n_users + 1, 3))
    table[0, 0, 0] = 1.0

    for (p, users), hits in zip(_independent_classes(cb), class_hits):
        if hits:
            table = _clipped_convolve(table, _independent_factor(hits, p, True))
        if len(users) > hits:
            table = _clipped_convolve(table, _independent_factor(len(users) - hits, p, False))
    for group, hits in zip(cb.groups, group_hits):
        factor = _group_factor(len(group), hits, cb.arrival_prob, track_budget)
        table = _clipped_convolve(table, factor)

    result = table[budget]
    result.setflags(write=False)
    return result


def _count_convolution(cb: CompatibleClassBelief, slot_users: set) -> np.ndarray:
    # The table only depends on how many slot users each class and group holds.
    class_hits = tuple(len(users & slot_users) for _, users in _independent_classes(cb))
    group_hits = tuple(sum(1 for n in group if n in slot_users) for group in cb.groups)
    return _count_table(cb, class_hits, group_hits)


def conditioned_exactly_one(cb: CompatibleClassBelief, obs_nu: int, slot_users) -> float:
    if not 0 <= obs_nu <= cb.n_users:
        raise ContractViolation(f"active count {obs_nu} outside 0..{cb.n_users}")
    table = _count_convolution(cb, set(slot_users))
    den = table[obs_nu].sum()
    if den <= 0:
        raise ObservationImpossible(
            f"no compatible class explains {obs_nu} active users this frame"
        )
    return float(table[obs_nu, 1] / den)


def conditioned_success_dp(
    cb: CompatibleClassBelief, obs_nu: int, q: Sequence[int], slot: int
) -> float:
    slot_users = {n for n, s in enumerate(q) if s == slot}
    if not slot_users:
        raise ContractViolation(f"slot {slot} has no assigned user")
    return conditioned_exactly_one(cb, obs_nu, slot_users)


def activity_posteriors(cb: CompatibleClassBelief, obs_nu: int) -> np.ndarray:
    return np.array([conditioned_exactly_one(cb, obs_nu, {user}) for user in range(cb.n_users)])


def active_count_distribution(cb: CompatibleClassBelief) -> np.ndarray:
    """Law of the number of active users this frame under the class belief."""
    counts = _count_convolution(cb, set()).sum(axis=1)
    return counts / counts.sum()
