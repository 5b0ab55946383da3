import logging
from functools import lru_cache

import numpy as np
from scipy.special import comb

from src.errors import ContractViolation
from src.models import Assignment, EfficiencyMode, Observation, SchedulerKind, SimConfig
from src.schedulers.base import BaseScheduler
from src.schedulers.efficiency import frame_efficiency
from src.traffic import PIMA_STREAM_ID, rng_fork

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


def group_sizes(n_users: int, l2: int) -> list[int]:
    base, extra = divmod(n_users, l2)
    return [base + 1 if g < extra else base for g in range(l2)]


def group_success_probability(size: int, n_users: int, nu: int) -> float:
    """Exactly one of nu uniformly placed actives falls in a group of `size` users."""
    if nu < 1 or size < 1:
        return 0.0
    hits = size * comb(n_users - size, nu - 1, exact=True)
    return hits / comb(n_users, nu, exact=True)


@lru_cache(maxsize=4096)
def _best_partition(nu: int, n_users: int, l1: float, mode: EfficiencyMode) -> tuple:
    best = None
    for l2 in range(1, n_users + 1):
        sizes = group_sizes(n_users, l2)
        probs = [group_success_probability(k, n_users, nu) for k in sizes]
        eta = frame_efficiency(probs, l1, mode)
        if best is None or eta > best[1] + TIE_TOL:
            best = (tuple(sizes), eta)
    return best


def pima_baseline_schedule(
    nu: int, n_users: int, l1: float, mode: EfficiencyMode = EfficiencyMode.FULL_FRAME
) -> Assignment:
    if not 0 <= nu <= n_users:
        raise ContractViolation(f"active count {nu} outside 0..{n_users}")
    if nu == 0:
        return Assignment.empty(n_users)

    sizes, _ = _best_partition(nu, n_users, float(l1), EfficiencyMode(mode))
    q = []
    for slot, size in enumerate(sizes, start=1):
        q.extend([slot] * size)
    return Assignment(q=tuple(q))


def relabel_users(assignment: Assignment, rng: np.random.Generator) -> Assignment:
    """Hand the slots of `assignment` to a uniformly permuted set of users."""
    perm = rng.permutation(assignment.n_users)
    q = [0] * assignment.n_users
    for position, user in enumerate(perm):
        q[user] = assignment.q[position]
    return Assignment(q=tuple(q))


class ShuffledBaseline:
    """PIMA baseline with a fresh user-to-group mapping every frame.

    A fixed mapping would put two colliding users in the same group again on
    every frame until the active count changes.
    """

    def __init__(self, config: SimConfig):
        self._config = config
        self._rng = rng_fork(config.seed, PIMA_STREAM_ID)

    def __call__(self, nu: int) -> Assignment:
        config = self._config
        assignment = pima_baseline_schedule(
            nu, config.n_users, config.pia_len, config.efficiency_denominator
        )
        if assignment.l2 <= 1:
            return assignment
        return relabel_users(assignment, self._rng)


class PimaScheduler(BaseScheduler):
    kind = SchedulerKind.PIMA

    def __init__(self, config: SimConfig):
        super().__init__(config)
        self._baseline = ShuffledBaseline(config)

    def schedule(self, obs: Observation) -> Assignment:
        return self._baseline(obs.nu)
