import itertools
import logging
from typing import Iterator

from src.belief import Belief
from src.models import Assignment, EfficiencyMode
from src.oracle.budget import PARTITION_BUDGET, OracleBudget
from src.schedulers.efficiency import frame_efficiency

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


def restricted_growth_strings(n_users: int, max_l2: int) -> Iterator[tuple]:
    """Every assignment of users to slots 1..L2, once per slot relabeling."""

    def extend(prefix: list, used: int):
        if len(prefix) == n_users:
            yield tuple(prefix)
            return
        for slot in range(1, min(used + 1, max_l2) + 1):
            prefix.append(slot)
            yield from extend(prefix, max(used, slot))
            prefix.pop()

    yield from extend([], 0)


def _slot_probs(support: dict, q: tuple) -> list[float]:
    l2 = max(q)
    probs = [0.0] * l2
    for state, p in support.items():
        counts = [0] * l2
        for user, slot in enumerate(q):
            if state[user] > 0:
                counts[slot - 1] += 1
        for slot, count in enumerate(counts):
            if count == 1:
                probs[slot] += p
    return probs


def exhaustive_schedule(
    belief: Belief,
    nu: int,
    l1: float,
    mode: EfficiencyMode = EfficiencyMode.FULL_FRAME,
    budget: OracleBudget = None,
) -> tuple[Assignment, float]:
    budget = budget or OracleBudget()
    n_users = belief.n_users
    budget.check_users(n_users)
    budget.check_states(belief.space.size)
    if nu == 0:
        return Assignment.empty(n_users), 0.0

    support = belief.support()
    best = None
    for q in restricted_growth_strings(n_users, budget.l2_limit(n_users)):
        eta = frame_efficiency(_slot_probs(support, q), l1, mode)
        if best is None or eta > best[1] + TIE_TOL:
            best = (q, eta)
    return Assignment(q=best[0]), best[1]


def integer_partitions(n: int, largest: int = None) -> Iterator[tuple]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - part, part):
            yield (part,) + rest


def _partition_probs(sizes: tuple, n_users: int, nu: int) -> list[float]:
    starts = list(itertools.accumulate((0,) + sizes[:-1]))
    hits = [0] * len(sizes)
    total = 0
    for active in itertools.combinations(range(n_users), nu):
        total += 1
        for g, (start, size) in enumerate(zip(starts, sizes)):
            if sum(1 for n in active if start <= n < start + size) == 1:
                hits[g] += 1
    return [h / total for h in hits]


def exhaustive_partition(
    nu: int,
    n_users: int,
    l1: float,
    mode: EfficiencyMode = EfficiencyMode.FULL_FRAME,
    budget: OracleBudget = None,
) -> tuple[Assignment, float]:
    budget = budget or PARTITION_BUDGET
    budget.check_users(n_users)
    if nu == 0:
        return Assignment.empty(n_users), 0.0

    best = None
    for sizes in integer_partitions(n_users):
        if len(sizes) > budget.l2_limit(n_users):
            continue
        eta = frame_efficiency(_partition_probs(sizes, n_users, nu), l1, mode)
        if best is None or eta > best[1] + TIE_TOL:
            best = (sizes, eta)

    q = []
    for slot, size in enumerate(best[0], start=1):
        q.extend([slot] * size)
    return Assignment(q=tuple(q)), best[1]
