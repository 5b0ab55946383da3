from typing import Callable, Sequence

from src.models import Assignment, EfficiencyMode
from src.schedulers.efficiency import frame_efficiency

TIE_TOL = 1e-12

SlotSuccess = Callable[[tuple], float]


def activation_order(phi: Sequence[float]) -> list[int]:
    # Rounding keeps float noise from reordering users with equal marginals.
    return sorted(range(len(phi)), key=lambda n: (-round(float(phi[n]), 12), n))


def greedy_assign(
    order: Sequence[int],
    slot_success: SlotSuccess,
    n_users: int,
    l1: float,
    mode: EfficiencyMode,
) -> Assignment:
    """Place users one by one in the existing or new slot that maximizes frame efficiency.

    Ties go to an existing slot over a new one, then to the lowest slot index.
    """
    cache = {}

    def success(group: tuple) -> float:
        key = tuple(sorted(group))
        if key not in cache:
            cache[key] = slot_success(key)
        return cache[key]

    groups = []
    probs = []
    for user in order:
        if not groups:
            groups.append((user,))
            probs.append(success((user,)))
            continue

        best_slot = len(groups)
        best_prob = success((user,))
        best_eta = frame_efficiency(probs + [best_prob], l1, mode)
        chosen = None

        for index, group in enumerate(groups):
            candidate = success(group + (user,))
            trial = probs[:index] + [candidate] + probs[index + 1:]
            eta = frame_efficiency(trial, l1, mode)
            if chosen is None or eta > chosen[2] + TIE_TOL:
                chosen = (index, candidate, eta)

        if chosen is not None and chosen[2] >= best_eta - TIE_TOL:
            best_slot, best_prob, best_eta = chosen

        if best_slot == len(groups):
            groups.append((user,))
            probs.append(best_prob)
        else:
            groups[best_slot] = groups[best_slot] + (user,)
            probs[best_slot] = best_prob
    return Assignment.from_groups(groups, n_users)
