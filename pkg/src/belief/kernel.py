import itertools

import numpy as np
from scipy.stats import poisson

from src.errors import ContractViolation
from src.models import Assignment


def arrival_matrix(arrival_mean: float, capacity: int) -> np.ndarray:
    """Row i: distribution of min(i + A, C) with A ~ Poisson(arrival_mean)."""
    if arrival_mean < 0:
        raise ContractViolation(f"arrival mean must be >= 0, got {arrival_mean}")

    size = capacity + 1
    if arrival_mean == 0:
        return np.eye(size)

    matrix = np.zeros((size, size))
    for i in range(size):
        headroom = capacity - i
        matrix[i, i:capacity] = poisson.pmf(np.arange(headroom), arrival_mean)
        # Overflow past C is lumped at C.
        matrix[i, capacity] = poisson.sf(headroom - 1, arrival_mean)
    return matrix


def apply_departures(state: tuple, assignment: Assignment) -> tuple:
    after = list(state)
    for group in assignment.groups():
        active = [n for n in group if state[n] > 0]
        if len(active) == 1:
            after[active[0]] -= 1
    return tuple(after)


def transition_distribution(
    state, assignment: Assignment, arrival_mean_per_user: float, capacity: int
) -> dict:
    state = tuple(int(k) for k in state)
    if any(k < 0 or k > capacity for k in state):
        raise ContractViolation(f"state {state} outside 0..{capacity}")

    after = apply_departures(state, assignment)
    matrix = arrival_matrix(arrival_mean_per_user, capacity)

    per_user = []
    for level in after:
        row = matrix[level]
        per_user.append([(j, float(row[j])) for j in np.nonzero(row)[0]])

    distribution = {}
    for combo in itertools.product(*per_user):
        target = tuple(int(j) for j, _ in combo)
        p = 1.0
        for _, pj in combo:
            p *= pj
        distribution[target] = distribution.get(target, 0.0) + p
    return distribution
