import itertools
from functools import lru_cache

import numpy as np

from src.errors import ContractViolation


class StateSpace:
    """Joint buffer-load states (K_1..K_N), each K_n in 0..C, laid out as a dense tensor."""

    def __init__(self, n_users: int, capacity: int):
        if n_users < 1 or capacity < 1:
            raise ContractViolation("state space needs n_users >= 1 and capacity >= 1")
        self.n_users = n_users
        self.capacity = capacity
        self.shape = (capacity + 1,) * n_users

        self.active = []
        for axis in range(n_users):
            view = [1] * n_users
            view[axis] = capacity + 1
            self.active.append((np.arange(capacity + 1) > 0).reshape(view))

        self.active_count = self.count_active(range(n_users))
        self.patterns = np.array(list(itertools.product((0, 1), repeat=n_users)), dtype=np.int8)

    @property
    def size(self) -> int:
        return (self.capacity + 1) ** self.n_users

    def count_active(self, users) -> np.ndarray:
        count = np.zeros(self.shape, dtype=np.int16)
        for user in users:
            count = count + self.active[user]
        return count

    def states(self):
        return itertools.product(range(self.capacity + 1), repeat=self.n_users)

    def check_state(self, state) -> tuple:
        state = tuple(int(k) for k in state)
        if len(state) != self.n_users or any(k < 0 or k > self.capacity for k in state):
            raise ContractViolation(f"state {state} outside 0..{self.capacity}^{self.n_users}")
        return state


@lru_cache(maxsize=32)
def get_state_space(n_users: int, capacity: int) -> StateSpace:
    return StateSpace(n_users, capacity)
