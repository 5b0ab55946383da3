import numpy as np

from src.belief.state_space import StateSpace, get_state_space
from src.errors import ContractViolation

NORMALIZATION_TOL = 1e-12


class Belief:
    """Distribution over joint buffer states, stored as its sparse support.

    Row i of `states` is a buffer vector carrying probability `weights[i]`.
    The dense (C+1)^N tensor is only built when `probs` is read.
    """

    def __init__(self, probs: np.ndarray, capacity: int, frame: int = 0):
        probs = np.asarray(probs, dtype=float)
        index = np.nonzero(probs)
        self._set(np.stack(index, axis=1), probs[index], probs.ndim, capacity, frame)
        self._dense = probs

    @classmethod
    def from_arrays(
        cls, states: np.ndarray, weights: np.ndarray, capacity: int, frame: int = 0
    ) -> "Belief":
        belief = cls.__new__(cls)
        belief._set(states, weights, states.shape[1], capacity, frame)
        belief._dense = None
        return belief

    def _set(self, states, weights, n_users: int, capacity: int, frame: int):
        self.states = np.asarray(states, dtype=np.intp).reshape(len(weights), n_users)
        self.weights = np.asarray(weights, dtype=float)
        self.capacity = capacity
        self.frame = frame

    @property
    def n_users(self) -> int:
        return self.states.shape[1]

    @property
    def space(self) -> StateSpace:
        return get_state_space(self.n_users, self.capacity)

    @property
    def probs(self) -> np.ndarray:
        if self._dense is None:
            dense = np.zeros(self.space.shape)
            dense[tuple(self.states.T)] = self.weights
            self._dense = dense
        return self._dense

    @classmethod
    def point_mass(cls, state, capacity: int, frame: int = 0) -> "Belief":
        space = get_state_space(len(state), capacity)
        states = np.array([space.check_state(state)])
        return cls.from_arrays(states, np.ones(1), capacity, frame)

    @classmethod
    def from_support(cls, support: dict, n_users: int, capacity: int, frame: int = 0) -> "Belief":
        space = get_state_space(n_users, capacity)
        probs = np.zeros(space.shape)
        for state, p in support.items():
            if p < 0:
                raise ContractViolation(f"negative probability {p} for state {state}")
            probs[space.check_state(state)] += p
        total = probs.sum()
        if total <= 0:
            raise ContractViolation("belief support carries no mass")
        return cls(probs=probs / total, capacity=capacity, frame=frame)

    @classmethod
    def uniform_with_actives(
        cls, n_users: int, capacity: int, nu: int, frame: int = 0
    ) -> "Belief":
        space = get_state_space(n_users, capacity)
        probs = (space.active_count == nu).astype(float)
        total = probs.sum()
        if total == 0:
            raise ContractViolation(f"no state has exactly {nu} active users")
        return cls(probs=probs / total, capacity=capacity, frame=frame)

    def probability(self, state) -> float:
        state = self.space.check_state(state)
        match = np.all(self.states == np.array(state), axis=1)
        return float(self.weights[match].sum())

    def support(self) -> dict:
        return {
            tuple(int(k) for k in row): float(w)
            for row, w in zip(self.states, self.weights)
            if w > 0
        }

    def total(self) -> float:
        return float(self.weights.sum())

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.total() - 1.0) <= tol and bool(np.all(self.weights >= 0))

    def activity_pattern_probs(self) -> np.ndarray:
        """Mass of every activity pattern, in the row order of `StateSpace.patterns`."""
        bits = 1 << np.arange(self.n_users - 1, -1, -1)
        index = (self.states > 0).astype(np.int64) @ bits
        return np.bincount(index, weights=self.weights, minlength=2**self.n_users)
