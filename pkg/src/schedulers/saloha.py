import math

from src.models import OutcomeKind, SchedulerKind, SlotOutcome

# Pseudo-Bayesian broadcast control: a collision adds (e - 2)^-1 to the backlog estimate.
COLLISION_INCREMENT = 1.0 / (math.e - 2.0)


def saloha_step(n_hat: float, feedback, rate: float) -> tuple[float, float]:
    kind = feedback.kind if isinstance(feedback, SlotOutcome) else OutcomeKind(feedback)
    transmit_prob = min(1.0, 1.0 / max(n_hat, 1.0))
    if kind == OutcomeKind.COLLISION:
        new_n_hat = n_hat + COLLISION_INCREMENT + rate
    else:
        new_n_hat = max(rate, n_hat - 1.0) + rate
    return transmit_prob, new_n_hat


class SalohaPolicy:
    """Stabilized slotted ALOHA: every backlogged user transmits with probability 1/n_hat."""

    kind = SchedulerKind.SALOHA

    def __init__(self, rate: float, initial_backlog: float = None):
        self._rate = rate
        self._n_hat = rate if initial_backlog is None else initial_backlog

    @property
    def backlog_estimate(self) -> float:
        return self._n_hat

    def transmit_probability(self) -> float:
        return min(1.0, 1.0 / max(self._n_hat, 1.0))

    def observe(self, outcome: SlotOutcome) -> None:
        _, self._n_hat = saloha_step(self._n_hat, outcome, self._rate)
