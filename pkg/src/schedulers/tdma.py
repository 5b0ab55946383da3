from src.models import Assignment, Observation, SchedulerKind
from src.schedulers.base import BaseScheduler


def tdma_schedule(n_users: int) -> Assignment:
    return Assignment(q=tuple(range(1, n_users + 1)))


class TdmaScheduler(BaseScheduler):
    kind = SchedulerKind.TDMA

    @property
    def l1(self) -> float:
        return 0.0

    def schedule(self, obs: Observation) -> Assignment:
        return tdma_schedule(self._config.n_users)
