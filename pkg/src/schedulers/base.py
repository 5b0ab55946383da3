from abc import ABC, abstractmethod

from src.models import Assignment, FrameResult, Observation, SchedulerKind, SimConfig


class BaseScheduler(ABC):
    kind: SchedulerKind

    def __init__(self, config: SimConfig):
        self._config = config

    @property
    def l1(self) -> float:
        return self._config.pia_len

    @property
    def fallbacks(self) -> int:
        return 0

    @abstractmethod
    def schedule(self, obs: Observation) -> Assignment:
        ...

    def observe(self, result: FrameResult) -> None:
        pass
