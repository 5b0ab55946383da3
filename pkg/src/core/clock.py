import logging

from src.errors import ContractViolation
from src.models import Assignment, SimTime

logger = logging.getLogger(__name__)


def frame_length(l1: SimTime, assignment: Assignment) -> SimTime:
    if l1 < 0:
        raise ContractViolation(f"PIA length must be >= 0, got {l1}")
    return l1 + assignment.l2


def to_ms(t: SimTime, slot_ms: float) -> float:
    if slot_ms <= 0:
        raise ContractViolation(f"slot duration must be > 0, got {slot_ms}")
    return t * slot_ms


class SimClock:

    def __init__(self, start: SimTime = 0.0):
        if start < 0:
            raise ContractViolation(f"clock cannot start at negative time {start}")
        self._now = float(start)
        self._frames = 0

    @property
    def now(self) -> SimTime:
        return self._now

    @property
    def frames(self) -> int:
        return self._frames

    def advance(self, length: SimTime) -> SimTime:
        if length <= 0:
            raise ContractViolation(f"frame {self._frames} has non-positive length {length}")
        self._now += length
        self._frames += 1
        return self._now
