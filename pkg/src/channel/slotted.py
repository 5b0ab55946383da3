import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Protocol

import numpy as np

from src.models import LatencyReference, OutcomeKind, Packet, SimTime, SlotOutcome, UserQueue

logger = logging.getLogger(__name__)


class SlotPolicy(Protocol):

    def transmit_probability(self) -> float: ...

    def observe(self, outcome: SlotOutcome) -> None: ...


class FixedProbabilityPolicy:

    def __init__(self, probability: float):
        self._probability = probability

    def transmit_probability(self) -> float:
        return self._probability

    def observe(self, outcome: SlotOutcome) -> None:
        pass


@dataclass
class SlotRecord:
    slot_start: SimTime
    outcome: SlotOutcome
    backlogged: int
    delivered: Optional[Packet] = None


def run_slotted(
    policy: SlotPolicy,
    queues: list[UserQueue],
    horizon_slots: int,
    rng: np.random.Generator,
    start: SimTime = 0.0,
    latency_reference: LatencyReference = LatencyReference.SLOT_START,
) -> Iterator[SlotRecord]:
    # Callers may push arrivals for [slot_start, slot_start + 1) between iterations.
    for index in range(horizon_slots):
        slot_start = start + index
        backlogged = [q.user for q in queues if q.head_eligible_before(slot_start)]
        probability = policy.transmit_probability()

        if backlogged:
            coins = rng.random(len(backlogged))
            transmitters = [user for user, coin in zip(backlogged, coins) if coin < probability]
        else:
            transmitters = []

        outcome = SlotOutcome.from_transmitters(transmitters)
        delivered = None
        if outcome.kind == OutcomeKind.SUCCESS:
            delivered = queues[outcome.user].pop_head()
            offset = 1 if latency_reference == LatencyReference.SLOT_END else 0
            delivered.deliver(slot_start + offset)

        policy.observe(outcome)
        yield SlotRecord(
            slot_start=slot_start,
            outcome=outcome,
            backlogged=len(backlogged),
            delivered=delivered,
        )
