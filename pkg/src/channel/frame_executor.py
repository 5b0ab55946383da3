import logging

from src.errors import ContractViolation
from src.models import (
    Assignment,
    FrameResult,
    LatencyReference,
    OutcomeKind,
    SimTime,
    SlotOutcome,
    UserQueue,
)

logger = logging.getLogger(__name__)


class FrameExecutor:

    def __init__(
        self,
        n_users: int,
        latency_reference: LatencyReference = LatencyReference.SLOT_END,
        slot_eligibility: bool = False,
    ):
        self._n_users = n_users
        self._reference = latency_reference
        # TDMA lets a packet go out in any slot that starts after its generation.
        self._slot_eligibility = slot_eligibility

    def refresh(self, queues: list[UserQueue], frame_start: SimTime):
        for queue in queues:
            queue.refresh_eligibility(frame_start)

    def count_active(self, queues: list[UserQueue]) -> int:
        return sum(1 for queue in queues if queue.eligible_count > 0)

    def execute_frame(
        self,
        assignment: Assignment,
        queues: list[UserQueue],
        frame_start: SimTime,
        l1: SimTime,
    ) -> FrameResult:
        self._check_assignment(assignment, queues)

        nu_at_start = self.count_active(queues)
        outcomes = []
        acks = [False] * self._n_users
        collided = set()
        delivered = []

        for slot, group in enumerate(assignment.groups(), start=1):
            slot_start = frame_start + l1 + slot - 1
            transmitters = [n for n in group if self._can_transmit(queues[n], slot_start)]
            outcome = SlotOutcome.from_transmitters(transmitters)

            if outcome.kind == OutcomeKind.SUCCESS:
                user = outcome.user
                packet = queues[user].pop_head()
                packet.deliver(self._delivery_instant(slot_start))
                delivered.append(packet)
                acks[user] = True
            elif outcome.kind == OutcomeKind.COLLISION:
                collided.add(slot)

            outcomes.append(outcome)

        result = FrameResult(
            outcomes=outcomes,
            acks=tuple(acks),
            collided_slots=frozenset(collided),
            nu_at_start=nu_at_start,
            frame_start=frame_start,
            frame_len=l1 + assignment.l2,
            assignment=assignment,
            delivered=delivered,
        )
        return result

    def _can_transmit(self, queue: UserQueue, slot_start: SimTime) -> bool:
        if self._slot_eligibility:
            return queue.head_eligible_before(slot_start)
        return queue.eligible_count > 0

    def _delivery_instant(self, slot_start: SimTime) -> SimTime:
        if self._reference == LatencyReference.SLOT_END:
            return slot_start + 1
        return slot_start

    def _check_assignment(self, assignment: Assignment, queues: list[UserQueue]):
        if assignment.n_users != len(queues):
            raise ContractViolation(
                f"assignment covers {assignment.n_users} users, system has {len(queues)}"
            )
        if assignment.l2 == 0 or self._slot_eligibility:
            return
        for queue, slot in zip(queues, assignment.q):
            if queue.eligible_count > 0 and slot == 0:
                raise ContractViolation(f"active user {queue.user} has no slot")
