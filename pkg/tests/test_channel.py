import os
import sys
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.channel import FixedProbabilityPolicy, FrameExecutor, run_slotted
from src.errors import ContractViolation
from src.models import Assignment, LatencyReference, OutcomeKind, Packet, UserQueue
from src.traffic import rng_fork


def make_queues(loads, generated_at=-1.0):
    queues = []
    next_id = 0
    for user, load in enumerate(loads):
        queue = UserQueue(user=user)
        for _ in range(load):
            queue.push(Packet(id=next_id, user=user, generated_at=generated_at))
            next_id += 1
        queues.append(queue)
    return queues


def run_frame(loads, q, l1=0.1, reference=LatencyReference.SLOT_END):
    queues = make_queues(loads)
    executor = FrameExecutor(len(loads), latency_reference=reference)
    executor.refresh(queues, 0.0)
    result = executor.execute_frame(Assignment(q=q), queues, 0.0, l1)
    return result, queues


class TestCountActive:

    def test_all_empty(self):
        queues = make_queues([0, 0, 0])
        executor = FrameExecutor(3)
        executor.refresh(queues, 0.0)
        assert executor.count_active(queues) == 0

    def test_counts_users_not_packets(self):
        queues = make_queues([2, 0, 1, 0, 0])
        executor = FrameExecutor(5)
        executor.refresh(queues, 0.0)
        assert executor.count_active(queues) == 2

    def test_everyone_active(self):
        queues = make_queues([1, 1, 1, 1, 1])
        executor = FrameExecutor(5)
        executor.refresh(queues, 0.0)
        assert executor.count_active(queues) == 5

    def test_arrivals_after_frame_start_not_counted(self):
        queues = make_queues([1, 1], generated_at=0.5)
        executor = FrameExecutor(2)
        executor.refresh(queues, 0.0)
        assert executor.count_active(queues) == 0


class TestExecuteFrame:

    def test_lone_transmitter_succeeds(self):
        result, queues = run_frame([1, 0], (1, 1))
        assert result.outcomes[0].kind == OutcomeKind.SUCCESS
        assert result.outcomes[0].user == 0
        assert result.acks == (True, False)
        assert len(queues[0]) == 0
        assert result.delivered[0].delivered_at == pytest.approx(1.1)
        assert result.frame_len == pytest.approx(1.1)

    def test_collision_keeps_queues(self):
        result, queues = run_frame([1, 1], (1, 1))
        assert result.outcomes[0].kind == OutcomeKind.COLLISION
        assert result.outcomes[0].users == frozenset({0, 1})
        assert result.collided_slots == frozenset({1})
        assert [len(q) for q in queues] == [1, 1]
        assert result.delivered == []

    def test_mixed_frame(self):
        result, _ = run_frame([1, 1, 1], (1, 2, 2))
        assert [o.kind for o in result.outcomes] == [OutcomeKind.SUCCESS, OutcomeKind.COLLISION]
        assert result.acks == (True, False, False)
        assert result.collided_slots == frozenset({2})
        assert result.successes == 1

    def test_idle_slot(self):
        result, _ = run_frame([0, 1], (1, 2))
        assert result.outcomes[0].kind == OutcomeKind.IDLE
        assert result.outcomes[1].kind == OutcomeKind.SUCCESS

    def test_slot_start_reference(self):
        result, _ = run_frame([0, 1], (1, 2), reference=LatencyReference.SLOT_START)
        assert result.delivered[0].delivered_at == pytest.approx(1.1)

    def test_slot_end_reference_second_slot(self):
        result, _ = run_frame([0, 1], (1, 2))
        assert result.delivered[0].delivered_at == pytest.approx(2.1)

    def test_wrong_size_assignment_rejected(self):
        queues = make_queues([1, 0])
        executor = FrameExecutor(2)
        executor.refresh(queues, 0.0)
        with pytest.raises(ContractViolation):
            executor.execute_frame(Assignment(q=(1, 1, 1)), queues, 0.0, 0.1)

    def test_only_one_packet_per_success(self):
        result, queues = run_frame([3, 0], (1, 2))
        assert len(result.delivered) == 1
        assert len(queues[0]) == 2


class TestRunSlotted:

    def test_single_user_drains(self):
        queues = make_queues([3])
        records = list(run_slotted(FixedProbabilityPolicy(1.0), queues, 5, rng_fork(1, 0)))
        kinds = [r.outcome.kind for r in records]
        assert kinds == [OutcomeKind.SUCCESS] * 3 + [OutcomeKind.IDLE] * 2
        assert records[0].delivered.delivered_at == pytest.approx(0.0)

    def test_two_users_always_collide(self):
        queues = make_queues([2, 2])
        records = list(run_slotted(FixedProbabilityPolicy(1.0), queues, 50, rng_fork(1, 0)))
        assert all(r.outcome.kind == OutcomeKind.COLLISION for r in records)
        assert [len(q) for q in queues] == [2, 2]

    def test_half_probability_success_rate(self):
        slots = 20000
        queues = make_queues([slots, slots])
        records = run_slotted(FixedProbabilityPolicy(0.5), queues, slots, rng_fork(3, 0))
        successes = sum(1 for r in records if r.outcome.kind == OutcomeKind.SUCCESS)
        assert abs(successes / slots - 0.5) < 0.015
