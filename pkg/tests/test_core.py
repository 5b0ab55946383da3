import os
import sys
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.core import SimClock, frame_length, to_ms
from src.errors import ConfigError, ContractViolation
from src.models import (
    Assignment,
    LatencyReference,
    Observation,
    OutcomeKind,
    Packet,
    SchedulerKind,
    SimConfig,
    SlotOutcome,
    UserQueue,
)


class TestFrameLength:

    def test_single_slot_frame_includes_pia(self):
        assert frame_length(0.1, Assignment(q=(1,))) == pytest.approx(1.1)

    def test_empty_frame_is_pia_only(self):
        assert frame_length(0.1, Assignment.empty(3)) == pytest.approx(0.1)

    def test_lengths_add(self):
        assignment = Assignment(q=tuple(range(1, 8)))
        assert frame_length(0.25, assignment) == pytest.approx(7.25)

    def test_negative_pia_rejected(self):
        with pytest.raises(ContractViolation):
            frame_length(-0.1, Assignment(q=(1,)))


class TestToMs:

    def test_low_traffic_latency_conversion(self):
        assert to_ms(1.15, 0.125) == pytest.approx(0.14375)

    def test_zero(self):
        assert to_ms(0, 0.125) == 0

    def test_product(self):
        assert to_ms(2.5, 0.125) == pytest.approx(0.3125)

    def test_non_positive_slot_rejected(self):
        with pytest.raises(ContractViolation):
            to_ms(1.0, 0.0)


class TestSimClock:

    def test_advance_accumulates(self):
        clock = SimClock()
        clock.advance(1.1)
        clock.advance(0.1)
        assert clock.now == pytest.approx(1.2)
        assert clock.frames == 2

    def test_zero_length_frame_rejected(self):
        with pytest.raises(ContractViolation):
            SimClock().advance(0.0)


class TestAssignment:

    def test_from_groups_maps_users_to_slots(self):
        assignment = Assignment.from_groups([(0, 2), (1,)], 3)
        assert assignment.q == (1, 2, 1)
        assert assignment.l2 == 2
        assert assignment.users_in_slot(1) == (0, 2)

    def test_gap_in_slots_rejected(self):
        with pytest.raises(ContractViolation):
            Assignment(q=(1, 3))

    def test_sentinel_mixed_with_slots_rejected(self):
        with pytest.raises(ContractViolation):
            Assignment(q=(0, 1))

    def test_empty_assignment(self):
        assignment = Assignment.empty(4)
        assert assignment.l2 == 0
        assert assignment.groups() == []


class TestSimConfig:

    def test_defaults_validate(self):
        config = SimConfig().validate()
        assert config.resolved_latency_reference == LatencyReference.SLOT_END

    def test_baselines_default_to_slot_start(self):
        assert SimConfig(scheduler="TDMA").resolved_latency_reference == LatencyReference.SLOT_START
        assert SimConfig(scheduler="SALOHA").resolved_latency_reference == LatencyReference.SLOT_START

    def test_error_names_offending_field(self):
        with pytest.raises(ConfigError) as exc:
            SimConfig(n_users=0).validate()
        assert exc.value.field_name == "n_users"
        assert str(exc.value).startswith("n_users:")

    def test_pima_family_needs_positive_pia(self):
        with pytest.raises(ConfigError) as exc:
            SimConfig(scheduler="SGFEO", pia_len=0.0).validate()
        assert exc.value.field_name == "pia_len"

    def test_tdma_allows_zero_pia(self):
        SimConfig(scheduler="TDMA", pia_len=0.0).validate()

    def test_prune_epsilon_bound(self):
        with pytest.raises(ConfigError) as exc:
            SimConfig(prune_epsilon=1e-3).validate()
        assert exc.value.field_name == "prune_epsilon"

    def test_unknown_efficiency_mode(self):
        with pytest.raises(ConfigError) as exc:
            SimConfig(efficiency_denominator="HALF")
        assert exc.value.field_name == "efficiency_denominator"

    def test_scheduler_names_are_lenient(self):
        assert SchedulerKind.parse("s-gfeo") == SchedulerKind.SGFEO
        assert SchedulerKind.parse(" pima ") == SchedulerKind.PIMA

    def test_unknown_scheduler(self):
        with pytest.raises(ConfigError):
            SchedulerKind.parse("CSMA")

    def test_per_user_rate_and_warmup(self):
        config = SimConfig(n_users=5, total_rate=0.5, horizon_frames=1000, warmup_fraction=0.1)
        assert config.per_user_rate == pytest.approx(0.1)
        assert config.warmup_frames == 100

    def test_to_dict_uses_plain_values(self):
        data = SimConfig(scheduler="GFEO").to_dict()
        assert data["scheduler"] == "GFEO"
        assert data["efficiency_denominator"] == "FULL_FRAME"


class TestPacketAndQueue:

    def test_delivery_before_generation_rejected(self):
        packet = Packet(id=0, user=0, generated_at=2.0)
        with pytest.raises(ContractViolation):
            packet.deliver(2.0)

    def test_latency(self):
        packet = Packet(id=0, user=0, generated_at=10.05)
        packet.deliver(11.2)
        assert packet.latency == pytest.approx(1.15)

    def test_out_of_order_push_rejected(self):
        queue = UserQueue(user=0)
        queue.push(Packet(id=0, user=0, generated_at=1.0))
        with pytest.raises(ContractViolation):
            queue.push(Packet(id=1, user=0, generated_at=0.5))

    def test_eligibility_counts_packets_before_frame_start(self):
        queue = UserQueue(user=0)
        for i, t in enumerate([0.2, 0.7, 1.3]):
            queue.push(Packet(id=i, user=0, generated_at=t))
        assert queue.refresh_eligibility(1.0) == 2
        assert len(queue) == 3


class TestObservation:

    def test_initial_has_no_history(self):
        obs = Observation.initial(3, nu=1)
        assert not obs.has_history
        assert obs.slot_kinds() == {}

    def test_slot_kinds_from_feedback(self):
        obs = Observation(
            nu=2,
            acks=(False, False, True),
            collided_slots=frozenset({1}),
            prev_assignment=Assignment(q=(1, 1, 2)),
            prev_frame_len=2.1,
        )
        assert obs.slot_kinds() == {1: OutcomeKind.COLLISION, 2: OutcomeKind.SUCCESS}

    def test_double_ack_on_one_slot_rejected(self):
        obs = Observation(
            nu=0,
            acks=(True, True),
            collided_slots=frozenset(),
            prev_assignment=Assignment(q=(1, 1)),
            prev_frame_len=1.1,
        )
        with pytest.raises(ContractViolation):
            obs.slot_kinds()

    def test_slot_outcome_from_transmitters(self):
        assert SlotOutcome.from_transmitters([]).kind == OutcomeKind.IDLE
        assert SlotOutcome.from_transmitters([2]).user == 2
        assert SlotOutcome.from_transmitters([0, 1]).kind == OutcomeKind.COLLISION
