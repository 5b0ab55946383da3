import dataclasses
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from config.settings import settings
from src.errors import ConfigError, ContractViolation

SimTime = float

MAX_SEED = 2**64


class SchedulerKind(str, Enum):
    TDMA = "TDMA"
    SALOHA = "SALOHA"
    PIMA = "PIMA"
    GFEO = "GFEO"
    SGFEO = "SGFEO"

    @classmethod
    def parse(cls, name: str) -> "SchedulerKind":
        key = str(name).strip().upper().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ConfigError("scheduler", f"unknown scheduler '{name}'")


class EfficiencyMode(str, Enum):
    DT_ONLY = "DT_ONLY"
    FULL_FRAME = "FULL_FRAME"


class LatencyReference(str, Enum):
    SLOT_START = "SLOT_START"
    SLOT_END = "SLOT_END"


class OutcomeKind(str, Enum):
    IDLE = "IDLE"
    SUCCESS = "SUCCESS"
    COLLISION = "COLLISION"


PIMA_FAMILY = frozenset({SchedulerKind.PIMA, SchedulerKind.GFEO, SchedulerKind.SGFEO})


def _parse_enum(enum_cls, value, field_name: str):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(str(value).strip().upper())
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ConfigError(field_name, f"expected one of {allowed}, got '{value}'")


@dataclass(frozen=True)
class SimConfig:
    n_users: int = 5
    total_rate: float = 0.1
    slot_ms: float = settings.SLOT_MS
    pia_len: float = settings.PIA_LEN
    belief_capacity: int = settings.BELIEF_CAPACITY
    horizon_frames: int = settings.HORIZON_FRAMES
    seed: int = settings.BASE_SEED
    scheduler: SchedulerKind = SchedulerKind.PIMA
    efficiency_denominator: EfficiencyMode = EfficiencyMode.FULL_FRAME
    latency_reference: Optional[LatencyReference] = None
    prune_epsilon: float = settings.PRUNE_EPSILON
    tdma_queue_cap: Optional[int] = settings.TDMA_QUEUE_CAP
    warmup_fraction: float = settings.WARMUP_FRACTION
    gfeo_max_users: int = settings.GFEO_MAX_USERS
    stability_slope: float = settings.STABILITY_SLOPE
    stability_windows: int = settings.STABILITY_WINDOWS
    trace_packets: bool = False

    def __post_init__(self):
        if not isinstance(self.scheduler, SchedulerKind):
            object.__setattr__(self, "scheduler", SchedulerKind.parse(self.scheduler))
        object.__setattr__(
            self,
            "efficiency_denominator",
            _parse_enum(EfficiencyMode, self.efficiency_denominator, "efficiency_denominator"),
        )
        if self.latency_reference is not None:
            object.__setattr__(
                self,
                "latency_reference",
                _parse_enum(LatencyReference, self.latency_reference, "latency_reference"),
            )

    @property
    def per_user_rate(self) -> float:
        return self.total_rate / self.n_users

    @property
    def frame_based(self) -> bool:
        return self.scheduler != SchedulerKind.SALOHA

    @property
    def resolved_latency_reference(self) -> LatencyReference:
        if self.latency_reference is not None:
            return self.latency_reference
        if self.scheduler in PIMA_FAMILY:
            return LatencyReference.SLOT_END
        return LatencyReference.SLOT_START

    @property
    def warmup_frames(self) -> int:
        return int(self.horizon_frames * self.warmup_fraction)

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        for key, value in data.items():
            if isinstance(value, Enum):
                data[key] = value.value
        return data

    def validate(self) -> "SimConfig":
        if isinstance(self.n_users, bool) or not isinstance(self.n_users, int) or self.n_users < 1:
            raise ConfigError("n_users", "must be a positive integer")
        if not math.isfinite(self.total_rate) or self.total_rate < 0:
            raise ConfigError("total_rate", "must be a finite real >= 0")
        if not self.slot_ms > 0:
            raise ConfigError("slot_ms", "must be > 0")
        if not math.isfinite(self.pia_len) or self.pia_len < 0:
            raise ConfigError("pia_len", "must be >= 0")
        if self.scheduler in PIMA_FAMILY and self.pia_len == 0:
            raise ConfigError(
                "pia_len", "must be > 0 for PIMA-family schedulers (empty frames are PIA only)"
            )
        if not isinstance(self.belief_capacity, int) or self.belief_capacity < 1:
            raise ConfigError("belief_capacity", "must be an integer >= 1")
        if not isinstance(self.horizon_frames, int) or self.horizon_frames < 1:
            raise ConfigError("horizon_frames", "must be a positive integer")
        if not isinstance(self.seed, int) or not 0 <= self.seed < MAX_SEED:
            raise ConfigError("seed", "must be a 64-bit unsigned integer")
        if not 0 <= self.prune_epsilon < 1e-6:
            raise ConfigError("prune_epsilon", "must satisfy 0 <= prune_epsilon < 1e-6")
        if self.tdma_queue_cap is not None and (
            not isinstance(self.tdma_queue_cap, int) or self.tdma_queue_cap < 1
        ):
            raise ConfigError("tdma_queue_cap", "must be a positive integer or unbounded")
        if not 0 <= self.warmup_fraction < 1:
            raise ConfigError("warmup_fraction", "must lie in [0, 1)")
        if not isinstance(self.gfeo_max_users, int) or self.gfeo_max_users < 1:
            raise ConfigError("gfeo_max_users", "must be a positive integer")
        if self.stability_windows < 2:
            raise ConfigError("stability_windows", "must be >= 2")
        return self


@dataclass
class Packet:
    id: int
    user: int
    generated_at: SimTime
    delivered_at: Optional[SimTime] = None

    def deliver(self, at: SimTime):
        if at <= self.generated_at:
            raise ContractViolation(
                f"packet {self.id} delivered at {at} before generation at {self.generated_at}"
            )
        self.delivered_at = at

    @property
    def latency(self) -> Optional[SimTime]:
        if self.delivered_at is None:
            return None
        return self.delivered_at - self.generated_at


@dataclass
class UserQueue:
    user: int
    packets: deque = field(default_factory=deque)
    eligible_count: int = 0

    def __len__(self) -> int:
        return len(self.packets)

    def push(self, packet: Packet):
        if self.packets and packet.generated_at < self.packets[-1].generated_at:
            raise ContractViolation(f"user {self.user}: arrivals must be pushed in order")
        self.packets.append(packet)

    def refresh_eligibility(self, now: SimTime) -> int:
        count = 0
        for packet in self.packets:
            if packet.generated_at >= now:
                break
            count += 1
        self.eligible_count = count
        return count

    def head_eligible_before(self, now: SimTime) -> bool:
        return bool(self.packets) and self.packets[0].generated_at < now

    def pop_head(self) -> Packet:
        packet = self.packets.popleft()
        self.eligible_count = max(0, self.eligible_count - 1)
        return packet

    def drop_oldest(self) -> Packet:
        return self.pop_head()


@dataclass(frozen=True)
class Assignment:
    q: tuple

    def __post_init__(self):
        q = tuple(int(x) for x in self.q)
        object.__setattr__(self, "q", q)
        if any(x < 0 for x in q):
            raise ContractViolation(f"negative slot index in {q}")
        used = set(x for x in q if x > 0)
        if used and used != set(range(1, max(used) + 1)):
            raise ContractViolation(f"assignment {q} leaves scheduled slots empty")
        if used and 0 in q:
            raise ContractViolation(f"assignment {q} mixes the empty sentinel with slots")

    @classmethod
    def empty(cls, n_users: int) -> "Assignment":
        return cls(q=(0,) * n_users)

    @classmethod
    def from_groups(cls, groups: list, n_users: int) -> "Assignment":
        q = [0] * n_users
        for slot, group in enumerate(groups, start=1):
            for user in group:
                q[user] = slot
        return cls(q=tuple(q))

    @property
    def l2(self) -> int:
        return max(self.q) if self.q else 0

    @property
    def n_users(self) -> int:
        return len(self.q)

    def users_in_slot(self, slot: int) -> tuple:
        return tuple(n for n, s in enumerate(self.q) if s == slot)

    def groups(self) -> list:
        return [self.users_in_slot(slot) for slot in range(1, self.l2 + 1)]


@dataclass(frozen=True)
class SlotOutcome:
    kind: OutcomeKind
    users: frozenset = frozenset()

    def __post_init__(self):
        size = len(self.users)
        if self.kind == OutcomeKind.IDLE and size != 0:
            raise ContractViolation("idle slot cannot carry users")
        if self.kind == OutcomeKind.SUCCESS and size != 1:
            raise ContractViolation("success carries exactly one user")
        if self.kind == OutcomeKind.COLLISION and size < 2:
            raise ContractViolation("collision carries at least two users")

    @classmethod
    def idle(cls) -> "SlotOutcome":
        return cls(OutcomeKind.IDLE)

    @classmethod
    def success(cls, user: int) -> "SlotOutcome":
        return cls(OutcomeKind.SUCCESS, frozenset({user}))

    @classmethod
    def collision(cls, users) -> "SlotOutcome":
        return cls(OutcomeKind.COLLISION, frozenset(users))

    @classmethod
    def from_transmitters(cls, users) -> "SlotOutcome":
        users = list(users)
        if not users:
            return cls.idle()
        if len(users) == 1:
            return cls.success(users[0])
        return cls.collision(users)

    @property
    def user(self) -> Optional[int]:
        if self.kind != OutcomeKind.SUCCESS:
            return None
        return next(iter(self.users))


@dataclass(frozen=True)
class Observation:
    nu: int
    acks: tuple
    collided_slots: frozenset
    prev_assignment: Assignment
    prev_frame_len: SimTime

    @classmethod
    def initial(cls, n_users: int, nu: int = 0) -> "Observation":
        return cls(
            nu=nu,
            acks=(False,) * n_users,
            collided_slots=frozenset(),
            prev_assignment=Assignment.empty(n_users),
            prev_frame_len=0.0,
        )

    @property
    def n_users(self) -> int:
        return len(self.acks)

    @property
    def acked_users(self) -> list:
        return [n for n, ack in enumerate(self.acks) if ack]

    @property
    def has_history(self) -> bool:
        return self.prev_frame_len > 0

    def slot_kinds(self, assignment: Assignment = None) -> dict:
        assignment = assignment or self.prev_assignment
        kinds = {}
        for slot in range(1, assignment.l2 + 1):
            kinds[slot] = OutcomeKind.COLLISION if slot in self.collided_slots else OutcomeKind.IDLE
        for user in self.acked_users:
            slot = assignment.q[user]
            if slot == 0 or slot in self.collided_slots:
                raise ContractViolation(f"ack for user {user} contradicts slot {slot}")
            if kinds[slot] == OutcomeKind.SUCCESS:
                raise ContractViolation(f"slot {slot} acknowledged twice")
            kinds[slot] = OutcomeKind.SUCCESS
        return kinds


@dataclass
class FrameResult:
    outcomes: list
    acks: tuple
    collided_slots: frozenset
    nu_at_start: int
    frame_start: SimTime
    frame_len: SimTime
    assignment: Optional[Assignment] = None
    delivered: list = field(default_factory=list)

    @property
    def successes(self) -> int:
        return sum(1 for o in self.outcomes if o.kind == OutcomeKind.SUCCESS)

    @property
    def frame_end(self) -> SimTime:
        return self.frame_start + self.frame_len

    def next_observation(self, nu: int) -> Observation:
        return Observation(
            nu=nu,
            acks=self.acks,
            collided_slots=self.collided_slots,
            prev_assignment=self.assignment or Assignment.empty(len(self.acks)),
            prev_frame_len=self.frame_len,
        )
