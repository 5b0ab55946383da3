import hashlib
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.errors import ContractViolation
from src.models import Packet, SimTime
from src.traffic.rng import rng_fork

logger = logging.getLogger(__name__)

BLOCK_LEN = 1.0
CHECKSUM_BLOCKS = 64


@dataclass
class ArrivalBatch:
    user: int
    times: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __len__(self) -> int:
        return len(self.times)


def draw_arrivals(
    rate_per_slot: float,
    interval_start: SimTime,
    interval_len: float,
    rng: np.random.Generator,
    user: int = 0,
) -> ArrivalBatch:
    if rate_per_slot < 0 or interval_len < 0:
        raise ContractViolation("arrival rate and interval length must be >= 0")

    count = rng.poisson(rate_per_slot * interval_len)
    if count == 0:
        return ArrivalBatch(user=user, times=np.empty(0))

    offsets = np.sort(rng.random(count)) * interval_len
    return ArrivalBatch(user=user, times=interval_start + offsets)


class TrafficSource:

    def __init__(self, n_users: int, rate_per_user: float, seed: int):
        self._n_users = n_users
        self._rate = rate_per_user
        self._seed = seed
        self._rngs = [rng_fork(seed, user) for user in range(n_users)]
        self._buffers = [np.empty(0) for _ in range(n_users)]
        self._checksum_parts = [[] for _ in range(n_users)]
        self._blocks_drawn = 0
        self._consumed_until = 0.0
        self._next_packet_id = 0

    @property
    def generated(self) -> int:
        return self._next_packet_id

    def _draw_block(self):
        start = self._blocks_drawn * BLOCK_LEN
        for user, rng in enumerate(self._rngs):
            batch = draw_arrivals(self._rate, start, BLOCK_LEN, rng, user=user)
            self._buffers[user] = np.concatenate([self._buffers[user], batch.times])
            if self._blocks_drawn < CHECKSUM_BLOCKS:
                self._checksum_parts[user].append(batch.times.tobytes())
        self._blocks_drawn += 1

    def _ensure_drawn(self, until: SimTime):
        while self._blocks_drawn * BLOCK_LEN < until:
            self._draw_block()

    def arrivals_between(self, start: SimTime, end: SimTime) -> list[ArrivalBatch]:
        if not math.isclose(start, self._consumed_until, abs_tol=1e-9):
            raise ContractViolation(
                f"traffic consumed up to {self._consumed_until}, requested from {start}"
            )
        self._ensure_drawn(end)

        batches = []
        for user in range(self._n_users):
            buffer = self._buffers[user]
            cut = int(np.searchsorted(buffer, end, side="left"))
            batches.append(ArrivalBatch(user=user, times=buffer[:cut]))
            self._buffers[user] = buffer[cut:]

        self._consumed_until = end
        return batches

    def packets_between(self, start: SimTime, end: SimTime) -> list[Packet]:
        packets = []
        for batch in self.arrivals_between(start, end):
            for time in batch.times:
                packets.append(
                    Packet(id=self._next_packet_id, user=batch.user, generated_at=float(time))
                )
                self._next_packet_id += 1
        return packets

    def checksum(self) -> str:
        self._ensure_drawn(CHECKSUM_BLOCKS * BLOCK_LEN)
        digest = hashlib.md5()
        for parts in self._checksum_parts:
            for part in parts:
                digest.update(part)
        return digest.hexdigest()[:12]
