import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from src.core import to_ms
from src.errors import ContractViolation
from src.metrics.stability import stability_check, window_means
from src.models import EfficiencyMode, FrameResult, Packet, SimConfig, SimTime

logger = logging.getLogger(__name__)


@dataclass
class RunSummary:
    scheduler: str
    seed: int
    frames: int
    measured_frames: int
    avg_frame_efficiency: float
    avg_latency_ms: float
    delivered: int
    dropped: int
    generated: int
    residual: int
    mean_queue_len: float
    stability_flag: bool
    mean_frame_penalty: float = float("nan")
    fallbacks: int = 0
    traffic_checksum: str = ""
    config: dict = field(default_factory=dict)

    def conserved(self) -> bool:
        return self.delivered + self.dropped + self.residual == self.generated

    def to_dict(self) -> dict:
        return asdict(self)


def frame_latency_increment(
    result: FrameResult, buffered: list[Packet], carried_in: list[Packet]
) -> SimTime:
    """Latency accrued during one frame by the packets buffered at its start.

    Delivered packets accrue up to their delivery instant, the rest the whole
    frame; packets generated in the previous frame also add their wait until
    this frame began.
    """
    delivered_ids = {p.id for p in result.delivered}
    total = 0.0
    for packet in buffered:
        if packet.id in delivered_ids:
            total += packet.delivered_at - result.frame_start
        else:
            total += result.frame_len
    for packet in carried_in:
        total += result.frame_start - packet.generated_at
    return total


class MetricsRecorder:

    def __init__(self, config: SimConfig):
        self._config = config
        self._warmup = config.warmup_frames
        self._frames = 0
        self._eta_sum = 0.0
        self._eta_count = 0
        self._latency_sum_ms = 0.0
        self._latency_count = 0
        self._penalty_sum = 0.0
        self._penalty_count = 0
        self._delivered = 0
        self._dropped = 0
        self._queue_samples = []
        self._trace = []

    @property
    def measuring(self) -> bool:
        return self._frames >= self._warmup

    @property
    def trace(self) -> list[Packet]:
        return self._trace

    def record_frame(self, result: FrameResult, queue_total: int, penalty: float = None):
        if self.measuring:
            if result.nu_at_start > 0:
                self._eta_sum += self._frame_efficiency(result)
                self._eta_count += 1
            if penalty is not None:
                self._penalty_sum += penalty
                self._penalty_count += 1
            self._queue_samples.append(queue_total)
            for packet in result.delivered:
                self.record_delivery(packet)
        self._delivered += len(result.delivered)
        self._frames += 1

    def record_slot(self, delivered: Packet, queue_total: int):
        if self.measuring:
            self._queue_samples.append(queue_total)
            if delivered is not None:
                self.record_delivery(delivered)
        if delivered is not None:
            self._delivered += 1
        self._frames += 1

    def record_delivery(self, packet: Packet):
        latency = packet.latency
        if latency is None:
            raise ContractViolation(f"packet {packet.id} recorded before delivery")
        if latency <= 0:
            raise ContractViolation(f"packet {packet.id} delivered before generation")
        self._latency_sum_ms += to_ms(latency, self._config.slot_ms)
        self._latency_count += 1
        if self._config.trace_packets:
            self._trace.append(packet)

    def record_drop(self, packet: Packet):
        self._dropped += 1
        logger.debug(f"Dropped packet {packet.id} of user {packet.user} at the queue cap")

    def summary(
        self, generated: int, residual: int, checksum: str = "", fallbacks: int = 0
    ) -> RunSummary:
        config = self._config
        stable = self._stability()
        summary = RunSummary(
            scheduler=config.scheduler.value,
            seed=config.seed,
            frames=self._frames,
            measured_frames=max(0, self._frames - self._warmup),
            avg_frame_efficiency=self._ratio(self._eta_sum, self._eta_count),
            avg_latency_ms=self._ratio(self._latency_sum_ms, self._latency_count),
            delivered=self._delivered,
            dropped=self._dropped,
            generated=generated,
            residual=residual,
            mean_queue_len=(
                float(np.mean(self._queue_samples)) / config.n_users
                if self._queue_samples
                else 0.0
            ),
            stability_flag=stable,
            mean_frame_penalty=self._ratio(self._penalty_sum, self._penalty_count),
            fallbacks=fallbacks,
            traffic_checksum=checksum,
            config=config.to_dict(),
        )
        if not summary.conserved():
            raise ContractViolation(
                f"packet conservation broken: {summary.delivered} delivered + "
                f"{summary.dropped} dropped + {summary.residual} queued != {summary.generated}"
            )
        if not stable:
            logger.warning(
                f"{config.scheduler.value} at lambda={config.total_rate}: queues keep growing"
            )
        return summary

    def _frame_efficiency(self, result: FrameResult) -> float:
        if self._config.efficiency_denominator == EfficiencyMode.DT_ONLY:
            l2 = result.assignment.l2 if result.assignment is not None else 0
            return result.successes / l2 if l2 else 0.0
        return result.successes / result.frame_len

    def _stability(self) -> bool:
        if len(self._queue_samples) < 2:
            return True
        per_user = np.asarray(self._queue_samples, dtype=float) / self._config.n_users
        means = window_means(per_user, self._config.stability_windows)
        if len(means) < 2:
            return True
        return stability_check(
            means,
            slope_threshold=self._config.stability_slope,
            frames_per_window=len(self._queue_samples) / len(means),
        )

    @staticmethod
    def _ratio(total: float, count: int) -> float:
        return total / count if count else math.nan
