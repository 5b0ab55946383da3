import logging

from src.channel import FrameExecutor, run_slotted
from src.core import SimClock, frame_length
from src.metrics import MetricsRecorder, RunSummary, frame_latency_increment
from src.models import Observation, Packet, SchedulerKind, SimConfig, UserQueue
from src.schedulers import build_scheduler
from src.traffic import SALOHA_STREAM_ID, TrafficSource, rng_fork

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 10000


class SimulationOrchestrator:
    """One (SimConfig, seed) run from empty queues to RunSummary."""

    def __init__(
        self,
        config: SimConfig,
        traffic: TrafficSource = None,
        scheduler=None,
        executor: FrameExecutor = None,
        recorder: MetricsRecorder = None,
    ):
        self._config = config.validate()
        self._traffic = traffic or TrafficSource(
            config.n_users, config.per_user_rate, config.seed
        )
        self._scheduler = scheduler or build_scheduler(config)
        self._slot_eligibility = config.scheduler == SchedulerKind.TDMA
        self._executor = executor or FrameExecutor(
            config.n_users,
            latency_reference=config.resolved_latency_reference,
            slot_eligibility=self._slot_eligibility,
        )
        self._recorder = recorder or MetricsRecorder(config)
        self._queues = [UserQueue(user=n) for n in range(config.n_users)]

    @property
    def queues(self) -> list[UserQueue]:
        return self._queues

    @property
    def trace(self) -> list[Packet]:
        return self._recorder.trace

    def run(self) -> RunSummary:
        config = self._config
        logger.info(
            f"Run {config.scheduler.value}: N={config.n_users}, lambda={config.total_rate}, "
            f"seed={config.seed}, horizon={config.horizon_frames}"
        )

        if config.frame_based:
            self._run_frames()
        else:
            self._run_slots()

        summary = self._recorder.summary(
            generated=self._traffic.generated,
            residual=sum(len(q) for q in self._queues),
            checksum=self._traffic.checksum(),
            fallbacks=getattr(self._scheduler, "fallbacks", 0),
        )
        logger.info(
            f"Run {config.scheduler.value} seed={config.seed} done: "
            f"eta={summary.avg_frame_efficiency:.4f}, latency={summary.avg_latency_ms:.4f} ms, "
            f"delivered={summary.delivered}, dropped={summary.dropped}"
        )
        return summary

    def _run_frames(self):
        clock = SimClock()
        prev_result = None
        carried_in = []

        for frame in range(self._config.horizon_frames):
            start = clock.now
            if frame % PROGRESS_EVERY == 0:
                queued = sum(len(q) for q in self._queues)
                logger.debug(f"Frame {frame} at t={start:.1f}, queued={queued}")
            self._executor.refresh(self._queues, start)
            nu = self._executor.count_active(self._queues)
            obs = (
                prev_result.next_observation(nu)
                if prev_result is not None
                else Observation.initial(self._config.n_users, nu)
            )

            assignment = self._scheduler.schedule(obs)
            length = frame_length(self._scheduler.l1, assignment)
            buffered = [p for q in self._queues for p in q.packets if p.generated_at < start]

            # TDMA packets may go out in any later slot of the frame they arrive in.
            if self._slot_eligibility:
                arrivals = self._enqueue(start, start + length)

            result = self._executor.execute_frame(
                assignment, self._queues, start, self._scheduler.l1
            )
            self._scheduler.observe(result)
            self._recorder.record_frame(
                result,
                queue_total=sum(len(q) for q in self._queues),
                penalty=frame_latency_increment(result, buffered, carried_in),
            )

            if not self._slot_eligibility:
                arrivals = self._enqueue(start, start + length)
            carried_in = arrivals

            clock.advance(length)
            prev_result = result

    def _run_slots(self):
        coins = rng_fork(self._config.seed, SALOHA_STREAM_ID)
        slots = run_slotted(
            self._scheduler,
            self._queues,
            self._config.horizon_frames,
            coins,
            latency_reference=self._config.resolved_latency_reference,
        )
        for record in slots:
            self._recorder.record_slot(record.delivered, sum(len(q) for q in self._queues))
            self._enqueue(record.slot_start, record.slot_start + 1)

    def _enqueue(self, start: float, end: float) -> list[Packet]:
        cap = self._config.tdma_queue_cap if self._slot_eligibility else None
        packets = self._traffic.packets_between(start, end)
        for packet in packets:
            queue = self._queues[packet.user]
            if cap is not None and len(queue) >= cap:
                self._recorder.record_drop(queue.drop_oldest())
            queue.push(packet)
        return packets
