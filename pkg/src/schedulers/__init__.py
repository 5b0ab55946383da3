from src.errors import ConfigError
from src.models import SchedulerKind, SimConfig

from .base import BaseScheduler
from .efficiency import frame_efficiency
from .gfeo import GfeoScheduler, gfeo_schedule
from .greedy import activation_order, greedy_assign
from .pima import (
    PimaScheduler,
    ShuffledBaseline,
    group_success_probability,
    pima_baseline_schedule,
    relabel_users,
)
from .saloha import SalohaPolicy, saloha_step
from .sgfeo import SgfeoScheduler, sgfeo_schedule
from .tdma import TdmaScheduler, tdma_schedule

FRAME_SCHEDULERS = {
    SchedulerKind.TDMA: TdmaScheduler,
    SchedulerKind.PIMA: PimaScheduler,
    SchedulerKind.GFEO: GfeoScheduler,
    SchedulerKind.SGFEO: SgfeoScheduler,
}


def check_gate(config: SimConfig):
    if config.scheduler == SchedulerKind.GFEO and config.n_users > config.gfeo_max_users:
        raise ConfigError(
            "scheduler",
            f"GFEO tracks (C+1)^N belief states and is gated to N <= {config.gfeo_max_users} "
            f"(got N={config.n_users}); raise gfeo_max_users to override or use SGFEO",
        )


def build_scheduler(config: SimConfig):
    check_gate(config)
    if config.scheduler == SchedulerKind.SALOHA:
        return SalohaPolicy(rate=config.total_rate)
    return FRAME_SCHEDULERS[config.scheduler](config)


__all__ = [
    "BaseScheduler",
    "FRAME_SCHEDULERS",
    "GfeoScheduler",
    "PimaScheduler",
    "SalohaPolicy",
    "SgfeoScheduler",
    "ShuffledBaseline",
    "TdmaScheduler",
    "activation_order",
    "build_scheduler",
    "check_gate",
    "frame_efficiency",
    "gfeo_schedule",
    "greedy_assign",
    "group_success_probability",
    "pima_baseline_schedule",
    "relabel_users",
    "saloha_step",
    "sgfeo_schedule",
    "tdma_schedule",
]
