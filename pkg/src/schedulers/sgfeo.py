import logging
from typing import Optional

from src.belief import activity_posteriors, conditioned_exactly_one, sgfeo_reconstruct
from src.errors import ObservationImpossible
from src.models import Assignment, EfficiencyMode, Observation, SchedulerKind, SimConfig
from src.schedulers.base import BaseScheduler
from src.schedulers.greedy import activation_order, greedy_assign
from src.schedulers.pima import ShuffledBaseline

logger = logging.getLogger(__name__)


def sgfeo_schedule(
    obs: Observation,
    prev_nu: Optional[int],
    l1: float,
    arrival_mean: float,
    capacity: int,
    mode: EfficiencyMode = EfficiencyMode.FULL_FRAME,
) -> Assignment:
    if obs.nu == 0:
        return Assignment.empty(obs.n_users)

    cb = sgfeo_reconstruct(obs, prev_nu, arrival_mean, capacity)
    order = activation_order(activity_posteriors(cb, obs.nu))
    return greedy_assign(
        order,
        lambda users: conditioned_exactly_one(cb, obs.nu, users),
        obs.n_users,
        l1,
        mode,
    )


class SgfeoScheduler(BaseScheduler):
    kind = SchedulerKind.SGFEO

    def __init__(self, config: SimConfig):
        super().__init__(config)
        self._prev_nu = None
        self._fallbacks = 0
        self._baseline = ShuffledBaseline(config)

    @property
    def fallbacks(self) -> int:
        return self._fallbacks

    def schedule(self, obs: Observation) -> Assignment:
        prev_nu, self._prev_nu = self._prev_nu, obs.nu
        mode = self._config.efficiency_denominator
        mean = self._config.per_user_rate * obs.prev_frame_len
        try:
            return sgfeo_schedule(
                obs, prev_nu, self.l1, mean, self._config.belief_capacity, mode
            )
        except ObservationImpossible as e:
            self._fallbacks += 1
            logger.warning(f"Class reconstruction failed ({e}); using the PIMA baseline")
            return self._baseline(obs.nu)
