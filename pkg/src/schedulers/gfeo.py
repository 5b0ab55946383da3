import logging

from src.belief import (
    ActivityDistribution,
    Belief,
    activation_probabilities,
    filter_update,
)
from src.errors import ContractViolation, ObservationImpossible
from src.models import Assignment, EfficiencyMode, Observation, SchedulerKind, SimConfig
from src.schedulers.base import BaseScheduler
from src.schedulers.greedy import activation_order, greedy_assign
from src.schedulers.pima import ShuffledBaseline

logger = logging.getLogger(__name__)

MARGINAL_TOL = 1e-9


def gfeo_schedule(
    belief: Belief, nu: int, l1: float, mode: EfficiencyMode = EfficiencyMode.FULL_FRAME
) -> Assignment:
    n_users = belief.n_users
    if nu == 0:
        return Assignment.empty(n_users)

    phi = activation_probabilities(belief)
    if abs(phi.sum() - nu) > MARGINAL_TOL:
        raise ContractViolation(f"activation marginals sum to {phi.sum():.12f}, expected {nu}")

    activity = ActivityDistribution.from_belief(belief)
    return greedy_assign(activation_order(phi), activity.exactly_one, n_users, l1, mode)


class GfeoScheduler(BaseScheduler):
    kind = SchedulerKind.GFEO

    def __init__(self, config: SimConfig):
        super().__init__(config)
        self._belief = None
        self._last_nu = None
        self._fallbacks = 0
        self._baseline = ShuffledBaseline(config)

    @property
    def belief(self) -> Belief:
        return self._belief

    @property
    def fallbacks(self) -> int:
        return self._fallbacks

    def schedule(self, obs: Observation) -> Assignment:
        belief = self._next_belief(obs)
        self._last_nu = obs.nu
        mode = self._config.efficiency_denominator

        if belief is None:
            self._fallbacks += 1
            self._belief = Belief.uniform_with_actives(
                obs.n_users, self._config.belief_capacity, obs.nu
            )
            return self._baseline(obs.nu)

        self._belief = belief
        return gfeo_schedule(belief, obs.nu, self.l1, mode)

    def _next_belief(self, obs: Observation):
        capacity = self._config.belief_capacity
        if self._belief is None or not obs.has_history:
            # The system starts empty.
            if obs.nu == 0:
                return Belief.point_mass((0,) * obs.n_users, capacity)
            return Belief.uniform_with_actives(obs.n_users, capacity, obs.nu)

        mean = self._config.per_user_rate * obs.prev_frame_len
        epsilon = self._config.prune_epsilon
        try:
            return filter_update(self._belief, obs.prev_assignment, obs, mean, epsilon)
        except ObservationImpossible as e:
            logger.warning(f"Belief filter failed ({e}); retrying from the uniform compatible prior")

        try:
            prior = Belief.uniform_with_actives(
                obs.n_users, capacity, self._last_nu, frame=self._belief.frame
            )
            return filter_update(prior, obs.prev_assignment, obs, mean, epsilon)
        except (ObservationImpossible, ContractViolation) as e:
            logger.warning(f"Uniform compatible prior failed ({e}); using the PIMA baseline")
            return None
