from .filter import (
    ActivityDistribution,
    activation_probabilities,
    filter_update,
    slot_success_probability,
)
from .kernel import arrival_matrix, transition_distribution
from .model import Belief
from .reconstruction import (
    CompatibleClassBelief,
    Evidence,
    active_count_distribution,
    activity_posteriors,
    conditioned_exactly_one,
    conditioned_success_dp,
    sgfeo_reconstruct,
)
from .state_space import StateSpace, get_state_space

__all__ = [
    "ActivityDistribution",
    "Belief",
    "CompatibleClassBelief",
    "Evidence",
    "StateSpace",
    "activation_probabilities",
    "active_count_distribution",
    "activity_posteriors",
    "arrival_matrix",
    "conditioned_exactly_one",
    "conditioned_success_dp",
    "filter_update",
    "get_state_space",
    "sgfeo_reconstruct",
    "slot_success_probability",
    "transition_distribution",
]
