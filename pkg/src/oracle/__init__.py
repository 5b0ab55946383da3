from .budget import DP_BUDGET, PARTITION_BUDGET, OracleBudget
from .calibration import CheckResult, assert_calibrated, run_calibration
from .enumeration import (
    brute_force_conditioned_success,
    enumerate_filter,
    slot_success_from_support,
    total_variation,
)
from .exhaustive import (
    exhaustive_partition,
    exhaustive_schedule,
    integer_partitions,
    restricted_growth_strings,
)
from .instances import random_assignment, random_belief, random_class_instance, sample_observation
from .montecarlo import mc_success_estimate

__all__ = [
    "CheckResult",
    "DP_BUDGET",
    "OracleBudget",
    "PARTITION_BUDGET",
    "assert_calibrated",
    "brute_force_conditioned_success",
    "enumerate_filter",
    "exhaustive_partition",
    "exhaustive_schedule",
    "integer_partitions",
    "mc_success_estimate",
    "random_assignment",
    "random_belief",
    "random_class_instance",
    "restricted_growth_strings",
    "run_calibration",
    "sample_observation",
    "slot_success_from_support",
    "total_variation",
]
