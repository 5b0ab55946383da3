import logging
from dataclasses import dataclass

import numpy as np

from config.settings import settings
from src.belief import (
    active_count_distribution,
    conditioned_success_dp,
    filter_update,
    slot_success_probability,
)
from src.errors import ObservationImpossible, OracleMismatch
from src.oracle.enumeration import (
    brute_force_conditioned_success,
    enumerate_filter,
    slot_success_from_support,
    total_variation,
)
from src.oracle.exhaustive import exhaustive_partition, exhaustive_schedule
from src.oracle.instances import (
    random_assignment,
    random_belief,
    random_class_instance,
    sample_observation,
)
from src.oracle.montecarlo import binomial_sigma, mc_success_estimate
from src.schedulers import frame_efficiency, gfeo_schedule, pima_baseline_schedule
from src.schedulers.pima import group_success_probability
from src.traffic import rng_fork

logger = logging.getLogger(__name__)

FILTER_TOL = 1e-12
DP_TOL = 1e-9
GREEDY_TOL = 1e-12
PARTITION_TOL = 1e-12
MC_SIGMAS = 4.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    instances: int
    max_error: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"[{status}] {self.name}: {self.instances} instances, "
            f"max error {self.max_error:.3g} (tol {self.tolerance:g})"
        )
        return f"{text}; {self.detail}" if self.detail else text


def check_filter(seed: int, cases=((2, 2, 100), (3, 2, 20))) -> CheckResult:
    worst = 0.0
    count = 0
    parity_failures = 0
    for stream, (n_users, capacity, instances) in enumerate(cases):
        rng = rng_fork(seed, stream)
        for _ in range(instances):
            prior = random_belief(rng, n_users, capacity)
            assignment = random_assignment(rng, n_users)
            mean = float(rng.uniform(0.05, 1.0))
            obs = sample_observation(rng, prior, assignment, mean)

            fast = exact = None
            try:
                fast = filter_update(prior, assignment, obs, mean, prune_epsilon=0.0)
            except ObservationImpossible:
                pass
            try:
                exact = enumerate_filter(prior, assignment, obs, mean, capacity)
            except ObservationImpossible:
                pass

            count += 1
            if (fast is None) != (exact is None):
                parity_failures += 1
            elif fast is not None:
                worst = max(worst, total_variation(fast, exact))

    return CheckResult(
        name="filter vs dense enumeration",
        passed=worst <= FILTER_TOL and parity_failures == 0,
        instances=count,
        max_error=worst,
        tolerance=FILTER_TOL,
        detail=f"{parity_failures} error-parity failures" if parity_failures else "",
    )


def check_dp(seed: int, instances: int = 100) -> CheckResult:
    rng = rng_fork(seed, 10)
    worst = 0.0
    for _ in range(instances):
        n_users = int(rng.integers(2, 7))
        capacity = int(rng.integers(1, 4))
        cb, obs_nu, q, slot = random_class_instance(rng, n_users, capacity)
        fast = conditioned_success_dp(cb, obs_nu, q.q, slot)
        exact = brute_force_conditioned_success(cb, obs_nu, q.users_in_slot(slot))
        worst = max(worst, abs(fast - exact))

    return CheckResult(
        name="conditioned success DP vs brute force",
        passed=worst <= DP_TOL,
        instances=instances,
        max_error=worst,
        tolerance=DP_TOL,
    )


def check_greedy(
    seed: int,
    instances: int = 200,
    n_users: int = 4,
    capacity: int = 2,
    l1: float = settings.PIA_LEN,
) -> CheckResult:
    rng = rng_fork(seed, 20)
    worst_excess = 0.0
    gaps = []
    for _ in range(instances):
        nu = int(rng.integers(1, n_users + 1))
        belief = random_belief(rng, n_users, capacity, nu=nu)
        assignment = gfeo_schedule(belief, nu, l1)
        probs = [slot_success_from_support(belief, group) for group in assignment.groups()]
        greedy_eta = frame_efficiency(probs, l1)
        _, best_eta = exhaustive_schedule(belief, nu, l1)

        worst_excess = max(worst_excess, greedy_eta - best_eta)
        gaps.append((best_eta - greedy_eta) / best_eta if best_eta > 0 else 0.0)

    gaps = np.array(gaps)
    equal_rate = float(np.mean(gaps <= GREEDY_TOL))
    logger.info(
        f"Greedy vs exhaustive: mean gap {gaps.mean():.4%}, equal on {equal_rate:.1%}"
    )
    return CheckResult(
        name="greedy never beats exhaustive search",
        passed=worst_excess <= GREEDY_TOL,
        instances=instances,
        max_error=max(worst_excess, 0.0),
        tolerance=GREEDY_TOL,
        detail=f"mean relative gap {gaps.mean():.4%}, optimal on {equal_rate:.1%}",
    )


def check_pima(n_users: int = 5, l1_values=(0.1, 0.25)) -> CheckResult:
    worst = 0.0
    count = 0
    for l1 in l1_values:
        for nu in range(1, n_users + 1):
            assignment = pima_baseline_schedule(nu, n_users, l1)
            _, best_eta = exhaustive_partition(nu, n_users, l1)
            probs = [group_success_probability(len(g), n_users, nu) for g in assignment.groups()]
            eta = frame_efficiency(probs, l1)
            worst = max(worst, abs(eta - best_eta))
            count += 1

    return CheckResult(
        name="PIMA baseline vs exhaustive partition",
        passed=worst <= PARTITION_TOL,
        instances=count,
        max_error=worst,
        tolerance=PARTITION_TOL,
    )


def check_montecarlo(seed: int, instances: int = 10, samples: int = 20000) -> CheckResult:
    rng = rng_fork(seed, 30)
    worst_sigmas = 0.0
    for index in range(instances):
        if index % 2 == 0:
            belief = random_belief(rng, 3, 2)
            q = random_assignment(rng, 3)
            slot = int(rng.integers(1, q.l2 + 1))
            analytic = slot_success_probability(belief, q.q, slot)
            estimate = mc_success_estimate(belief, q.q, slot, samples, rng)
        else:
            cb, _, q, slot = random_class_instance(rng, 4, 2)
            obs_nu = int(np.argmax(active_count_distribution(cb)))
            analytic = conditioned_success_dp(cb, obs_nu, q.q, slot)
            estimate = mc_success_estimate(cb, q.q, slot, samples, rng, obs_nu=obs_nu)

        sigma = max(binomial_sigma(analytic, samples), 1.0 / samples)
        worst_sigmas = max(worst_sigmas, abs(estimate - analytic) / sigma)

    return CheckResult(
        name="Monte-Carlo vs analytic slot success",
        passed=worst_sigmas <= MC_SIGMAS,
        instances=instances,
        max_error=worst_sigmas,
        tolerance=MC_SIGMAS,
        detail="error in binomial standard deviations",
    )


def run_calibration(seed: int = None) -> list[CheckResult]:
    seed = settings.CALIBRATION_SEED if seed is None else seed
    results = [
        check_filter(seed),
        check_dp(seed),
        check_greedy(seed),
        check_pima(),
        check_montecarlo(seed),
    ]
    for result in results:
        log = logger.info if result.passed else logger.error
        log(result.line())
    return results


def assert_calibrated(results: list[CheckResult]):
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise OracleMismatch(f"oracle checks failed: {', '.join(failed)}")
