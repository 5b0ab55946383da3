from dataclasses import dataclass
from typing import Optional

from src.errors import BudgetExceeded

MAX_STATES = 10**7


@dataclass(frozen=True)
class OracleBudget:
    max_users: int = 4
    max_capacity: int = 3
    max_l2: Optional[int] = None
    max_states: int = MAX_STATES

    def check_users(self, n_users: int):
        if n_users > self.max_users:
            raise BudgetExceeded(f"{n_users} users exceeds the oracle limit of {self.max_users}")

    def check_capacity(self, capacity: int):
        if capacity > self.max_capacity:
            raise BudgetExceeded(
                f"capacity {capacity} exceeds the oracle limit of {self.max_capacity}"
            )

    def check_states(self, count: int, what: str = "states"):
        if count > min(self.max_states, MAX_STATES):
            raise BudgetExceeded(f"{count} {what} exceeds the enumeration limit of {self.max_states}")

    def l2_limit(self, n_users: int) -> int:
        return n_users if self.max_l2 is None else min(n_users, self.max_l2)


DP_BUDGET = OracleBudget(max_users=6, max_capacity=3)
PARTITION_BUDGET = OracleBudget(max_users=12)
