from typing import Sequence

from src.errors import ContractViolation
from src.models import EfficiencyMode


def frame_efficiency(
    success_probs: Sequence[float],
    l1: float,
    mode: EfficiencyMode = EfficiencyMode.FULL_FRAME,
) -> float:
    l2 = len(success_probs)
    if l2 < 1:
        raise ContractViolation("frame efficiency needs at least one scheduled slot")
    expected = float(sum(success_probs))
    if mode == EfficiencyMode.DT_ONLY:
        return expected / l2
    return expected / (l1 + l2)
