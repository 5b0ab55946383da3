from .frame_executor import FrameExecutor
from .slotted import FixedProbabilityPolicy, SlotPolicy, SlotRecord, run_slotted

__all__ = ["FrameExecutor", "FixedProbabilityPolicy", "SlotPolicy", "SlotRecord", "run_slotted"]
