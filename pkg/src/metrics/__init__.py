from .aggregate import aggregate_seeds, ci95_half_width, combined_checksum
from .recorder import MetricsRecorder, RunSummary, frame_latency_increment
from .stability import stability_check, trend_slope, window_means

__all__ = [
    "MetricsRecorder",
    "RunSummary",
    "aggregate_seeds",
    "ci95_half_width",
    "combined_checksum",
    "frame_latency_increment",
    "stability_check",
    "trend_slope",
    "window_means",
]
