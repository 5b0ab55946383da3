from typing import Sequence

import numpy as np

from src.errors import ContractViolation


def window_means(samples: Sequence[float], windows: int) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if len(samples) == 0:
        return np.zeros(0)
    windows = max(1, min(windows, len(samples)))
    return np.array([chunk.mean() for chunk in np.array_split(samples, windows)])


def trend_slope(queue_series: Sequence[float], frames_per_window: float = 1.0) -> float:
    series = np.asarray(queue_series, dtype=float)
    if len(series) < 2:
        raise ContractViolation("a queue trend needs at least two windows")
    tail = series[len(series) // 2:]
    if len(tail) < 2:
        tail = series[-2:]
    x = np.arange(len(tail)) * frames_per_window
    slope, _ = np.polyfit(x, tail, 1)
    return float(slope)


def stability_check(
    queue_series: Sequence[float],
    slope_threshold: float = 0.01,
    frames_per_window: float = 1.0,
) -> bool:
    """True when the per-user mean queue length shows no growth trend over the last half of the run."""
    return trend_slope(queue_series, frames_per_window) <= slope_threshold
