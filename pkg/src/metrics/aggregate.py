import hashlib
import math
from typing import Sequence

import numpy as np
from scipy import stats


def ci95_half_width(values: Sequence[float], confidence: float = 0.95) -> float:
    a = np.asarray([v for v in values if not math.isnan(v)], dtype=float)
    n = len(a)
    if n < 2:
        return float("nan")
    se = stats.sem(a)
    return float(se * stats.t.ppf((1 + confidence) / 2.0, n - 1))


def combined_checksum(checksums: Sequence[str]) -> str:
    if len(checksums) == 1:
        return checksums[0]
    digest = hashlib.md5()
    for checksum in checksums:
        digest.update(checksum.encode())
    return digest.hexdigest()[:12]


def _mean(values: Sequence[float]) -> float:
    a = np.asarray([v for v in values if not math.isnan(v)], dtype=float)
    return float(a.mean()) if len(a) else float("nan")


def aggregate_seeds(summaries: list) -> dict:
    """Fold per-seed RunSummaries (in seed order) into one sweep-table row."""
    if not summaries:
        raise ValueError("no runs to aggregate")

    first = summaries[0]
    etas = [s.avg_frame_efficiency for s in summaries]
    latencies = [s.avg_latency_ms for s in summaries]

    return {
        "scheduler": first.config["scheduler"],
        "n_users": first.config["n_users"],
        "lambda_total": first.config["total_rate"],
        "seed_count": len(summaries),
        "frames": first.frames,
        "eta_mean": _mean(etas),
        "eta_ci95": ci95_half_width(etas),
        "latency_ms_mean": _mean(latencies),
        "latency_ms_ci95": ci95_half_width(latencies),
        "delivered": sum(s.delivered for s in summaries),
        "dropped": sum(s.dropped for s in summaries),
        "stable": all(s.stability_flag for s in summaries),
        "traffic_checksum": combined_checksum([s.traffic_checksum for s in summaries]),
    }
