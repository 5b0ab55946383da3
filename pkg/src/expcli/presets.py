import os

import numpy as np

from config.settings import settings
from src.errors import ConfigError
from src.models import SchedulerKind, SimConfig

TDMA, SALOHA, PIMA, GFEO, SGFEO = (
    SchedulerKind.TDMA,
    SchedulerKind.SALOHA,
    SchedulerKind.PIMA,
    SchedulerKind.GFEO,
    SchedulerKind.SGFEO,
)

LAMBDA_GRID = tuple(round(float(x), 6) for x in np.linspace(0.01, 0.5, 10))

# Efficiency vs load (N=5), latency vs load (N=5), latency at scale (N=30, L1=Ts/4).
PRESETS = {
    "fig2": {"n_users": 5, "pia_len": 0.1, "schedulers": (TDMA, PIMA, GFEO, SGFEO)},
    "fig3": {"n_users": 5, "pia_len": 0.1, "schedulers": (TDMA, SALOHA, PIMA, GFEO, SGFEO)},
    "fig4": {"n_users": 30, "pia_len": 0.25, "schedulers": (TDMA, SALOHA, PIMA, SGFEO)},
}

FIGURE_METRIC = {
    "fig2": ("eta_mean", "eta_ci95", "Avg. Frame Efficiency"),
    "fig3": ("latency_ms_mean", "latency_ms_ci95", "Avg. Packet Latency [ms]"),
    "fig4": ("latency_ms_mean", "latency_ms_ci95", "Avg. Packet Latency [ms]"),
}


def default_seeds(count: int = None) -> tuple:
    count = settings.SEED_COUNT if count is None else count
    return tuple(range(settings.BASE_SEED, settings.BASE_SEED + count))


def preset_fields(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset '{name}', expected one of {sorted(PRESETS)}")
    preset = PRESETS[name]
    return {
        "base": SimConfig(n_users=preset["n_users"], pia_len=preset["pia_len"], slot_ms=0.125),
        "lambda_grid": LAMBDA_GRID,
        "schedulers": preset["schedulers"],
        "seeds": default_seeds(),
        "output_path": os.path.join(settings.OUTPUT_DIR, f"{name}.csv"),
        "figure": name,
    }
