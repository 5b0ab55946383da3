import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


def _optional_int(var_name: str, default: int):
    value = os.getenv(var_name)
    if value is None:
        return default
    if value.strip().lower() in {"", "none", "unbounded"}:
        return None
    return int(value)


@dataclass(frozen=True)
class AppSettings:
    SLOT_MS: float = float(os.getenv("SLOT_MS", 0.125))
    PIA_LEN: float = float(os.getenv("PIA_LEN", 0.1))

    BELIEF_CAPACITY: int = int(os.getenv("BELIEF_CAPACITY", 8))
    PRUNE_EPSILON: float = float(os.getenv("PRUNE_EPSILON", 1e-12))
    GFEO_MAX_USERS: int = int(os.getenv("GFEO_MAX_USERS", 6))

    HORIZON_FRAMES: int = int(os.getenv("HORIZON_FRAMES", 200000))
    SEED_COUNT: int = int(os.getenv("SEED_COUNT", 10))
    BASE_SEED: int = int(os.getenv("BASE_SEED", 1))
    WARMUP_FRACTION: float = float(os.getenv("WARMUP_FRACTION", 0.1))

    TDMA_QUEUE_CAP: int = _optional_int("TDMA_QUEUE_CAP", 100)

    STABILITY_SLOPE: float = float(os.getenv("STABILITY_SLOPE", 0.01))
    STABILITY_WINDOWS: int = int(os.getenv("STABILITY_WINDOWS", 20))

    SWEEP_WORKERS: int = int(os.getenv("SWEEP_WORKERS", 1))
    CALIBRATION_SEED: int = int(os.getenv("CALIBRATION_SEED", 2024))

    OUTPUT_DIR: str = os.getenv("OUTPUT_DIR", "output")
    LOG_DIR: str = os.getenv("LOG_DIR", "logs")


settings = AppSettings()
