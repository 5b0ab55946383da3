import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import pandas as pd

from config.settings import settings
from src.core import to_ms
from src.errors import ConfigError
from src.metrics import RunSummary, aggregate_seeds
from src.models import SchedulerKind, SimConfig
from src.orchestrator import SimulationOrchestrator
from src.schedulers import check_gate

logger = logging.getLogger(__name__)

COLUMNS = [
    "scheduler",
    "n_users",
    "lambda_total",
    "seed_count",
    "frames",
    "eta_mean",
    "eta_ci95",
    "latency_ms_mean",
    "latency_ms_ci95",
    "delivered",
    "dropped",
    "stable",
    "traffic_checksum",
]
TRACE_COLUMNS = [
    "scheduler",
    "lambda_total",
    "seed",
    "packet",
    "user",
    "generated_at",
    "delivered_at",
    "latency_ms",
]
FLOAT_FORMAT = "%.6g"


@dataclass(frozen=True)
class SweepSpec:
    base: SimConfig = field(default_factory=SimConfig)
    lambda_grid: tuple = ()
    schedulers: tuple = ()
    seeds: tuple = ()
    output_path: str = os.path.join(settings.OUTPUT_DIR, "sweep.csv")
    workers: int = settings.SWEEP_WORKERS
    figure: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "lambda_grid", tuple(float(x) for x in self.lambda_grid))
        object.__setattr__(
            self, "schedulers", tuple(SchedulerKind.parse(s) for s in self.schedulers)
        )
        object.__setattr__(self, "seeds", tuple(self.seeds))

    def validate(self) -> "SweepSpec":
        if not self.lambda_grid:
            raise ConfigError("lambda_grid", "must list at least one traffic intensity")
        if any(not x > 0 for x in self.lambda_grid):
            raise ConfigError("lambda_grid", "traffic intensities must be positive")
        if not self.schedulers:
            raise ConfigError("schedulers", "must name at least one scheduler")
        if not self.seeds:
            raise ConfigError("seeds", "must list at least one seed")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds", "seeds must be distinct")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers", "must be a positive integer")
        if not self.output_path:
            raise ConfigError("output_path", "must be a file path")

        for scheduler, rate in self.cells():
            config = self.cell_config(scheduler, rate, self.seeds[0])
            config.validate()
            check_gate(config)
        for seed in self.seeds:
            self.base.replace(seed=seed).validate()
        return self

    def cells(self) -> list[tuple]:
        return [(s, rate) for s in self.schedulers for rate in self.lambda_grid]

    def cell_config(self, scheduler: SchedulerKind, rate: float, seed: int) -> SimConfig:
        return self.base.replace(scheduler=scheduler, total_rate=rate, seed=seed)

    def sidecar_path(self, suffix: str) -> str:
        stem, _ = os.path.splitext(self.output_path)
        return f"{stem}{suffix}"

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "lambda_grid": list(self.lambda_grid),
            "schedulers": [s.value for s in self.schedulers],
            "seeds": list(self.seeds),
            "output_path": self.output_path,
            "workers": self.workers,
            "figure": self.figure,
        }


@dataclass
class SweepResult:
    spec: SweepSpec
    table: pd.DataFrame
    runs: list = field(default_factory=list)
    trace: list = field(default_factory=list)


def run_cell(config: SimConfig) -> tuple[RunSummary, list]:
    orchestrator = SimulationOrchestrator(config)
    summary = orchestrator.run()
    trace = [
        (
            config.scheduler.value,
            config.total_rate,
            config.seed,
            p.id,
            p.user,
            p.generated_at,
            p.delivered_at,
            to_ms(p.latency, config.slot_ms),
        )
        for p in orchestrator.trace
    ]
    return summary, trace


def run_sweep(spec: SweepSpec) -> SweepResult:
    spec.validate()
    jobs = [
        spec.cell_config(scheduler, rate, seed)
        for scheduler, rate in spec.cells()
        for seed in spec.seeds
    ]
    logger.info(
        f"Sweep: {len(spec.cells())} cells x {len(spec.seeds)} seeds "
        f"on {spec.workers} worker(s)"
    )

    if spec.workers == 1:
        outcomes = [run_cell(config) for config in jobs]
    else:
        # map() keeps submission order, so output bytes do not depend on scheduling.
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            outcomes = list(pool.map(run_cell, jobs))

    runs = [summary for summary, _ in outcomes]
    trace = [row for _, rows in outcomes for row in rows]

    n_seeds = len(spec.seeds)
    rows = [
        aggregate_seeds(runs[i:i + n_seeds]) for i in range(0, len(runs), n_seeds)
    ]
    table = pd.DataFrame(rows, columns=COLUMNS)
    return SweepResult(spec=spec, table=table, runs=runs, trace=trace)


def write_table(table: pd.DataFrame, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_outputs(result: SweepResult) -> dict:
    spec = result.spec
    paths = {"table": write_table(result.table, spec.output_path)}

    runs_path = spec.sidecar_path(".runs.json")
    with open(runs_path, "w", encoding="utf-8") as f:
        json.dump(
            {"spec": spec.to_dict(), "runs": [r.to_dict() for r in result.runs]},
            f,
            indent=2,
            ensure_ascii=False,
        )
    paths["runs"] = runs_path

    if spec.base.trace_packets:
        trace = pd.DataFrame(result.trace, columns=TRACE_COLUMNS)
        paths["trace"] = write_table(trace, spec.sidecar_path(".trace.csv"))

    logger.info(f"Sweep outputs written: {', '.join(paths.values())}")
    return paths
