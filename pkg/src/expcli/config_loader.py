import dataclasses
import json
import logging
import os

from src.errors import ConfigError
from src.expcli.presets import LAMBDA_GRID, default_seeds, preset_fields
from src.expcli.sweep import SweepSpec
from src.models import SimConfig

logger = logging.getLogger(__name__)

SIM_FIELDS = {f.name: f for f in dataclasses.fields(SimConfig)}
SWEEP_FIELDS = {
    "lambda_grid",
    "schedulers",
    "seeds",
    "seed_count",
    "output_path",
    "workers",
    "figure",
    "preset",
}
FLOAT_FIELDS = {
    "total_rate",
    "slot_ms",
    "pia_len",
    "prune_epsilon",
    "warmup_fraction",
    "stability_slope",
}
INT_FIELDS = {
    "n_users",
    "belief_capacity",
    "horizon_frames",
    "seed",
    "gfeo_max_users",
    "stability_windows",
}


def _coerce(name: str, value):
    if name in FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(name, f"expected a number, got {value!r}")
        return float(value)
    if name in INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(name, f"expected an integer, got {value!r}")
        return value
    if name == "tdma_queue_cap":
        if value is None or value == "unbounded":
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(name, f"expected an integer or null, got {value!r}")
        return value
    if name == "trace_packets" and not isinstance(value, bool):
        raise ConfigError(name, f"expected true or false, got {value!r}")
    return value


def read_config_file(path: str) -> dict:
    if not os.path.isfile(path):
        raise ConfigError("config", f"file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"{path} is not valid JSON ({e.msg} at line {e.lineno})")
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must hold a JSON object")
    return data


def _as_list(name: str, value) -> list:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    if not isinstance(value, (list, tuple)):
        raise ConfigError(name, f"expected a list, got {value!r}")
    return list(value)


def build_sweep_spec(values: dict, preset: str = None) -> SweepSpec:
    """Layer values over a preset (or plain defaults) and validate the result."""
    unknown = sorted(k for k in values if k not in SIM_FIELDS and k not in SWEEP_FIELDS)
    if unknown:
        raise ConfigError(unknown[0], "unknown configuration field")

    preset = preset or values.get("preset")
    fields = preset_fields(preset) if preset else {
        "base": SimConfig(),
        "lambda_grid": LAMBDA_GRID,
        "schedulers": (),
        "seeds": default_seeds(),
    }

    sim_changes = {k: _coerce(k, v) for k, v in values.items() if k in SIM_FIELDS}
    base = fields.pop("base").replace(**sim_changes)

    if "lambda_grid" in values:
        grid = []
        for x in _as_list("lambda_grid", values["lambda_grid"]):
            try:
                grid.append(float(x))
            except (TypeError, ValueError):
                raise ConfigError("lambda_grid", f"'{x}' is not a number")
        fields["lambda_grid"] = tuple(grid)
    if "schedulers" in values:
        fields["schedulers"] = tuple(_as_list("schedulers", values["schedulers"]))
    if "seeds" in values:
        seeds = _as_list("seeds", values["seeds"])
        if any(isinstance(s, bool) or not isinstance(s, int) for s in seeds):
            raise ConfigError("seeds", "seeds must be integers")
        fields["seeds"] = tuple(seeds)
    if "seed_count" in values:
        count = values["seed_count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise ConfigError("seed_count", "must be a positive integer")
        first = base.seed if "seed" in values else None
        fields["seeds"] = (
            tuple(range(first, first + count)) if first is not None else default_seeds(count)
        )
    for key in ("output_path", "workers", "figure"):
        if key in values:
            fields[key] = values[key]

    spec = SweepSpec(base=base, **fields)
    logger.info(
        f"Sweep spec: {len(spec.schedulers)} schedulers, {len(spec.lambda_grid)} loads, "
        f"{len(spec.seeds)} seeds -> {spec.output_path}"
    )
    return spec.validate()


def load_sweep_spec(
    config_path: str = None, preset: str = None, overrides: dict = None
) -> SweepSpec:
    values = read_config_file(config_path) if config_path else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_sweep_spec(values, preset=preset)
