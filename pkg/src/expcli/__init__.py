from .config_loader import build_sweep_spec, load_sweep_spec, read_config_file
from .plotting import emit_plot_script
from .presets import FIGURE_METRIC, LAMBDA_GRID, PRESETS, preset_fields
from .sweep import COLUMNS, SweepResult, SweepSpec, run_cell, run_sweep, write_outputs, write_table

__all__ = [
    "COLUMNS",
    "FIGURE_METRIC",
    "LAMBDA_GRID",
    "PRESETS",
    "SweepResult",
    "SweepSpec",
    "build_sweep_spec",
    "emit_plot_script",
    "load_sweep_spec",
    "preset_fields",
    "read_config_file",
    "run_cell",
    "run_sweep",
    "write_outputs",
    "write_table",
]
