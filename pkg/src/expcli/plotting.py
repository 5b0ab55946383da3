import logging
import os

import pandas as pd

from src.errors import ConfigError
from src.expcli.presets import FIGURE_METRIC

logger = logging.getLogger(__name__)

SCRIPT_TEMPLATE = '''import sys

import matplotlib.pyplot as plt
import pandas as pd

CSV_PATH = {csv_path!r}
OUT_PATH = {out_path!r}
SCHEDULERS = {schedulers!r}


def main():
    table = pd.read_csv(sys.argv[1] if len(sys.argv) > 1 else CSV_PATH)
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in SCHEDULERS:
        rows = table[table["scheduler"] == name].sort_values("lambda_total")
        ax.errorbar(
            rows["lambda_total"],
            rows[{mean_col!r}],
            yerr=rows[{ci_col!r}].fillna(0.0),
            marker="o",
            capsize=3,
            label=name,
        )
    ax.set_xlabel("Total arrival rate [packets/slot]")
    ax.set_ylabel({ylabel!r})
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(OUT_PATH, dpi=150)
    print(f"[+] Figure saved to: {{OUT_PATH}}")


if __name__ == "__main__":
    main()
'''


def emit_plot_script(
    table: pd.DataFrame, figure: str, csv_path: str, script_path: str = None
) -> str:
    if figure not in FIGURE_METRIC:
        allowed = ", ".join(sorted(FIGURE_METRIC))
        raise ConfigError("figure", f"unknown figure '{figure}', expected one of {allowed}")
    mean_col, ci_col, ylabel = FIGURE_METRIC[figure]

    needed = ["scheduler", "lambda_total", mean_col, ci_col]
    missing = [c for c in needed if c not in table.columns]
    if missing:
        raise ConfigError("table", f"missing columns for {figure}: {', '.join(missing)}")
    if table.empty:
        raise ConfigError("table", "no rows to plot")

    stem, _ = os.path.splitext(csv_path)
    script_path = script_path or f"{stem}_plot.py"
    script = SCRIPT_TEMPLATE.format(
        csv_path=csv_path,
        out_path=f"{stem}.png",
        schedulers=list(dict.fromkeys(table["scheduler"])),
        mean_col=mean_col,
        ci_col=ci_col,
        ylabel=ylabel,
    )

    directory = os.path.dirname(script_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(script_path, "w", encoding="utf-8") as f:
        f.write(script)

    logger.info(f"Plot script for {figure} written to {script_path}")
    return script_path
