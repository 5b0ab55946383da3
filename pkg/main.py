import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config.logging_config import setup_logging
from src.errors import ConfigError, OracleMismatch

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_ORACLE = 3


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        description="Slot-synchronous simulator for partial-information multiple access"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Run a traffic-intensity sweep")
    simulate.add_argument("--config", type=str, default=None, help="JSON experiment file")
    simulate.add_argument(
        "--preset", choices=["fig2", "fig3", "fig4"], default=None, help="Figure preset"
    )
    simulate.add_argument("--out", type=str, default=None, help="Output CSV path")
    simulate.add_argument("--plot", action="store_true", help="Also emit a plot script")
    simulate.add_argument("--seeds", type=int, default=None, help="Number of seeds per cell")
    simulate.add_argument("--frames", type=int, default=None, help="Frames per run")
    simulate.add_argument(
        "--scheduler", nargs="+", default=None, help="TDMA SALOHA PIMA GFEO SGFEO"
    )
    simulate.add_argument(
        "--lambda", dest="lambda_grid", type=str, default=None, help="Comma-separated loads"
    )
    simulate.add_argument("--capacity", type=int, default=None, help="Belief buffer cap C")
    simulate.add_argument("--trace", action="store_true", help="Export per-packet trace")
    simulate.add_argument("--workers", type=int, default=None, help="Parallel sweep workers")

    calibrate = commands.add_parser("calibrate", help="Run the oracle differential suites")
    calibrate.add_argument("--seed", type=int, default=None, help="Calibration seed")

    return parser.parse_args(argv)


def cli_overrides(args) -> dict:
    return {
        "output_path": args.out,
        "seed_count": args.seeds,
        "horizon_frames": args.frames,
        "schedulers": args.scheduler,
        "lambda_grid": args.lambda_grid,
        "belief_capacity": args.capacity,
        "trace_packets": True if args.trace else None,
        "workers": args.workers,
    }


def simulate(args) -> int:
    from src.expcli import emit_plot_script, load_sweep_spec, run_sweep, write_outputs

    spec = load_sweep_spec(args.config, preset=args.preset, overrides=cli_overrides(args))
    cells = len(spec.cells())
    frames = spec.base.horizon_frames
    print(f"[*] Running {cells} cells x {len(spec.seeds)} seeds ({frames} frames each)...")

    result = run_sweep(spec)
    paths = write_outputs(result)

    if args.plot:
        figure = spec.figure or args.preset
        if figure is None:
            raise ConfigError("figure", "--plot needs a preset or a 'figure' entry in the config")
        paths["plot"] = emit_plot_script(result.table, figure, spec.output_path)

    unstable = result.table[~result.table["stable"]]
    for _, row in unstable.iterrows():
        print(f"    ! {row['scheduler']} unstable at lambda={row['lambda_total']:g}")

    print(f"[+] Done! {len(result.table)} rows.")
    for path in paths.values():
        print(f"    - {path}")
    print("    - logs/simulation.log")
    return EXIT_OK


def calibrate(args) -> int:
    from src.oracle import assert_calibrated, run_calibration

    print("[*] Running oracle differential suites...")
    results = run_calibration(args.seed)
    for result in results:
        print(f"    {result.line()}")
    assert_calibrated(results)
    print(f"[+] All {len(results)} checks passed.")
    return EXIT_OK


def main(argv=None) -> int:
    args = parse_args(argv)
    setup_logging()

    try:
        if args.command == "simulate":
            return simulate(args)
        return calibrate(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(f"Error: {e}")
        return EXIT_CONFIG
    except OracleMismatch as e:
        logger.error(str(e))
        print(f"Error: {e}")
        return EXIT_ORACLE
    except Exception as e:
        logger.exception("Run aborted")
        print(f"Error: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
