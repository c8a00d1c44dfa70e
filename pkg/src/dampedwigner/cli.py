"""Command line entry point: ``dampedwigner {scan,oracle,diff,probe-sim}``."""

import argparse
import csv
from dataclasses import replace
import sys

import numpy as np

from .dissipation import dissipate
from .errors import ValidationError
from .fock import displace, photon_statistics
from .pipeline import (compare_with_oracle, diff_grids, load_config, oracle_grid,
                       prepare_state, read_grid_csv, run_scan, write_grid)
from .probe import inversion_signal, sample_inversion

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TOLERANCE = 3


def _output_path(args, config, default):
    return args.output or config.output or default


def _cmd_scan(args):
    config = load_config(args.config)
    if args.reflect_axes:
        config = replace(config, reflect_axes=True)
    grid = run_scan(config, threads=args.threads)
    path = write_grid(grid, _output_path(args, config, "scan.csv"))
    print(f"wrote {len(grid.points)} points to {path} in {grid.wall_time:.2f} s")
    if args.compare:
        rho0 = prepare_state(config.state, config.cutoff, config.tail_budget)
        report = compare_with_oracle(grid, rho0, args.tolerance)
        print(f"max deviation from direct evaluation: {report.max_deviation:.3e} "
              f"(tolerance {report.tolerance:.1e})")
        if not report.passed:
            return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_oracle(args):
    config = load_config(args.config)
    grid = oracle_grid(config)
    reflect = args.reflect_axes or config.reflect_axes
    path = write_grid(grid, _output_path(args, config, "oracle.csv"), reflect_axes=reflect)
    print(f"wrote {len(grid.points)} points to {path}")
    return EXIT_OK


def _cmd_diff(args):
    dev = diff_grids(read_grid_csv(args.first), read_grid_csv(args.second))
    print(f"max |dF| = {dev:.3e} (tolerance {args.tolerance:.1e})")
    return EXIT_OK if dev <= args.tolerance else EXIT_TOLERANCE


def _cmd_probe_sim(args):
    config = load_config(args.config)
    alpha = complex(*args.alpha)
    rho0 = prepare_state(config.state, config.cutoff, config.tail_budget)
    rho_t = dissipate(displace(rho0, alpha, config.tail_budget), config.decay)
    atom = config.probe.atom_params()
    model = "full" if config.probe.mode == "full" else "strongfield"
    signal = inversion_signal(photon_statistics(rho_t), atom, model=model)
    if config.probe.mode == "sampled":
        seed = np.random.SeedSequence(config.probe.seed, spawn_key=(0,))
        signal = sample_inversion(signal, config.probe.shots, seed)
    path = _output_path(args, config, "probe.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau", "W"])
        for tau, w in zip(signal.tau, signal.values):
            writer.writerow([f"{tau:.16e}", f"{w:.16e}"])
    print(f"wrote {len(signal.tau)} samples to {path}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dampedwigner",
        description="Reconstruct quasiprobabilities from photon statistics of a damped cavity field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="run the reconstruction over a phase-space grid")
    scan.add_argument("config", help="JSON scan configuration")
    scan.add_argument("--output", "-o", help="CSV output path (overrides config)")
    scan.add_argument("--reflect-axes", action="store_true",
                      help="label points by -alpha in the output")
    scan.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
    scan.add_argument("--compare", action="store_true",
                      help="check the result against direct evaluation")
    scan.add_argument("--tolerance", type=float, default=1e-8,
                      help="allowed deviation for --compare")
    scan.set_defaults(func=_cmd_scan)

    oracle = sub.add_parser("oracle", help="direct quasiprobability of the configured state")
    oracle.add_argument("config")
    oracle.add_argument("--output", "-o")
    oracle.add_argument("--reflect-axes", action="store_true")
    oracle.set_defaults(func=_cmd_oracle)

    diff = sub.add_parser("diff", help="compare two grid CSV files")
    diff.add_argument("first")
    diff.add_argument("second")
    diff.add_argument("--tolerance", type=float, default=1e-8)
    diff.set_defaults(func=_cmd_diff)

    probe = sub.add_parser("probe-sim", help="emit the atomic inversion signal at one point")
    probe.add_argument("config")
    probe.add_argument("--alpha", type=float, nargs=2, metavar=("RE", "IM"), default=(0.0, 0.0))
    probe.add_argument("--output", "-o")
    probe.set_defaults(func=_cmd_probe_sim)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
