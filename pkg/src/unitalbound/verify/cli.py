"""Command line entry point: ``unitalbound verify <suite> [options]``."""

import argparse
import logging
import sys

from .. import _kernels
from .campaigns import run_suite
from .records import SUITES, BoundRecord, CampaignConfig, CheckRecord, ConfigError, read_config_file, render

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unitalbound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--config", help="key = value file mirroring the flags; flags win")
    v.add_argument("--n-min", type=int)
    v.add_argument("--n-max", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--tol", type=float)
    v.add_argument("--out", dest="out_path", help="output file (default: stdout)")
    v.add_argument("--format", choices=("csv", "json"))
    v.add_argument("--jobs", type=int, default=1, help="worker processes for bound-sweep")
    v.add_argument("-v", "--verbose", action="store_true")
    return parser


def make_config(args) -> CampaignConfig:
    values = read_config_file(args.config) if args.config else {}
    values.pop("suite", None)
    for key in ("n_min", "n_max", "trials", "seed", "tol", "out_path", "format"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    return CampaignConfig(suite=args.suite, **values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = run_suite(cfg, jobs=args.jobs)
    cls = BoundRecord if cfg.suite == "bound-sweep" else CheckRecord
    text = render(report.records, cfg.format, cls)
    try:
        if cfg.out_path:
            with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write results to {cfg.out_path}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE

    print(
        f"{cfg.suite}: {len(report.records)} records, {report.violations} violations, "
        f"{report.warnings} warnings [kernels: {_kernels.BACKEND}]",
        file=sys.stderr,
    )
    for key, val in report.notes.items():
        print(f"  {key} = {val}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATION
