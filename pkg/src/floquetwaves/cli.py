"""Command line interface.

Subcommands mirror the experiment runners; a JSON config file provides
defaults and individual flags override it.  Exit codes: 0 ok, 2 hard
numeric failure, 3 advisory-only violations.
"""

import argparse
import sys

from .errors import FloquetWavesError
from .assembly import ABSORBING, NEUMANN
from .eigensolver import solve_spectrum
from .diagnostics import region_check
from . import experiments as ex

EXIT_OK = 0
EXIT_HARD = 2
EXIT_ADVISORY = 3

SUBCOMMANDS = ["spectrum", "converge", "validate-time", "localize",
               "folding", "eps-path", "oracle-compare", "sturm", "all"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="floquetwaves",
        description="Floquet exponents and Bloch modes of the "
                    "time-modulated 1D wave equation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--outdir", help="output directory")
        sp.add_argument("--K", "--harmonics", type=int, dest="K")
        sp.add_argument("--p", "--degree", type=int, dest="p")
        sp.add_argument("--bc", choices=[ABSORBING, NEUMANN])
        sp.add_argument("--kappa0", type=float)
        sp.add_argument("--kappa-preset", dest="kappa_preset")
        sp.add_argument("--period", type=float)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--seed", type=int)
        if name == "validate-time":
            sp.add_argument("--periods", type=int, dest="periods")
            sp.add_argument("--dt", type=float,
                            help="step size; converted to steps per period")
    return parser


def _config_from_args(args):
    overrides = {k: getattr(args, k, None) for k in
                 ("outdir", "K", "p", "bc", "kappa0", "kappa_preset",
                  "period", "eps", "seed", "periods")}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.config:
        config = ex.ExperimentConfig.from_json(args.config, **overrides)
    else:
        config = ex.ExperimentConfig(**overrides)
    if getattr(args, "dt", None):
        config.dt_steps = max(1, round(config.period / args.dt))
    return config


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except (ValueError, TypeError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_HARD
    try:
        if args.command == "all":
            manifest, hard = ex.run_all(config)
            print(manifest["manifest_path"])
            return EXIT_HARD if hard else EXIT_OK
        if args.command == "spectrum":
            reports, path = ex.run_spectrum(config)
            print(path)
            advisory = False
            for bc, rep in reports.items():
                check = region_check(rep, config.problem(bc=bc))
                if check.violations:
                    if check.advisory:
                        advisory = True
                        print(f"advisory: {len(check.violations)} region "
                              f"violations for bc={bc} at K below threshold "
                              f"{check.threshold}", file=sys.stderr)
                    else:
                        print(f"region violations for bc={bc}: "
                              f"{check.violations}", file=sys.stderr)
                        return EXIT_HARD
            return EXIT_ADVISORY if advisory else EXIT_OK
        runner = ex.RUNNERS[args.command]
        print(runner(config))
        return EXIT_OK
    except FloquetWavesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HARD


if __name__ == "__main__":
    sys.exit(main())
