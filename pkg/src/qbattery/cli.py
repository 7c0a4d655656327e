"""Command line entry point ``qbattery``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import harness
from .config import load_config
from .eigenmodes import BRANCHES, supermode_decomposition
from .errors import NumericalError, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


def _grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbattery", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one configuration and write a CSV trajectory")
    p.add_argument("--config", required=True)
    p.add_argument("--engine", choices=harness.ENGINES, help="override the engine in the config file")
    p.add_argument("--out", default="-", help="output path (default: standard output)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sweep", help="sweep the Lamb shift for a figure preset")
    p.add_argument("--preset", required=True, help=f"one of {', '.join(harness.PRESET_NAMES)}")
    p.add_argument("--branch", choices=BRANCHES, default="minus")
    p.add_argument("--lamb-grid", type=_grid, default=None)
    p.add_argument("--fixed-drive", action="store_true", help="freeze omega_f at its lamb_shift = 0 value")
    p.add_argument("--engine", choices=harness.ENGINES, default="meanfield")
    p.add_argument("--cutoffs", type=int, nargs=2, metavar=("NA", "NB"), default=(10, 10))
    p.add_argument("--drive-amplitude", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("eigen", help="print eigenfrequencies and supermode mixing as JSON")
    p.add_argument("--config", required=True)

    p = sub.add_parser("oracle-check", help="compare density-matrix moments with the mean-field solution")
    p.add_argument("--config", required=True)
    return parser


def _simulate(args) -> None:
    cfg = load_config(args.config)
    engine = args.engine or cfg.engine
    series = harness.run_engine(cfg.params, cfg.t_final, cfg.dt, engine, (cfg.fock_cutoff_a, cfg.fock_cutoff_b))
    harness.emit(series, args.format, args.out)


def _sweep(args) -> None:
    preset = harness.build_preset(args.preset, args.branch, args.lamb_grid, args.fixed_drive)
    if args.drive_amplitude is not None:
        preset = preset.with_drive_amplitude(args.drive_amplitude)
    cutoffs = tuple(args.cutoffs) if args.engine == "liouville" else None
    result = harness.run_sweep(preset, args.engine, cutoffs=cutoffs, workers=args.workers)
    harness.emit(result, args.format, args.out)
    if result.failed:
        raise NumericalError(f"{len(result.failed)} of {len(result)} sweep points failed")


def _eigen(args) -> None:
    cfg = load_config(args.config)
    print(json.dumps(supermode_decomposition(cfg.params).as_dict()))


def _oracle_check(args) -> None:
    cfg = load_config(args.config)
    report = harness.oracle_check(cfg.params, cfg.t_final, cfg.dt, (cfg.fock_cutoff_a, cfg.fock_cutoff_b))
    print(json.dumps(report))


COMMANDS = {"simulate": _simulate, "sweep": _sweep, "eigen": _eigen, "oracle-check": _oracle_check}


def _attach_grid(argv: list[str]) -> list[str]:
    # a grid starting with a negative value, e.g. "-0.2,-0.1", would otherwise be read as a flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--lamb-grid":
            tok = f"--lamb-grid={next(it, '')}"
        out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_grid(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        # downstream reader (e.g. `head`) closed the pipe
        sys.stderr.close()
        return EXIT_OK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
