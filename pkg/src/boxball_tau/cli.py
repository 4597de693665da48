from __future__ import annotations

import argparse
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path

from . import __version__
from .bbs import Capacity, auto_pad_width, evolution_pattern, pad_state, row_energies
from .config import (
    AUTO_PAD,
    DEFAULT_FORMAT,
    DEFAULT_SEED,
    DEFAULT_SUITE_LENGTH,
    DEFAULT_SUITE_RANK,
    INFINITY_SPELLING,
    OUTPUT_FORMATS,
    SUITE_CHECKS,
)
from .crystal import Path as CrystalPath
from .errors import BoxBallError, InputFormatError
from .kkr import kkr_from_path, kkr_to_path, unrestricted_from_path
from .render import (
    choices_to_json,
    dumps,
    format_path,
    format_pattern,
    format_scattering,
    format_table,
    load_path,
    load_rc,
    load_spec,
    path_to_json,
    rc_to_json,
    report_to_json,
)
from .rigged import RiggedConfiguration
from .scattering import FORMULAS, kkr_vertex_levels, nsoliton_state, scattering_data, solve_ivp
from .tau import energy_table, path_charge, rho_table, tau_maximizers, tau_table
from .verification import SuiteOptions, run_suite


def _capacity(text: str) -> Capacity:
    if text == INFINITY_SPELLING:
        return math.inf
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"capacity must be a positive integer or {INFINITY_SPELLING}"
        ) from exc
    if value < 1:
        raise argparse.ArgumentTypeError("capacity must be positive")
    return value


def _pad(text: str) -> int | str:
    if text == AUTO_PAD:
        return AUTO_PAD
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"pad must be a width or {AUTO_PAD}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("pad width must be nonnegative")
    return value


def _io_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "value",
        nargs="?",
        help="Input text (path words or JSON). Reads standard input when omitted or '-'.",
    )
    parent.add_argument("--input", type=Path, help="Read the input from a file.")
    parent.add_argument(
        "--format",
        "-f",
        choices=OUTPUT_FORMATS,
        default=DEFAULT_FORMAT,
        help=f"Output format. Default: {DEFAULT_FORMAT}.",
    )
    parent.add_argument(
        "--n",
        type=int,
        help="Rank n of A_n^(1). Default: inferred from the largest letter.",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Build the command-line argument parser."""

    parser = argparse.ArgumentParser(
        prog="boxball",
        description="Box-ball dynamics, rigged configurations and ultradiscrete tau functions.",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Log algorithm details to standard error.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    shared = _io_parent()
    commands = parser.add_subparsers(dest="command", required=True)

    evolve = commands.add_parser("evolve", parents=[shared], help="Evolve a state with T_l.")
    evolve.add_argument("--t", type=int, default=1, help="Number of time steps. Default: 1.")
    evolve.add_argument(
        "--l",
        type=_capacity,
        default=math.inf,
        help=f"Carrier capacity, or {INFINITY_SPELLING}. Default: {INFINITY_SPELLING}.",
    )
    evolve.add_argument(
        "--pad",
        type=_pad,
        help=f"Append this many empty boxes first, or {AUTO_PAD} to size them from t.",
    )
    evolve.set_defaults(handler=_cmd_evolve)

    kkr = commands.add_parser("kkr", parents=[shared], help="Rigged configuration JSON to path.")
    kkr.set_defaults(handler=_cmd_kkr)

    kkr_inv = commands.add_parser("kkr-inv", parents=[shared], help="Path to rigged configuration.")
    kkr_inv.add_argument(
        "--unrestricted",
        action="store_true",
        help="Accept any state by prepending a vacuum staircase.",
    )
    kkr_inv.add_argument(
        "--vacuum",
        type=_multiplicities,
        help="Comma-separated staircase multiplicities M_1,...,M_n for --unrestricted.",
    )
    kkr_inv.set_defaults(handler=_cmd_kkr_inv)

    vertex = commands.add_parser(
        "vertex", parents=[shared], help="Rigged configuration JSON to path via vertex operators."
    )
    vertex.add_argument(
        "--intermediate",
        action="store_true",
        help="Also print the paths p^(n), ..., p^(1).",
    )
    vertex.set_defaults(handler=_cmd_vertex)

    tau = commands.add_parser(
        "tau", parents=[shared], help="Tau table of a rigged configuration JSON or of a state."
    )
    tau.add_argument("--table", action="store_true", help="Print the whole table (default).")
    tau.add_argument(
        "--maximizers",
        nargs=2,
        type=int,
        metavar=("K", "D"),
        help="Print the sub-configurations attaining tau_{K,D}.",
    )
    tau.set_defaults(handler=_cmd_tau)

    rho = commands.add_parser("rho", parents=[shared], help="Quadrant ball counts of a state.")
    rho.set_defaults(handler=_cmd_rho)

    energy = commands.add_parser("energy", parents=[shared], help="Corner energies of a state.")
    energy.add_argument("--dual", action="store_true", help="Drop the boundary contribution.")
    energy.add_argument(
        "--row",
        type=int,
        metavar="L_MAX",
        help="Print the row energies E_1, ..., E_{L_MAX} instead.",
    )
    energy.set_defaults(handler=_cmd_energy)

    verify = commands.add_parser("verify", help="Run the cross-check suites.")
    verify.add_argument(
        "--n", type=int, default=DEFAULT_SUITE_RANK, help="Rank. Default: %(default)s."
    )
    verify.add_argument(
        "--length",
        type=int,
        default=DEFAULT_SUITE_LENGTH,
        help="Length of the exhaustive single-box states. Default: %(default)s.",
    )
    verify.add_argument(
        "--random", type=int, default=0, help="Number of random larger states. Default: 0."
    )
    verify.add_argument(
        "--seed", type=int, default=DEFAULT_SEED, help="Seed for random states."
    )
    verify.add_argument("--jobs", type=int, default=1, help="Worker processes. Default: 1.")
    verify.add_argument(
        "--check",
        action="append",
        choices=SUITE_CHECKS,
        help="Run only this check; repeatable. Default: all.",
    )
    verify.add_argument(
        "--format",
        "-f",
        choices=OUTPUT_FORMATS,
        default=DEFAULT_FORMAT,
        help=f"Output format. Default: {DEFAULT_FORMAT}.",
    )
    verify.set_defaults(handler=_cmd_verify)

    scatter = commands.add_parser(
        "scatter", parents=[shared], help="Normal-ordered scattering data of a state."
    )
    scatter.set_defaults(handler=_cmd_scatter)

    nsoliton = commands.add_parser(
        "nsoliton", parents=[shared], help="State of an N-soliton spec JSON."
    )
    nsoliton.add_argument(
        "--formula",
        choices=FORMULAS,
        default="principal",
        help="Tau function expansion to use. Default: principal.",
    )
    nsoliton.add_argument("--length", type=int, help="Number of boxes; overrides the soliton spec.")
    nsoliton.set_defaults(handler=_cmd_nsoliton)

    ivp = commands.add_parser(
        "ivp", parents=[shared], help="Solve T_{l_t} ... T_{l_1}(p) through rigged configurations."
    )
    ivp.add_argument(
        "--l",
        type=_capacity,
        action="append",
        help="Carrier capacity of one step; repeatable, applied in order. Default: inf.",
    )
    ivp.add_argument("--t", type=int, default=1, help="Repeat the schedule t times.")
    ivp.add_argument("--pad", type=_pad, help=f"Empty boxes to append, or {AUTO_PAD}.")
    ivp.set_defaults(handler=_cmd_ivp)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return a process exit code."""

    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args)
    except KeyboardInterrupt:
        print("Interrupted.", file=sys.stderr)
        return 130
    except InputFormatError as exc:
        parser.error(str(exc))
    except BoxBallError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1
    return 0


def _multiplicities(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from exc


def _read_input(args: argparse.Namespace) -> str:
    if args.input is not None:
        try:
            return args.input.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputFormatError(f"cannot read {args.input}: {exc.strerror}") from exc
    if args.value and args.value != "-":
        return args.value
    return sys.stdin.read()


def _read_path(args: argparse.Namespace) -> CrystalPath:
    return load_path(_read_input(args), args.n)


def _read_configuration(args: argparse.Namespace) -> RiggedConfiguration:
    text = _read_input(args)
    if text.lstrip().startswith("{"):
        return load_rc(text)
    return unrestricted_from_path(load_path(text, args.n))


def _print_path(path: CrystalPath, fmt: str) -> None:
    print(dumps(path_to_json(path)) if fmt == "json" else format_path(path))


def _padded(path: CrystalPath, pad: int | str | None, steps: int) -> CrystalPath:
    if pad == AUTO_PAD:
        pad = auto_pad_width(path, steps)
    return pad_state(path, int(pad)) if pad else path


def _cmd_evolve(args: argparse.Namespace) -> int:
    pattern = evolution_pattern(_read_path(args), args.t, capacity=args.l, pad=args.pad)
    print(format_pattern(pattern, args.format))
    return 0


def _cmd_kkr(args: argparse.Namespace) -> int:
    _print_path(kkr_to_path(load_rc(_read_input(args))), args.format)
    return 0


def _cmd_kkr_inv(args: argparse.Namespace) -> int:
    path = _read_path(args)
    if args.unrestricted:
        rc = unrestricted_from_path(path, args.vacuum)
    else:
        rc = kkr_from_path(path)
    print(dumps(rc_to_json(rc)))
    return 0


def _cmd_vertex(args: argparse.Namespace) -> int:
    levels = kkr_vertex_levels(load_rc(_read_input(args)))
    if not args.intermediate:
        _print_path(levels[0], args.format)
        return 0
    if args.format == "json":
        print(dumps({str(a): path_to_json(path) for a, path in sorted(levels.items())}))
    else:
        for a in sorted(levels, reverse=True):
            print(f"p^({a}): {format_path(levels[a], ' ')}")
    return 0


def _cmd_tau(args: argparse.Namespace) -> int:
    rc = _read_configuration(args)
    if args.maximizers:
        k, d = args.maximizers
        print(dumps(choices_to_json(tau_maximizers(rc, k, d))))
        return 0
    print(format_table(tau_table(rc), args.format))
    return 0


def _cmd_rho(args: argparse.Namespace) -> int:
    print(format_table(rho_table(_read_path(args)), args.format))
    return 0


def _cmd_energy(args: argparse.Namespace) -> int:
    path = _read_path(args)
    if args.row is not None:
        energies = row_energies(path, args.row)
        if args.format == "json":
            print(dumps({str(size): value for size, value in enumerate(energies, 1)}))
        else:
            for size, value in enumerate(energies, 1):
                print(f"E_{size}: {value}")
        return 0
    print(format_table(energy_table(path, dual=args.dual), args.format))
    if args.format == "text" and not args.dual:
        print(f"charge: {path_charge(path)}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    options = SuiteOptions(
        n=args.n,
        length=args.length,
        random_cases=args.random,
        seed=args.seed,
        jobs=args.jobs,
        checks=tuple(args.check or SUITE_CHECKS),
    )
    as_json = args.format == "json"
    report = run_suite(options, progress=None if as_json else print)
    if as_json:
        print(dumps([report_to_json(item) for item in report.reports]))
    else:
        for failure in report.failures():
            print(dumps(report_to_json(failure)))
        print(f"{report.states} states, {'all checks passed' if report.ok else 'FAILED'}")
    return 0 if report.ok else 1


def _cmd_scatter(args: argparse.Namespace) -> int:
    print(format_scattering(scattering_data(_read_path(args)), args.format))
    return 0


def _cmd_nsoliton(args: argparse.Namespace) -> int:
    spec, length = load_spec(_read_input(args))
    length = args.length or length
    if length is None:
        raise InputFormatError("the N-soliton spec needs a length (or pass --length)")
    _print_path(nsoliton_state(spec, length, formula=args.formula), args.format)
    return 0


def _cmd_ivp(args: argparse.Namespace) -> int:
    schedule = list(args.l or [math.inf]) * args.t
    path = _padded(_read_path(args), args.pad, len(schedule))
    _print_path(solve_ivp(path, schedule), args.format)
    return 0
