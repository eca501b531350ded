# SPDX-License-Identifier: Apache-2.0
"""
Main entry point for the postlb command-line tool.
"""

import argparse
import logging
import os
import sys
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Optional

from pydantic import BaseModel

from postlb import __version__
from postlb.attack import (
    DecisionMode,
    Objective,
    attack,
    check_arity,
    probe_lemma2_randomly,
)
from postlb.boolean import FormulaStyle, full_representation, parse_formula, to_text
from postlb.config import Settings, create_default_config, get_config_file, get_settings
from postlb.convention import BipartiteInput, Convention, layout
from postlb.errors import InternalConsistencyError, PostLBError
from postlb.machine import Program, parse_program, run
from postlb.protocol import GenReprEntry, GenReprIndex
from postlb.reduction import CnfFormula, ReductionMap, to_3cnf
from postlb.reports import (
    attack_report,
    error_response,
    lemma2_report,
    paths_report,
    reduce_report,
    run_report,
    trace_report,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


def get_default_log_dir() -> str:
    """Get default log directory based on platform.

    Returns:
        Path to log directory
    """
    if sys.platform == "win32":
        # Windows: use %LOCALAPPDATA%\postlb\logs
        base_dir = os.environ.get("LOCALAPPDATA", os.path.expanduser("~\\AppData\\Local"))
        return os.path.join(base_dir, "postlb", "logs")
    # macOS/Linux: use ~/.local/share/postlb/logs
    return os.path.expanduser("~/.local/share/postlb/logs")


def setup_logging(log_level: str, log_dir: str | None = None) -> None:
    """Setup console and daily-rotated file logging plus the report log.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_dir: Directory for log files (platform-specific default)
    """
    if log_dir is None:
        log_dir = get_default_log_dir()
    log_dir = os.path.expanduser(log_dir)
    Path(log_dir).mkdir(parents=True, exist_ok=True)

    log_file = os.path.join(log_dir, "postlb.log")
    reports_log_file = os.path.join(log_dir, "reports.log")
    level = getattr(logging, log_level.upper())

    formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers = []

    # Console logs go to stderr; stdout is reserved for summaries and reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    file_handler = TimedRotatingFileHandler(
        log_file, when="midnight", interval=1, backupCount=1, encoding="utf-8"
    )
    file_handler.setFormatter(formatter)
    root_logger.addHandler(file_handler)

    reports_handler = TimedRotatingFileHandler(
        reports_log_file, when="midnight", interval=1, backupCount=1, encoding="utf-8"
    )
    reports_handler.setFormatter(logging.Formatter("%(message)s"))

    reports_logger = logging.getLogger("reports")
    reports_logger.setLevel(logging.INFO)
    reports_logger.handlers = [reports_handler]
    reports_logger.propagate = False

    logger.debug("Logging configured. Log file: %s, report log: %s", log_file, reports_log_file)


class UsageError(Exception):
    """Bad flags or unreadable files; mapped to exit status 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_program(path: str) -> Program:
    return parse_program(_read(path))


def _load_convention(args: argparse.Namespace, settings: Settings) -> Convention:
    if args.convention:
        return Convention.from_text(_read(args.convention))
    return settings.convention


def _load_input(args: argparse.Namespace) -> BipartiteInput:
    if args.input:
        if args.first or args.second:
            raise UsageError("--input cannot be combined with --first/--second")
        return BipartiteInput.from_text(_read(args.input))
    if not (args.first and args.second):
        raise UsageError("give --input FILE or both --first and --second")
    return BipartiteInput.from_text(f"first: {args.first}\nsecond: {args.second}\n")


def _emit(report: BaseModel, args: argparse.Namespace, summary: str) -> None:
    """Write the JSON report to --output (summary on stdout) or to stdout."""
    payload = report.model_dump_json(indent=2)
    logging.getLogger("reports").info(payload)
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
        print(summary)
    else:
        print(payload)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    program = _load_program(args.program)
    conv = _load_convention(args, settings)
    inp = _load_input(args)
    step_cap = _or_default(args.step_cap, settings.step_cap)
    result = run(program, layout(inp, conv), conv.initial_head, step_cap)
    report = run_report(result, conv, include_trace=args.with_trace)
    _emit(report, args, f"{report.status}: {report.verdict} after {report.steps} steps")
    return EXIT_OK


def cmd_trace(args: argparse.Namespace, settings: Settings) -> int:
    program = _load_program(args.program)
    conv = _load_convention(args, settings)
    inp = _load_input(args)
    step_cap = _or_default(args.step_cap, settings.step_cap)
    report = trace_report(program, layout(inp, conv), conv.initial_head, step_cap)
    _emit(report, args, f"{report.status}: {len(report.entries)} steps traced")
    return EXIT_OK


def cmd_paths(args: argparse.Namespace, settings: Settings) -> int:
    if args.m_max < 0:
        raise UsageError("--m-max must be non-negative")
    program = _load_program(args.program)
    report = paths_report(program, args.m_max, with_listing=args.list)
    _emit(report, args, f"Lemma 1 bound {'holds' if report.holds else 'FAILS'} up to m={args.m_max}")
    return EXIT_OK


def cmd_attack(args: argparse.Namespace, settings: Settings) -> int:
    program = _load_program(args.program)
    conv = _load_convention(args, settings)
    style = FormulaStyle(args.repr or settings.repr_style)
    mode = DecisionMode(args.mode)
    objective = Objective(args.objective)
    if mode is DecisionMode.REDUCED and args.repr is None:
        style = FormulaStyle.MAXTERM_CNF
    check_arity(args.n, args.allow_large)
    outcome = attack(
        program,
        conv,
        args.n,
        full_representation(args.n, style),
        mode,
        _or_default(args.step_cap, settings.step_cap),
        objective=objective,
        allow_large=args.allow_large,
    )
    report = attack_report(outcome, args.n, mode.value, objective.value)
    _emit(report, args, f"{report.kind} on functions {report.function_indices}")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace, settings: Settings) -> int:
    original = CnfFormula.from_formula(parse_formula(_read(args.formula)))
    rmap = ReductionMap.covering([original])
    image = to_3cnf(original, rmap)
    report = reduce_report(original, image, rmap)
    _emit(report, args, report.formula)
    return EXIT_OK


def cmd_gen_repr(args: argparse.Namespace, settings: Settings) -> int:
    style = FormulaStyle(args.style or settings.repr_style)
    representation = full_representation(args.n, style)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    width = len(str(len(representation) - 1))

    entries = []
    for table in representation.tables():
        name = f"f{table.index:0{width}d}.txt"
        text = to_text(representation[table])
        (out_dir / name).write_text(text + "\n", encoding="utf-8")
        entries.append(GenReprEntry(index=table.index, table=table.render(), file=name, formula=text))
    index = GenReprIndex(n=args.n, style=style.value, count=len(entries), entries=entries)
    payload = index.model_dump_json(indent=2)
    (out_dir / "index.json").write_text(payload + "\n", encoding="utf-8")
    logging.getLogger("reports").info(payload)
    print(f"Wrote {len(entries)} formulas and index.json to {out_dir}")
    return EXIT_OK


def cmd_lemma2(args: argparse.Namespace, settings: Settings) -> int:
    trials = _or_default(args.trials, settings.lemma2_trials)
    seed = settings.seed if args.seed is None else args.seed
    step_cap = _or_default(args.step_cap, settings.lemma2_step_cap)
    summary = probe_lemma2_randomly(trials, seed, step_cap, settings.max_program_size)
    report = lemma2_report(summary, seed, step_cap)
    _emit(
        report,
        args,
        f"{report.trials} trials, {report.antecedent_held} shared paths, "
        f"{len(report.counter_witnesses)} counter-witnesses",
    )
    return EXIT_OK


def cmd_init_config(args: argparse.Namespace, settings: Optional[Settings]) -> int:
    if create_default_config():
        print(f"Created default config file: {get_config_file()}")
    else:
        print(f"Config file already exists: {get_config_file()}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {number}")
    return number


def _or_default(value: Optional[int], default: int) -> int:
    return default if value is None else value


def _add_io(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", default=None, help="Write the JSON report here")


def _add_run_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--program", required=True, help="Program source file")
    parser.add_argument("--input", default=None, help="Bipartite input file (first:/second:)")
    parser.add_argument("--first", default=None, help="First part as b/m boxes")
    parser.add_argument("--second", default=None, help="Second part as b/m boxes")
    parser.add_argument("--convention", default=None, help="Convention file (key=value lines)")
    parser.add_argument("--step-cap", type=_positive_int, default=None, help="Step cap (default: from config)")
    _add_io(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="postlb",
        description="Post machine emulator and branch lower-bound toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  postlb run --program p.pm --input in.txt       # Run one bipartite input
  postlb trace --program p.pm --input in.txt     # Per-step trace
  postlb paths --program p.pm --m-max 8          # Check the path-count bound
  postlb attack --program rej.pm --n 1           # Refute a conjunction-SAT decider
  postlb reduce --formula f.txt                  # CNF to 3CNF
  postlb gen-repr --n 2 --out-dir reprs          # Full representation files
  postlb lemma2 --trials 1000 --seed 7           # Randomised crossing probe
        """.strip(),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["debug", "info", "warning", "error"],
        help="Logging level (default: from config file)",
    )
    parser.add_argument("--log-dir", default=None, help="Log directory (default: from config file)")

    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    run_parser = subparsers.add_parser("run", help="Run a program on one bipartite input")
    _add_run_inputs(run_parser)
    run_parser.add_argument(
        "--with-trace", action="store_true", help="Include the executed addresses"
    )
    run_parser.set_defaults(handler=cmd_run)

    trace_parser = subparsers.add_parser("trace", help="Step-by-step trace of one run")
    _add_run_inputs(trace_parser)
    trace_parser.set_defaults(handler=cmd_trace)

    paths_parser = subparsers.add_parser("paths", help="Enumerate paths and check the bound")
    paths_parser.add_argument("--program", required=True, help="Program source file")
    paths_parser.add_argument("--m-max", type=int, required=True, help="Largest branch budget")
    paths_parser.add_argument("--list", action="store_true", help="Include the paths themselves")
    _add_io(paths_parser)
    paths_parser.set_defaults(handler=cmd_paths)

    attack_parser = subparsers.add_parser("attack", help="Run the fooling-family adversary")
    attack_parser.add_argument("--program", required=True, help="Program source file")
    attack_parser.add_argument("--n", type=_positive_int, required=True, help="Number of variables")
    attack_parser.add_argument(
        "--repr",
        default=None,
        choices=[s.value for s in FormulaStyle],
        help="Representation style (default: from config; maxterm-cnf for 3cnf mode)",
    )
    attack_parser.add_argument(
        "--mode", default=DecisionMode.PLAIN.value, choices=[m.value for m in DecisionMode]
    )
    attack_parser.add_argument(
        "--objective",
        default=Objective.SAT_CONJUNCTION.value,
        choices=[o.value for o in Objective],
    )
    attack_parser.add_argument("--convention", default=None, help="Convention file")
    attack_parser.add_argument("--step-cap", type=_positive_int, default=None, help="Step cap per run")
    attack_parser.add_argument(
        "--allow-large", action="store_true", help="Permit n=4 (65,536 runs)"
    )
    _add_io(attack_parser)
    attack_parser.set_defaults(handler=cmd_attack)

    reduce_parser = subparsers.add_parser("reduce", help="Reduce a CNF formula to 3CNF")
    reduce_parser.add_argument("--formula", required=True, help="Formula text file")
    _add_io(reduce_parser)
    reduce_parser.set_defaults(handler=cmd_reduce)

    gen_parser = subparsers.add_parser("gen-repr", help="Write a full representation")
    gen_parser.add_argument("--n", type=_positive_int, required=True, help="Number of variables")
    gen_parser.add_argument("--style", default=None, choices=[s.value for s in FormulaStyle])
    gen_parser.add_argument("--out-dir", required=True, help="Directory for formula files")
    gen_parser.set_defaults(handler=cmd_gen_repr)

    lemma2_parser = subparsers.add_parser("lemma2", help="Randomised crossing probe")
    lemma2_parser.add_argument("--trials", type=_positive_int, default=None)
    lemma2_parser.add_argument("--seed", type=int, default=None)
    lemma2_parser.add_argument("--step-cap", type=_positive_int, default=None)
    _add_io(lemma2_parser)
    lemma2_parser.set_defaults(handler=cmd_lemma2)

    init_parser = subparsers.add_parser("init-config", help="Create ~/.postlb/config.toml")
    init_parser.set_defaults(handler=cmd_init_config)

    return parser


def dispatch(args: argparse.Namespace) -> int:
    """Run one parsed command and return its exit status."""
    if args.handler is cmd_init_config:
        return cmd_init_config(args, None)

    try:
        settings = get_settings()
        setup_logging(args.log_level or settings.log_level, args.log_dir or settings.log_dir or None)
        return args.handler(args, settings)
    except UsageError as exc:
        print(f"postlb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalConsistencyError as exc:
        logger.exception("Internal consistency failure")
        print(error_response(exc).model_dump_json(indent=2), file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except PostLBError as exc:
        print(error_response(exc).model_dump_json(indent=2), file=sys.stderr)
        return EXIT_DOMAIN_ERROR


def main(argv: Optional[list[str]] = None) -> None:
    """Main entry point with subcommand support."""
    args = build_parser().parse_args(argv)
    sys.exit(dispatch(args))


if __name__ == "__main__":
    main()
