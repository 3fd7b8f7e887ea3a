"""
CLI - `lastpass` command line.

Subcommands:
    enum       exact laws of walk functionals, optionally certified
    verify     run a verification suite and write its report
    transform  table of predicted transforms for a model
    simulate   dump a Monte Carlo sample table as CSV
    ecdf       ECDF of one column of a dumped sample table

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
configuration errors.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from presets import MODEL_PRESETS, STEP_LAW_PRESETS

from . import settings
from .errors import ConfigError, LastPassageError, ReportIOError
from .models import CpModel, TruncatedHorizon, load_model, model_from_dict
from .report import REPORT_FORMATS, CheckResult, VerifyReport, write_report
from .stats_mc import TABLE_COLUMNS, SampleTable, ecdf, run_monte_carlo
from .suite_registry import CLAIM_TAGS
from .transforms import transform_table, validate_context
from .verify import DEFAULT_S_GRID, SUITE_KINDS, default_registry, run_suite
from .walk_core import FUNCTIONAL_NAMES
from .walk_enum import (
    AllPaths,
    LastVisitZero,
    StepLaw,
    check_corollary,
    check_prop3,
    check_reversal_law,
    enumerate_paths,
    parse_event,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Options whose values may start with "-" (step laws, intervals)
_DASH_VALUE_FLAGS = ("--steps", "--cond")


def _global_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=0, help="Master seed")
    parent.add_argument("--workers", type=int, default=None, help="Worker processes")
    parent.add_argument("--out", default="-", help="Output file ('-' for stdout)")
    parent.add_argument(
        "--format", choices=REPORT_FORMATS, default="json", help="Report format"
    )
    parent.add_argument("--log-level", default=None, help="Logging level (default from env)")
    return parent


def _model_flags(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--model", help="Model config JSON file")
    group.add_argument("--preset", help=f"Named model ({', '.join(MODEL_PRESETS)})")


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Expected comma-separated numbers: {text}") from e


def _joint_pairs(text: str) -> list[tuple[float, float]]:
    pairs = []
    for part in text.split(","):
        try:
            s, t = part.split(":")
            pairs.append((float(s), float(t)))
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"Expected s:t pairs, got '{part}'") from e
    return pairs


def build_parser() -> argparse.ArgumentParser:
    parent = _global_flags()
    parser = argparse.ArgumentParser(
        prog="lastpass",
        description="Last-passage functionals of random walks and compound Poisson paths",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enum = sub.add_parser("enum", parents=[parent], help="Exact enumeration of walk laws")
    enum.add_argument("--n", type=int, required=True, help="Walk length")
    enum.add_argument("--steps", required=True, help="Step law (value:prob,...) or preset name")
    enum.add_argument("--cond", default="all", help="Event: all, nonneg, lastzero or [a,b]")
    enum.add_argument(
        "--check", choices=["none", "prop3", "corollary", "reversal"], default="none"
    )
    enum.add_argument("--functional", choices=FUNCTIONAL_NAMES, default=None)

    verify = sub.add_parser("verify", parents=[parent], help="Run a verification suite")
    verify.add_argument("--suite", choices=SUITE_KINDS)
    verify.add_argument("--list", action="store_true", help="List the suite catalog")
    verify.add_argument(
        "--claim", choices=CLAIM_TAGS, help="With --list, only suites carrying this claim"
    )
    _model_flags(verify)
    verify.add_argument("--paths", type=int, default=100_000, help="Monte Carlo paths")
    verify.add_argument("--s-grid", type=_float_list, default=None)
    verify.add_argument("--steps", help="Step law for walk suites")
    verify.add_argument("--n", type=int, help="Walk length for walk suites")
    verify.add_argument("--cond", default="all", help="Event for walk-prop3")
    verify.add_argument("--expect-cross-class-reject", action="store_true")

    transform = sub.add_parser("transform", parents=[parent], help="Predicted transform table")
    _model_flags(transform)
    transform.add_argument("--s-grid", type=_float_list, default=list(DEFAULT_S_GRID))
    transform.add_argument("--joint", type=_joint_pairs, default=[(1.0, 0.5)])

    simulate = sub.add_parser("simulate", parents=[parent], help="Dump a sample table")
    _model_flags(simulate)
    simulate.add_argument("--paths", type=int, default=10_000)
    simulate.add_argument(
        "--suite-kind",
        choices=["prop1", "prop2", "general", "transforms", "uniform"],
        default=None,
        help="Sampling suite (default: prop1 for truncated, general for finite horizons)",
    )

    ecdf_cmd = sub.add_parser("ecdf", parents=[parent], help="ECDF of a sample table column")
    ecdf_cmd.add_argument("--input", required=True, help="CSV written by `simulate`")
    ecdf_cmd.add_argument("--column", choices=TABLE_COLUMNS, required=True)
    ecdf_cmd.add_argument("--positive", action="store_true", help="Restrict to sigma > 0")
    return parser


def _model_config(args) -> dict:
    if args.preset:
        if args.preset not in MODEL_PRESETS:
            raise ConfigError(
                f"Unknown preset '{args.preset}', expected one of {sorted(MODEL_PRESETS)}"
            )
        return MODEL_PRESETS[args.preset]
    if args.model:
        return load_model(args.model).to_dict()
    raise ConfigError("A model is required: pass --model <file> or --preset <name>")


def _step_law(text: str) -> StepLaw:
    return StepLaw.parse(STEP_LAW_PRESETS.get(text, text))


def _open_out(path: str):
    if path == "-":
        return sys.stdout
    try:
        return open(path, "w", newline="")
    except OSError as e:
        raise ReportIOError(f"Cannot open {path}: {e}") from e


def _emit_text(text: str, path: str):
    out = _open_out(path)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()


def _finish(report: VerifyReport, args) -> int:
    write_report(report, args.format, args.out)
    if not report.passed:
        for check in report.failed_checks:
            logger.error(f"Check failed: {check.name} ({check.claim}) statistic={check.statistic}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _cmd_enum(args) -> int:
    law = _step_law(args.steps)
    event = parse_event(args.cond)
    if args.check == "corollary":
        if not isinstance(event, (AllPaths, LastVisitZero)):
            raise ConfigError(
                f"--check corollary conditions on S_sigma = 0, not {event.describe()}"
            )
        event = LastVisitZero()
    names = (args.functional,) if args.functional else FUNCTIONAL_NAMES
    tally = enumerate_paths(law, args.n, event, workers=args.workers)
    laws = {name: tally.law(name).to_json() for name in names}
    config = {"steps": str(law), "n": args.n, "event": event.describe()}

    if args.check == "none":
        _emit_text(json.dumps({**config, "laws": laws}, indent=2) + "\n", args.out)
        return EXIT_OK

    if args.check == "prop3":
        checks = check_prop3(law, args.n, event, workers=args.workers)
    elif args.check == "corollary":
        checks = check_corollary(law, args.n, workers=args.workers)
    else:
        checks = check_reversal_law(law, args.n, event, workers=args.workers)
    summary = CheckResult(
        "exact_laws", "exact-enumeration", None, None, True, {"laws": laws}, informational=True
    )
    report = VerifyReport(f"enum-{args.check}", config, None, [summary, *checks])
    return _finish(report, args)


def _cmd_verify(args) -> int:
    if args.list:
        registry = default_registry()
        names = registry.search_suites(args.claim) if args.claim else None
        _emit_text(json.dumps(registry.list_suites(names), indent=2) + "\n", args.out)
        return EXIT_OK
    if not args.suite:
        raise ConfigError("verify needs --suite (or --list)")

    if args.suite.startswith("walk-"):
        if not args.steps or args.n is None:
            raise ConfigError(f"Suite {args.suite} needs --steps and --n")
        config = {"steps": str(_step_law(args.steps)), "n": args.n}
        if args.suite == "walk-prop3":
            config["event"] = args.cond
    else:
        config = {"model": _model_config(args)}
        if args.s_grid:
            config["s_grid"] = args.s_grid

    report = run_suite(
        args.suite,
        config,
        N=args.paths,
        seed=args.seed,
        workers=args.workers,
        expect_cross_class_reject=args.expect_cross_class_reject,
    )
    return _finish(report, args)


def _cmd_transform(args) -> int:
    ctx = validate_context(model_from_dict(_model_config(args)))
    out = _open_out(args.out)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["kind", "s", "t", "value"])
        for kind, s, t, value in transform_table(ctx, args.s_grid, args.joint):
            writer.writerow([kind, repr(s), "" if t is None else repr(t), repr(value)])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _default_suite_kind(model: CpModel) -> str:
    return "prop1" if isinstance(model.horizon, TruncatedHorizon) else "general"


def _cmd_simulate(args) -> int:
    model = model_from_dict(_model_config(args))
    kind = args.suite_kind or _default_suite_kind(model)
    table = run_monte_carlo(model, kind, args.paths, args.seed, args.workers)
    table.to_csv(sys.stdout if args.out == "-" else args.out)
    return EXIT_OK


def _cmd_ecdf(args) -> int:
    path = Path(args.input)
    if not path.exists():
        raise ConfigError(f"No such sample file: {path}")
    table = SampleTable.from_csv(path)
    if args.positive:
        table = table.positive_sigma()
    values, probs = ecdf(table[args.column])
    out = _open_out(args.out)
    try:
        out.write("value,ecdf\n")
        for v, p in zip(values, probs):
            out.write(f"{v:.17g},{p:.17g}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


COMMANDS = {
    "enum": _cmd_enum,
    "verify": _cmd_verify,
    "transform": _cmd_transform,
    "simulate": _cmd_simulate,
    "ecdf": _cmd_ecdf,
}


def _attach_dash_values(argv: list[str]) -> list[str]:
    """Rewrite `--steps -1:1/2,...` as `--steps=-1:1/2,...` so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in _DASH_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def cli_main(argv: list[str] | None = None) -> int:
    """
    Parse arguments, run one subcommand and map the outcome to an exit code.

    Returns:
        0 if every check passed, 1 if a check failed, 2 on usage or config errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_dash_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    level = (args.log_level or settings.LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(level), int):
        print(f"lastpass: error: unknown log level {level}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )

    try:
        return COMMANDS[args.command](args)
    except LastPassageError as e:
        print(f"lastpass: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
