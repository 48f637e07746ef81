"""
The `curveasym` command.

Exit codes: 0 when every verdict holds, 1 when one is violated,
inconclusive or unresolved (or a verify check fails), 2 for bad input
or configuration, 3 for numerical failures.
"""

# Standard library
import argparse
import dataclasses
import logging
import math
import sys

# Local
from canonicalwebteam.curveasym.asymptote import (
    EPSILON,
    WINDOW,
    closed_form_ratio,
    make_sequence,
)
from canonicalwebteam.curveasym.catalog import build, catalog_list, get_entry
from canonicalwebteam.curveasym.exceptions import InputError, NumericalError
from canonicalwebteam.curveasym.meanvalue import MeanValueProblem
from canonicalwebteam.curveasym.models import Verdict
from canonicalwebteam.curveasym.parsers.config import read_config
from canonicalwebteam.curveasym.reports import (
    ACCEPTANCE_CHECKS,
    arc_run,
    curve_run,
    meanvalue_run,
    run_acceptance,
    summary_json,
    verify_report,
    write_text,
)
from canonicalwebteam.curveasym.support import N_GRID, SupportConfig


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _outputs(parser):
    parser.add_argument("--out", help="CSV file (default: stdout)")
    parser.add_argument(
        "--json-summary",
        metavar="PATH",
        help="Write the verdict record as JSON ('-' for stdout)",
    )


def _sampling(parser):
    parser.add_argument("--count", type=int, help="Sequence length")
    parser.add_argument("--window", type=int, default=WINDOW)
    parser.add_argument("--epsilon", type=float, default=EPSILON)
    parser.add_argument("--n-grid", type=int, default=N_GRID)
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Threads to spread the samples over",
    )


def _parameters(parser):
    parser.add_argument("--alpha", type=float, help="Family parameter")
    parser.add_argument("--beta", type=float, help="Weight exponent")
    parser.add_argument("--l", type=float, dest="power", help="ex3 exponent")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curveasym",
        description=(
            "Where support and mean value points sit on a chord "
            "as it shrinks to the start of a curve"
        ),
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Debug logging"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    example = commands.add_parser("example", help="Run a built-in example")
    example.add_argument("name", nargs="?", help="Catalog entry (see `list`)")
    example.add_argument("--name", dest="name_option", metavar="NAME")
    _parameters(example)
    _sampling(example)
    _outputs(example)

    analyze = commands.add_parser("analyze", help="Run a curve config file")
    analyze.add_argument("config", nargs="?", help="key = value curve file")
    analyze.add_argument("--config", dest="config_option", metavar="PATH")
    analyze.add_argument("--workers", type=int, default=1)
    _outputs(analyze)

    meanvalue = commands.add_parser(
        "meanvalue", help="Mean value points of a preset"
    )
    meanvalue.add_argument("--preset", required=True)
    meanvalue.add_argument(
        "--solver",
        choices=("mu", "xi"),
        help="Solve for mu or xi instead of the preset's default",
    )
    meanvalue.add_argument(
        "--xmin", type=float, help="Smallest x of the sequence"
    )
    _parameters(meanvalue)
    _sampling(meanvalue)
    _outputs(meanvalue)

    arclength = commands.add_parser(
        "arclength", help="Arc length ratios against 1/e"
    )
    source = arclength.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="key = value curve file")
    source.add_argument("--example", help="Catalog curve")
    arclength.add_argument(
        "--assume-rectifiable",
        action="store_true",
        help="Skip the finite length check",
    )
    _parameters(arclength)
    _sampling(arclength)
    _outputs(arclength)

    verify = commands.add_parser("verify", help="Run the acceptance checks")
    verify.add_argument(
        "--check",
        action="append",
        choices=[name for name, _ in ACCEPTANCE_CHECKS],
        help="Run only this check (repeatable)",
    )

    commands.add_parser("list", help="List the catalog")

    return parser


def _either(args, key):
    """
    The value of an argument that can be given positionally or as an
    option
    """

    positional = getattr(args, key)
    option = getattr(args, f"{key}_option")

    if positional and option and positional != option:
        raise InputError(f"Two different {key}s given: {positional}, {option}")

    if not (positional or option):
        raise InputError(f"{args.command} needs a {key}")

    return positional or option


def _value(entry, args):
    given = {
        "alpha": args.alpha,
        "beta": args.beta,
        "l": args.power,
    }
    values = {key: value for key, value in given.items() if value is not None}

    if not values:
        return None

    if list(values) != [entry.parameter]:
        raise InputError(
            f"{entry.name} takes "
            + (f"--{entry.parameter}" if entry.parameter else "no parameter")
        )

    return values[entry.parameter]


def _closed_form(entry, value):
    if not entry.closed_form:
        return None

    return closed_form_ratio(entry.closed_form, value)


def _sequence(spec, args):
    if args.count is not None:
        spec = dataclasses.replace(spec, count=args.count)

    return make_sequence(spec)


def _to_xmin(spec, x_min):
    """
    Shorten or extend a geometric sequence so it ends at the last x
    not below `x_min`
    """

    if not spec.a < x_min < spec.start:
        raise InputError(
            f"xmin must lie in ({spec.a}, {spec.start}), got {x_min}"
        )

    steps = math.log((x_min - spec.a) / (spec.start - spec.a)) / math.log(
        spec.ratio
    )

    return dataclasses.replace(spec, count=int(math.floor(steps + 1e-9)) + 1)


def _emit(args, text, record):
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)

    if args.json_summary == "-":
        sys.stdout.write(summary_json(record))
    elif args.json_summary:
        write_text(args.json_summary, summary_json(record))

    estimate = record.get("estimate")
    print(
        f"{record['verdict']}: estimate {estimate} against {record['bound']}",
        file=sys.stderr,
    )

    for failure in record.get("failures", []):
        print(f"failed: {failure}", file=sys.stderr)

    if record["verdict"] == Verdict.HOLDS.value:
        return EXIT_OK

    return EXIT_VERDICT


def _support_config(args):
    return SupportConfig(n_grid=args.n_grid)


def run_example(args):
    entry = get_entry(_either(args, "name"))
    subject, spec, value = build(entry.name, _value(entry, args))
    seq = _sequence(spec, args)

    if entry.group == "meanvalue":
        text, record = meanvalue_run(
            subject,
            seq,
            window=args.window,
            epsilon=args.epsilon,
            n_grid=args.n_grid,
            closed_form=_closed_form(entry, value),
        )
    else:
        text, record = curve_run(
            subject,
            seq,
            _support_config(args),
            window=args.window,
            epsilon=args.epsilon,
            workers=args.workers,
            closed_form=_closed_form(entry, value),
        )

    return _emit(args, text, record)


def _read_config(path):
    config, warnings = read_config(path)

    for message in warnings:
        logger.warning(message)

    return config


def run_analyze(args):
    config = _read_config(_either(args, "config"))
    text, record = curve_run(
        config.curve,
        make_sequence(config.sequence),
        config.support,
        window=config.window,
        epsilon=config.epsilon,
        workers=args.workers,
    )

    return _emit(args, text, record)


def run_meanvalue(args):
    entry = get_entry(args.preset, group="meanvalue")
    problem, spec, value = build(entry.name, _value(entry, args))

    if args.solver and args.solver != problem.kind:
        if problem.pair is None:
            raise InputError(f"{entry.name} only has the eta solver")

        problem = MeanValueProblem(
            args.solver, pair=problem.pair, name=problem.name
        )

    if args.xmin is not None:
        spec = _to_xmin(spec, args.xmin)

    text, record = meanvalue_run(
        problem,
        _sequence(spec, args),
        window=args.window,
        epsilon=args.epsilon,
        n_grid=args.n_grid,
        closed_form=_closed_form(entry, value),
    )

    return _emit(args, text, record)


def run_arclength(args):
    if args.config:
        config = _read_config(args.config)
        curve = config.curve
        seq = _sequence(config.sequence, args)
        support_cfg = config.support
    else:
        entry = get_entry(args.example, group="curve")
        curve, spec, _ = build(entry.name, _value(entry, args))
        seq = _sequence(spec, args)
        support_cfg = _support_config(args)

    text, record = arc_run(
        curve,
        seq,
        support_cfg,
        window=args.window,
        epsilon=args.epsilon,
        workers=args.workers,
        assume_rectifiable=args.assume_rectifiable,
    )

    return _emit(args, text, record)


def run_verify(args):
    results = run_acceptance(args.check)
    sys.stdout.write(verify_report(results))

    if all(result.passed for result in results):
        return EXIT_OK

    return EXIT_VERDICT


def run_list(args):
    for entry in catalog_list():
        parameter = ""

        if entry["parameter"]:
            parameter = f" [--{entry['parameter']} {entry['default']}]"

        print(
            f"{entry['name']:<18} {entry['group']:<9} "
            f"{entry['description']}{parameter}"
        )

    return EXIT_OK


COMMANDS = {
    "example": run_example,
    "analyze": run_analyze,
    "meanvalue": run_meanvalue,
    "arclength": run_arclength,
    "verify": run_verify,
    "list": run_list,
}


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as error:
        # argparse has printed the usage error, or the help
        return EXIT_INPUT if error.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return COMMANDS[args.command](args)
    except (InputError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as error:
        print(f"numerical error: {error}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(run())
