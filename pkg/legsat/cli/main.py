import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional
import pandas as pd
from legsat.bounds.scenario import run_scenario
from legsat.cli.render import RenderFormat, RenderSpec, parse_ascii, render_ascii, render_svg
from legsat.cli.verify import run_checks, to_frame
from legsat.config import get_settings
from legsat.errors import InvalidFront, LegsatError, ParseError, ScenarioError
from legsat.families.families import GeneratorId, certify, certify_all, generate
from legsat.front_core.dsl import parse, render_text
from legsat.front_core.front_word import FrontWord
from legsat.front_core.trace import trace_components
from legsat.front_core.validation import validate
from legsat.invariants.invariants import compute
from legsat.moves.moves import perturb
from legsat.satellite.satellite import SpliceSpec, check_composition, legendrian_satellite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3


class _Parser(argparse.ArgumentParser):
    "Argument parser exiting with status 1 on usage errors."

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(source: str) -> bytes:
    if source == "-":
        return sys.stdin.buffer.read()
    return Path(source).read_bytes()


def _write(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_word(source: str) -> FrontWord:
    "Parse a DSL file (or an ascii grid) and check it replays."
    data = _read(source)
    text = data.decode("utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) > 1 and set(lines[1]) <= set(" -<>X/\\"):
        word = parse_ascii(text)
    else:
        word = parse(data)
    report = validate(word)
    if not report.ok:
        raise InvalidFront(f"{source}: event {report.index}: {report.reason}")
    return word


def _invariants(args: argparse.Namespace) -> int:
    report = compute(trace_components(_load_word(args.file)))
    _write(report.json() + "\n" if args.json else report.as_text(), args.output)
    return EXIT_OK


def _validate(args: argparse.Namespace) -> int:
    word = parse(_read(args.file))
    report = validate(word)
    if args.json:
        _write(report.json() + "\n", None)
    elif report.ok:
        _write(f"ok: {len(word)} events\n", None)
    else:
        _write(f"invalid: event {report.index}: {report.reason}\n", None)
    return EXIT_OK if report.ok else EXIT_INVALID


def _satellite(args: argparse.Namespace) -> int:
    pattern = _load_word(args.pattern)
    companion = _load_word(args.companion)
    if args.check:
        report = check_composition(pattern, companion, args.cut, args.strand)
        _write(report.json() + "\n", args.output)
        return EXIT_OK if report.holds else EXIT_CHECK_FAILED
    satellite = legendrian_satellite(SpliceSpec(
        pattern=pattern, companion=companion, cut_index=args.cut, strand=args.strand))
    _write(render_text(satellite.word).decode("utf-8"), args.output)
    return EXIT_OK


def _generator(args: argparse.Namespace) -> GeneratorId:
    text = args.name if args.index is None else f"{args.name}({args.index})"
    return GeneratorId.parse(text)


def _family(args: argparse.Namespace) -> int:
    _write(render_text(generate(_generator(args))).decode("utf-8"), args.output)
    return EXIT_OK


def _certify(args: argparse.Namespace) -> int:
    if args.name is None:
        reports = certify_all(args.i_max)
    else:
        reports = [certify(_generator(args))]
    frame = pd.concat([report.to_frame() for report in reports], ignore_index=True)
    if args.json:
        _write(frame.to_json(orient="records") + "\n", args.output)
    else:
        _write(frame.to_string(index=False) + "\n", args.output)
    return EXIT_OK if all(report.passed for report in reports) else EXIT_CHECK_FAILED


def _perturb(args: argparse.Namespace) -> int:
    steps = get_settings().perturb_steps if args.steps is None else args.steps
    seed = get_settings().seed if args.seed is None else args.seed
    word = perturb(_load_word(args.file), steps, seed)
    _write(render_text(word).decode("utf-8"), args.output)
    return EXIT_OK


def _render(args: argparse.Namespace) -> int:
    spec = RenderSpec(format=args.format, scale=args.scale, labels=args.labels,
                      directions=args.directions)
    word = _load_word(args.file)
    if spec.format is RenderFormat.ASCII:
        _write(render_ascii(word), args.output)
    else:
        _write(render_svg(trace_components(word), spec).decode("utf-8"), args.output)
    return EXIT_OK


def _bounds(args: argparse.Namespace) -> int:
    text = _read(args.scenario).decode("utf-8")
    base_dir = Path.cwd() if args.scenario == "-" else Path(args.scenario).parent
    outcome = run_scenario(text, base_dir)
    if args.json:
        document = {
            "intervals": json.loads(outcome.result.to_frame().to_json(orient="records")),
            "contradiction": None if outcome.result.contradiction is None
            else str(outcome.result.contradiction),
            "derivation": [str(step) for step in outcome.result.derivation.steps],
            "split_checks": [
                {"link": verdict.link, "cable": verdict.cable,
                 "verdict": verdict.verdict.value}
                for verdict in outcome.verdicts
            ],
        }
        _write(json.dumps(document, indent=2) + "\n", args.output)
    else:
        _write(outcome.as_text() + "\n", args.output)
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    outcomes = run_checks()
    if args.json:
        _write(json.dumps([outcome.dict() for outcome in outcomes], indent=2) + "\n",
               args.output)
    else:
        _write(to_frame(outcomes).to_string(index=False) + "\n", args.output)
    return EXIT_OK if all(outcome.passed for outcome in outcomes) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="legsat",
        description="Legendrian fronts, satellites and slice-genus bounds.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG logging")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.set_defaults(handler=handler)
        sub.add_argument("-o", "--output", help="write to this file instead of stdout")
        return sub

    sub = command("invariants", _invariants, "tb, rot, winding and linking of a front")
    sub.add_argument("file", help="front file, '-' for stdin")
    sub.add_argument("--json", action="store_true")

    sub = command("validate", _validate, "replay a front word")
    sub.add_argument("file", help="front file, '-' for stdin")
    sub.add_argument("--json", action="store_true")

    sub = command("satellite", _satellite, "splice a pattern into a companion")
    sub.add_argument("pattern", help="annular front file")
    sub.add_argument("companion", help="closed front file")
    sub.add_argument("--cut", type=int, help="column of the copy word to cut at")
    sub.add_argument("--strand", type=int, help="companion level whose bundle is cut")
    sub.add_argument("--check", action="store_true",
                     help="compare with the composition laws instead of printing the word")

    sub = command("family", _family, "emit a generated front")
    sub.add_argument("name", help="unknot, trefoil, demo, W, J, K, P, Q, L or Lprime")
    sub.add_argument("index", nargs="?", type=int)

    sub = command("certify", _certify, "check generated fronts against their captions")
    sub.add_argument("name", nargs="?")
    sub.add_argument("index", nargs="?", type=int)
    sub.add_argument("--i-max", type=int, default=30)
    sub.add_argument("--json", action="store_true")

    sub = command("perturb", _perturb, "apply random front moves")
    sub.add_argument("file", help="front file, '-' for stdin")
    sub.add_argument("--steps", type=int)
    sub.add_argument("--seed", type=int)

    sub = command("render", _render, "draw a front as svg or ascii")
    sub.add_argument("file", help="front file, '-' for stdin")
    sub.add_argument("--format", choices=[item.value for item in RenderFormat], default="svg")
    sub.add_argument("--scale", type=float)
    sub.add_argument("--labels", action="store_true")
    sub.add_argument("--directions", action="store_true")

    sub = command("bounds", _bounds, "propagate a bound scenario")
    sub.add_argument("scenario", help="scenario file, '-' for stdin")
    sub.add_argument("--json", action="store_true")

    sub = command("verify", _verify, "run every acceptance check")
    sub.add_argument("--json", action="store_true")
    return parser


def _configure_logging(verbose: int) -> None:
    level = get_settings().log_level
    if verbose == 1:
        level = "INFO"
    elif verbose > 1:
        level = "DEBUG"
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns
    -------
    status : int
        0 on success, 1 for usage errors, 2 for invalid fronts or
        scenarios, 3 for failed checks.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (ParseError, InvalidFront, ScenarioError) as error:
        sys.stderr.write(f"legsat: {error}\n")
        return EXIT_INVALID
    except (LegsatError, ValueError, OSError) as error:
        sys.stderr.write(f"legsat: {error}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
