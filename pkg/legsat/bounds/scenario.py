import logging
import shlex
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union
from pydantic import BaseModel, ValidationError
from legsat.bounds.graph import BoundGraph, LinkNode
from legsat.bounds.propagation import (
    PropagationResult, SplitVerdict, propagate, split_obstruction)
from legsat.bounds.rules import assert_tau, assert_upper, slice_bennequin, theorem_graph
from legsat.errors import LegsatError, ScenarioError
from legsat.front_core.dsl import parse
from legsat.front_core.trace import trace_components
from legsat.front_core.validation import validate
from legsat.invariants.invariants import compute

logger = logging.getLogger(__name__)


class SplitCheck(BaseModel):
    link: str
    cable: str
    line: int


class Scenario(BaseModel):
    """
    A parsed scenario: the bound graph it builds and the split checks it
    asks for, in order.
    """
    graph: BoundGraph = BoundGraph()
    checks: List[SplitCheck] = []


class ScenarioResult(BaseModel):
    """
    Parameters
    ----------
    result : PropagationResult
        Fixpoint of the scenario's graph.
    verdicts : list of SplitVerdict
        One per ``split-check`` line.
    """
    result: PropagationResult
    verdicts: List[SplitVerdict] = []

    def as_text(self) -> str:
        lines = [self.result.as_text()]
        lines += [verdict.as_text() for verdict in self.verdicts]
        return "\n".join(lines)


def _unquote(token: str) -> str:
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "\"'":
        return token[1:-1]
    return token


def _words(raw: str) -> List[str]:
    """
    Split a line with shell quoting. An unquoted token starting with ``#``
    opens a comment, except the separator of ``connectsum <id> = <a> # <b>``.
    """
    if raw.lstrip().startswith("#"):
        return []
    lexer = shlex.shlex(raw, posix=False)
    lexer.whitespace_split = True
    lexer.commenters = ""
    tokens = list(lexer)
    for index, token in enumerate(tokens):
        if token.startswith("#") and not (
                index == 4 and token == "#" and tokens[0] == "connectsum"):
            tokens = tokens[:index]
            break
    return [_unquote(token) for token in tokens]


def _bound(text: str) -> Optional[int]:
    if text in ("-inf", "inf", "-"):
        return None
    return int(text)


class _Reader:
    "Applies one scenario line at a time to a graph."

    def __init__(self, base_dir: Path) -> None:
        self.base_dir = base_dir
        self.scenario = Scenario()
        self.handlers: Dict[str, Callable[[List[str], int], None]] = {
            "node": self.node,
            "sb": self.sb,
            "upper": self.upper,
            "tau": self.tau,
            "band": self.band,
            "xchange": self.xchange,
            "cobordism": self.cobordism,
            "connectsum": self.connectsum,
            "reverse": self.reverse,
            "split-check": self.split_check,
            "theorem": self.theorem,
        }

    @property
    def graph(self) -> BoundGraph:
        return self.scenario.graph

    @staticmethod
    def _arity(args: List[str], *counts: int) -> None:
        if len(args) not in counts:
            expected = " or ".join(str(count) for count in counts)
            raise ScenarioError(f"expected {expected} arguments, got {len(args)}")

    def node(self, args: List[str], line: int) -> None:
        self._arity(args, 3, 5)
        if args[1] != "components":
            raise ScenarioError(f"expected 'components', got {args[1]!r}")
        node = LinkNode(id=args[0], components=int(args[2]), provenance=[f"line {line}"])
        if len(args) == 5:
            if args[3] != "front":
                raise ScenarioError(f"expected 'front', got {args[3]!r}")
            path = self.base_dir / args[4]
            word = parse(path.read_bytes())
            report = validate(word)
            if not report.ok:
                raise ScenarioError(f"{path}: event {report.index}: {report.reason}")
            front = trace_components(word)
            invariants = compute(front)
            if invariants.components != node.components:
                raise ScenarioError(
                    f"{path} has {invariants.components} components, not {node.components}")
            node = node.copy(update={
                "front": front, "tb": invariants.tb, "rot": invariants.rot,
                "provenance": node.provenance + [str(path)]})
        self.graph.add_node(node)

    def sb(self, args: List[str], line: int) -> None:
        self._arity(args, 1, 3)
        node = self.graph.node(args[0])
        if len(args) == 3:
            tb, rot = int(args[1]), int(args[2])
        elif node.tb is not None and node.rot is not None:
            tb, rot = node.tb, node.rot
        else:
            raise ScenarioError(f"{node.id} has no front; give tb and rot")
        self.graph.add_facts(
            slice_bennequin(node.id, tb, rot, node.components, provenance=f"line {line}"))

    def upper(self, args: List[str], line: int) -> None:
        self._arity(args, 3)
        self.graph.add_facts([assert_upper(args[0], int(args[1]), args[2])])

    def tau(self, args: List[str], line: int) -> None:
        self._arity(args, 4)
        self.graph.add_facts(assert_tau(args[0], _bound(args[1]), _bound(args[2]), args[3]))

    def band(self, args: List[str], line: int) -> None:
        self._arity(args, 2, 3)
        self.graph.band(args[0], args[1], args[2] if len(args) == 3 else f"line {line}")

    def xchange(self, args: List[str], line: int) -> None:
        self._arity(args, 2, 3)
        self.graph.crossing_change(
            args[0], args[1], args[2] if len(args) == 3 else f"line {line}")

    def cobordism(self, args: List[str], line: int) -> None:
        self._arity(args, 4)
        self.graph.cobordism(args[0], args[1], int(args[2]), args[3])

    def connectsum(self, args: List[str], line: int) -> None:
        self._arity(args, 5)
        if args[1] != "=" or args[3] != "#":
            raise ScenarioError("expected '<id> = <a> # <b>'")
        self.graph.connected_sum(args[0], args[2], args[4])

    def reverse(self, args: List[str], line: int) -> None:
        self._arity(args, 3)
        if args[1] != "=":
            raise ScenarioError("expected '<id> = <a>'")
        self.graph.reverse(args[0], args[2])

    def split_check(self, args: List[str], line: int) -> None:
        self._arity(args, 2)
        self.graph.node(args[0])
        self.graph.node(args[1])
        self.scenario.checks.append(SplitCheck(link=args[0], cable=args[1], line=line))

    def theorem(self, args: List[str], line: int) -> None:
        self._arity(args, 1)
        if self.graph.nodes:
            raise ScenarioError("'theorem' must come before any node")
        self.scenario.graph = theorem_graph(int(args[0]))


def parse_scenario(text: str, base_dir: Union[str, Path] = ".") -> Scenario:
    """
    Read a scenario.

    One statement per line; ``#`` starts a comment and quoted strings hold
    provenance::

        node Q1 components 1
        sb Q1 1 0
        upper Q1 1 "clasped Whitehead double"

    Raises
    ------
    ScenarioError
        With the 1-based line number, for unknown statements, wrong
        arguments, unknown nodes or unreadable fronts.
    """
    reader = _Reader(Path(base_dir))
    for number, raw in enumerate(text.splitlines(), start=1):
        try:
            words = _words(raw)
            if not words:
                continue
            keyword, args = words[0], words[1:]
            if keyword not in reader.handlers:
                raise ScenarioError(f"unknown statement {keyword!r}")
            reader.handlers[keyword](args, number)
        except (LegsatError, ValidationError, ValueError, OSError) as error:
            raise ScenarioError(f"line {number}: {error}") from error
    return reader.scenario


def run_scenario(text: str, base_dir: Union[str, Path] = ".") -> ScenarioResult:
    "Parse a scenario, propagate its graph and run its split checks."
    scenario = parse_scenario(text, base_dir)
    result = propagate(scenario.graph)
    verdicts = []
    for check in scenario.checks:
        try:
            verdicts.append(split_obstruction(scenario.graph, check.link, check.cable))
        except LegsatError as error:
            raise ScenarioError(f"line {check.line}: {error}") from error
    logger.info("scenario: %d nodes, %d split checks", len(scenario.graph.nodes),
                len(verdicts))
    return ScenarioResult(result=result, verdicts=verdicts)
