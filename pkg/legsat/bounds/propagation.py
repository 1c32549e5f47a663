import logging
from enum import Enum
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union
import pandas as pd
from pydantic import BaseModel, NonNegativeInt
from legsat.bounds.graph import BoundGraph, BoundRef, Constraint, Quantity, Side, hi, lo
from legsat.bounds.interval import Interval
from legsat.bounds.rules import (
    cable_id, compile_rules, reoriented_id, slice_bennequin, theorem_graph)
from legsat.config import get_settings
from legsat.errors import MissingFacts

logger = logging.getLogger(__name__)


class Step(BaseModel):
    """
    One tightening of one interval end.

    Parameters
    ----------
    index : int
        Position in the derivation.
    target : BoundRef
        The end that was tightened.
    value : int
        Its new value.
    rule : str
        Name of the constraint that fired.
    inputs : tuple of (int, int)
        ``(step index, coefficient)`` of every bound the value depends on.
    constant : int
        Constant part of the constraint.
    provenance : str
        Provenance of the constraint.
    """
    index: NonNegativeInt
    target: BoundRef
    value: int
    rule: str
    inputs: Tuple[Tuple[int, int], ...] = ()
    constant: int
    provenance: str = ""

    class Config:
        allow_mutation = False

    def __str__(self) -> str:
        relation = ">=" if self.target.side is Side.LO else "<="
        sources = " ".join(f"{coef:+d}*#{step}" for step, coef in self.inputs)
        text = f"#{self.index} {self.target} {relation} {self.value}  [{self.rule}]"
        if self.inputs:
            text += f" = {self.constant} {sources}"
        if self.provenance:
            text += f"  ({self.provenance})"
        return text


class Contradiction(BaseModel):
    """
    An interval whose lower end passed its upper end.

    Parameters
    ----------
    node : str
    quantity : Quantity
    lower : int
        Step setting the lower end.
    upper : int
        Step setting the upper end.
    """
    node: str
    quantity: Quantity
    lower: NonNegativeInt
    upper: NonNegativeInt

    def __str__(self) -> str:
        return (f"contradiction on {self.quantity.value}({self.node}): "
                f"steps #{self.lower} and #{self.upper}")


class Derivation(BaseModel):
    """
    Replayable record of a propagation: every step names the earlier steps
    its value was computed from.
    """
    steps: List[Step] = []

    def replay(self) -> Dict[Tuple[str, Quantity], Interval]:
        """
        Recompute every step from its inputs and return the final interval
        of every bounded ``(node, quantity)``.

        Raises
        ------
        ValueError
            If a step does not evaluate to its recorded value, or uses a
            later step.
        """
        ends: Dict[BoundRef, int] = {}
        for step in self.steps:
            if any(source >= step.index for source, _ in step.inputs):
                raise ValueError(f"step #{step.index} uses a later step")
            value = step.constant + sum(
                coef * self.steps[source].value for source, coef in step.inputs)
            if value != step.value:
                raise ValueError(
                    f"step #{step.index} evaluates to {value}, not {step.value}")
            ends[step.target] = value
        intervals: Dict[Tuple[str, Quantity], Interval] = {}
        for ref, value in ends.items():
            key = (ref.node, ref.quantity)
            interval = intervals.get(key, Interval())
            if ref.side is Side.LO:
                intervals[key] = Interval(lo=value, hi=interval.hi)
            else:
                intervals[key] = Interval(lo=interval.lo, hi=value)
        return intervals

    def explain(self, ref: BoundRef) -> List[Step]:
        "The steps the last value of ``ref`` rests on, in order."
        last = [step.index for step in self.steps if step.target == ref]
        if not last:
            return []
        needed: Set[int] = set()
        pending = [last[-1]]
        while pending:
            index = pending.pop()
            if index in needed:
                continue
            needed.add(index)
            pending.extend(source for source, _ in self.steps[index].inputs)
        return [self.steps[index] for index in sorted(needed)]

    def rules_used(self, ref: BoundRef) -> Set[str]:
        return {step.rule for step in self.explain(ref)}

    def as_text(self, steps: Optional[Iterable[Step]] = None) -> str:
        return "\n".join(str(step) for step in (self.steps if steps is None else steps))


class PropagationResult(BaseModel):
    """
    Fixpoint of a bound graph.

    Parameters
    ----------
    graph : BoundGraph
        Copy of the input graph with every node's intervals tightened.
    derivation : Derivation
    contradiction : Contradiction, default=None
        Set when an interval became empty; propagation stops there.
    rounds : int
        Passes over the constraints.
    converged : bool
        False when ``max_rounds`` was reached first.
    """
    graph: BoundGraph
    derivation: Derivation
    contradiction: Optional[Contradiction] = None
    rounds: NonNegativeInt
    converged: bool = True

    def interval(self, node: str, quantity: Union[Quantity, str]) -> Interval:
        return getattr(self.graph.node(node), Quantity(quantity).value)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"node": node.id, "components": node.components,
             "tau": str(node.tau), "g4": str(node.g4)}
            for node in self.graph.nodes.values()
        ]
        return pd.DataFrame(rows, columns=["node", "components", "tau", "g4"])

    def as_text(self) -> str:
        lines = [self.to_frame().to_string(index=False), "", self.derivation.as_text()]
        if self.contradiction is not None:
            lines += ["", str(self.contradiction)]
        return "\n".join(lines)


def _initial_steps(graph: BoundGraph) -> List[Step]:
    "Steps for intervals a node was created with."
    steps = []
    for node in graph.nodes.values():
        for quantity in Quantity:
            interval: Interval = getattr(node, quantity.value)
            for side, value in ((Side.LO, interval.lo), (Side.HI, interval.hi)):
                if value is not None:
                    steps.append(Step(
                        index=len(steps), target=BoundRef(node.id, quantity, side),
                        value=value, rule="initial", constant=value,
                        provenance="; ".join(node.provenance)))
    return steps


def _evaluate(rule: Constraint, ends: Dict[BoundRef, int]) -> Optional[int]:
    "Right-hand side of ``rule``, or None while a term is unbounded."
    value = rule.constant
    for term, coef in rule.terms:
        if term not in ends:
            return None
        value += coef * ends[term]
    return value


def propagate(graph: BoundGraph, max_rounds: Optional[int] = None) -> PropagationResult:
    """
    Tighten every interval of ``graph`` until nothing changes.

    Constraints are evaluated in ``compile_rules`` order, repeatedly, each
    one seeing the values tightened before it in the same round. Lower ends only
    rise and upper ends only fall. Propagation stops at the first
    empty interval.

    Parameters
    ----------
    graph : BoundGraph
    max_rounds : int, default=None
        Cap on rounds; ``Settings.max_rounds`` when not given.

    Returns
    -------
    result : PropagationResult
    """
    max_rounds = max_rounds or get_settings().max_rounds
    rules = compile_rules(graph)
    steps = _initial_steps(graph)
    ends: Dict[BoundRef, int] = {}
    producer: Dict[BoundRef, int] = {}
    for step in steps:
        ends[step.target] = step.value
        producer[step.target] = step.index

    contradiction = None
    rounds = 0
    changed = True
    while changed and contradiction is None and rounds < max_rounds:
        changed = False
        rounds += 1
        for rule in rules:
            value = _evaluate(rule, ends)
            if value is None:
                continue
            target = rule.target
            current = ends.get(target)
            if current is not None and (
                    value <= current if target.side is Side.LO else value >= current):
                continue
            step = Step(
                index=len(steps), target=target, value=value, rule=rule.rule,
                inputs=tuple((producer[term], coef) for term, coef in rule.terms),
                constant=rule.constant, provenance=rule.provenance)
            steps.append(step)
            ends[target] = value
            producer[target] = step.index
            changed = True
            logger.debug("%s", step)

            low = lo(target.node, target.quantity)
            high = hi(target.node, target.quantity)
            if low in ends and high in ends and ends[low] > ends[high]:
                contradiction = Contradiction(
                    node=target.node, quantity=target.quantity,
                    lower=producer[low], upper=producer[high])
                logger.info("%s", contradiction)
                break

    converged = not changed or contradiction is not None
    if not converged:
        logger.warning("propagation stopped after %d rounds without a fixpoint", rounds)

    nodes = {}
    for node_id, node in graph.nodes.items():
        update = {}
        for quantity in Quantity:
            update[quantity.value] = Interval(
                lo=ends.get(lo(node_id, quantity)), hi=ends.get(hi(node_id, quantity)))
        nodes[node_id] = node.copy(update=update)
    logger.info("propagation: %d steps in %d rounds", len(steps), rounds)
    return PropagationResult(
        graph=graph.copy(update={"nodes": nodes}),
        derivation=Derivation(steps=steps),
        contradiction=contradiction,
        rounds=rounds,
        converged=converged)


class Verdict(str, Enum):
    CONTRADICTION = "contradiction"
    INCONCLUSIVE = "inconclusive"


class SplitVerdict(BaseModel):
    """
    Outcome of assuming a two-component link is concordant to a split link.

    Parameters
    ----------
    verdict : Verdict
        CONTRADICTION certifies the link is not smoothly concordant to the
        split union of the cable and its reverse.
    link, cable : str
    link_genus : int
        Exact g4 of the link.
    sum_tau : int
        tau of the cable plus tau of its reverse.
    result : PropagationResult
        Propagation under the split hypothesis.
    """
    verdict: Verdict
    link: str
    cable: str
    link_genus: int
    sum_tau: int
    result: PropagationResult

    def as_text(self) -> str:
        return (f"split-check {self.link} against {self.cable} # r{self.cable}: "
                f"g4 = {self.link_genus}, tau of the sum = {self.sum_tau} -> "
                f"{self.verdict.value}")


def split_obstruction(
    graph: BoundGraph,
    link: str,
    cable: str,
    max_rounds: Optional[int] = None
) -> SplitVerdict:
    """
    Test whether ``link`` can be smoothly concordant to the split union of
    ``cable`` and its reverse.

    The graph is propagated; the link's g4 and the cable's tau must then be
    exact. The reverse of the cable, the connected sum of the two and the
    split hypothesis (equal g4 of link and sum) are added and the graph is
    propagated again: a contradiction rules the split concordance out.

    Raises
    ------
    MissingFacts
        If g4 of the link or tau of the cable is not pinned down.
    """
    known = propagate(graph, max_rounds)
    if known.contradiction is not None:
        raise MissingFacts(f"the graph is already contradictory: {known.contradiction}")
    link_genus = known.interval(link, Quantity.G4)
    cable_tau = known.interval(cable, Quantity.TAU)
    if not link_genus.is_exact:
        raise MissingFacts(f"g4({link}) is only known to lie in {link_genus}")
    if not cable_tau.is_exact:
        raise MissingFacts(f"tau({cable}) is only known to lie in {cable_tau}")

    hypothetical = graph.copy(deep=True)
    reverse_id = f"r{cable}"
    if reverse_id not in hypothetical.nodes:
        hypothetical.reverse(reverse_id, cable)
    sum_id = f"{cable}#{reverse_id}"
    if sum_id not in hypothetical.nodes:
        hypothetical.connected_sum(sum_id, cable, reverse_id)
    hypothetical.hypothesize_split(link, sum_id)

    result = propagate(hypothetical, max_rounds)
    verdict = Verdict.CONTRADICTION if result.contradiction is not None else Verdict.INCONCLUSIVE
    logger.info("split-check %s against %s: %s", link, cable, verdict.value)
    return SplitVerdict(
        verdict=verdict, link=link, cable=cable,
        link_genus=link_genus.lo, sum_tau=2 * cable_tau.lo, result=result)


def reorientation_bound(i: int, max_rounds: Optional[int] = None) -> Constraint:
    """
    Lower bound on g4 of L'_i(K), the doubled cable with parallel
    components, through the band joining it to P_{2i+2}(K).

    Only the cable carries a slice-Bennequin bound here; the result is the
    cable's bound less one.

    Parameters
    ----------
    i : int
        Index, ``i >= 0``.

    Returns
    -------
    fact : Constraint
        ``g4(L'_i(K)) >= 2i + 1``.
    """
    if i < 0:
        raise ValueError("the index must be non-negative")
    full = theorem_graph(i)
    cable, link = cable_id(2 * i + 2), reoriented_id(i)
    graph = BoundGraph()
    for node_id in (cable, link):
        graph.add_node(full.node(node_id).copy())
    source = full.node(cable)
    graph.add_facts(slice_bennequin(cable, source.tb, source.rot, source.components))
    graph.band(link, cable, "band joining the parallel cables into one")
    result = propagate(graph, max_rounds)
    value = result.interval(link, Quantity.G4).lo
    logger.info("g4(%s) >= %d", link, value)
    return Constraint(
        target=lo(link, Quantity.G4), constant=value, rule="reorientation",
        provenance=f"band to {cable}, {len(result.derivation.steps)} steps")
