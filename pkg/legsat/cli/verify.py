import logging
import time
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Callable, List, NamedTuple, Optional, Tuple
import numpy as np
import pandas as pd
from pydantic import BaseModel
from legsat.bounds.graph import Quantity, hi
from legsat.bounds.interval import Interval
from legsat.bounds.propagation import (
    PropagationResult, Verdict, propagate, reorientation_bound, split_obstruction)
from legsat.bounds.rules import (
    cable_id, clasped_id, link_id, reoriented_id, slice_bennequin, theorem_graph)
from legsat.config import Settings, get_settings
from legsat.families.families import (
    GeneratorId, GeneratorName, certify_all, generate)
from legsat.front_core.event import EventKind, Shape
from legsat.front_core.generator import FrontWordGenerator
from legsat.front_core.trace import trace_components
from legsat.invariants.invariants import InvariantReport, compute
from legsat.moves.moves import apply, find_sites, perturb
from legsat.satellite.satellite import (
    SpliceSpec, check_composition, legendrian_satellite)

logger = logging.getLogger(__name__)

CAPTION_I_MAX = 30
THEOREM_I_MAX = 20
LINKING_I_MAX = 5
SATELLITE_SIZE_INDEX = 50
SATELLITE_SECONDS = 2.0


class CheckOutcome(BaseModel):
    """
    One row of the verify table.

    Parameters
    ----------
    check : str
        Short name.
    reference : str
        What the expected value is taken from.
    expected : str
    computed : str
    status : str
        ``pass``, ``fail`` or ``error``.
    """
    check: str
    reference: str
    expected: str
    computed: str
    status: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class Check(NamedTuple):
    name: str
    reference: str
    run: Callable[[Settings], Tuple[str, str]]


def _gen(name: GeneratorName, index: Optional[int] = None) -> GeneratorId:
    return GeneratorId(name=name, index=index)


def _invariant_signature(report: InvariantReport) -> Tuple:
    "Per-component data independent of how the components are numbered."
    pairs = sorted(zip(report.component_tb, report.component_rot))
    n = report.components
    matrix = np.array(report.linking, dtype=np.int64).reshape(n, n)
    upper = sorted(matrix[np.triu_indices(n, k=1)].tolist())
    return report.tb, report.rot, tuple(pairs), tuple(upper)


@lru_cache(maxsize=1)
def _theorem() -> PropagationResult:
    return propagate(theorem_graph(THEOREM_I_MAX))


def _captions(settings: Settings) -> Tuple[str, str]:
    reports = certify_all(CAPTION_I_MAX)
    failed = [report.generator for report in reports if not report.passed]
    return f"{len(reports)} passed", (
        f"{len(reports) - len(failed)} passed" + (f", failed {failed}" if failed else ""))


def _worked_example(settings: Settings) -> Tuple[str, str]:
    pattern = generate(_gen(GeneratorName.DEMO))
    companion = generate(_gen(GeneratorName.TREFOIL))
    p = compute(trace_components(pattern))
    k = compute(trace_components(companion))
    s = compute(legendrian_satellite(SpliceSpec(pattern=pattern, companion=companion)))
    return ("P (2, 0, 1), K (1, 0), P(K) (3, 0)",
            f"P ({p.tb}, {p.rot}, {p.winding}), K ({k.tb}, {k.rot}), P(K) ({s.tb}, {s.rot})")


def _calibration(settings: Settings) -> Tuple[str, str]:
    report = compute(trace_components(generate(_gen(GeneratorName.TREFOIL))))
    return "writhe 3, tb 1, rot 0", f"writhe {report.writhe}, tb {report.tb}, rot {report.rot}"


def _composition_generators(settings: Settings) -> Tuple[str, str]:
    patterns = [_gen(GeneratorName.DEMO), _gen(GeneratorName.W)]
    for i in range(1, 4):
        patterns += [_gen(GeneratorName.P, i), _gen(GeneratorName.Q, i)]
    for i in range(0, 3):
        patterns += [_gen(GeneratorName.L, i), _gen(GeneratorName.LPRIME, i)]
    companions = [_gen(name) for name in (
        GeneratorName.UNKNOT, GeneratorName.TREFOIL, GeneratorName.J, GeneratorName.K)]
    failed = []
    for pattern in patterns:
        for companion in companions:
            if not check_composition(generate(pattern), generate(companion)).holds:
                failed.append(f"{pattern}({companion})")
    total = len(patterns) * len(companions)
    return f"{total} hold", f"{total - len(failed)} hold" + (
        f", failed {failed}" if failed else "")


def _composition_random(settings: Settings) -> Tuple[str, str]:
    rng = np.random.default_rng(settings.seed)
    companions = [generate(_gen(name)) for name in (
        GeneratorName.UNKNOT, GeneratorName.TREFOIL, GeneratorName.J)]
    failed = 0
    for case in range(settings.random_cases):
        sampler = FrontWordGenerator(
            n_words=1, length=6, max_strands=6, shape=Shape.ANNULAR,
            seam_strands=int(rng.integers(1, 4)), seed=settings.seed + case)
        sampler.sample()
        pattern = perturb(sampler.words[0], 2, settings.seed + case)
        companion = perturb(companions[case % len(companions)], 2, settings.seed + case)
        if not check_composition(pattern, companion).holds:
            failed += 1
    return f"{settings.random_cases} hold", f"{settings.random_cases - failed} hold"


def _move_invariance(settings: Settings) -> Tuple[str, str]:
    rng = np.random.default_rng(settings.seed)
    words = []
    for shape, seam in ((Shape.CLOSED, 0), (Shape.ANNULAR, 2)):
        sampler = FrontWordGenerator(
            n_words=max(settings.move_cases // 2, 1), length=8, max_strands=6,
            shape=shape, seam_strands=seam, seed=settings.seed)
        sampler.sample()
        words += sampler.words
    changed = 0
    for word in words[:settings.move_cases]:
        sites = find_sites(word)
        site = sites[int(rng.integers(len(sites)))]
        before = _invariant_signature(compute(trace_components(word)))
        after = _invariant_signature(compute(trace_components(apply(word, site))))
        if before != after:
            changed += 1
            logger.warning("%s changes the invariants of %s", site, word)
    cases = min(len(words), settings.move_cases)
    return f"{cases} unchanged", f"{cases - changed} unchanged"


def _satellite_size(settings: Settings) -> Tuple[str, str]:
    i = SATELLITE_SIZE_INDEX
    pattern = generate(_gen(GeneratorName.L, i))
    companion = generate(_gen(GeneratorName.K))
    n = pattern.seam_strands
    cusps = int((companion.kinds != EventKind.CROSSING).sum())
    crossings = len(companion) - cusps
    size = cusps * (n + n * (n - 1) // 2) + crossings * n * n + len(pattern)
    start = time.perf_counter()
    satellite = legendrian_satellite(SpliceSpec(pattern=pattern, companion=companion))
    report = compute(satellite)
    elapsed = time.perf_counter() - start
    logger.info("L(%d) over K: %d events in %.2f s", i, len(satellite.word), elapsed)
    timing = "under" if elapsed < SATELLITE_SECONDS else "over"
    return (f"{size} events, tb {2 * i}, rot 0, 2 components, under {SATELLITE_SECONDS:g} s",
            f"{len(satellite.word)} events, tb {report.tb}, rot {report.rot}, "
            f"{report.components} components, {timing} {SATELLITE_SECONDS:g} s")


def _pinned(result: PropagationResult, nodes: List[Tuple[str, int]],
            quantity: Quantity) -> List[str]:
    return [node for node, value in nodes
            if result.interval(node, quantity) != Interval.exact(value)]


def _cables_and_clasps(settings: Settings) -> Tuple[str, str]:
    result = _theorem()
    nodes = [(cable_id(i), i) for i in range(1, THEOREM_I_MAX + 1)]
    nodes += [(clasped_id(i), i) for i in range(1, THEOREM_I_MAX + 1)]
    off = _pinned(result, nodes, Quantity.G4) + _pinned(result, nodes, Quantity.TAU)
    rules = result.derivation.rules_used(hi(clasped_id(THEOREM_I_MAX), Quantity.G4))
    cited = {"asserted-upper", "crossing-change"} <= rules
    return ("all pinned; cited",
            ("all pinned" if not off else f"not pinned: {off}") +
            ("; cited" if cited else f"; rules {sorted(rules)}"))


def _doubled_cable_genus(settings: Settings) -> Tuple[str, str]:
    result = _theorem()
    off = _pinned(result, [(link_id(i), i) for i in range(THEOREM_I_MAX + 1)], Quantity.G4)
    return "all pinned", "all pinned" if not off else f"not pinned: {off}"


def _doubled_cable_tau(settings: Settings) -> Tuple[str, str]:
    result = _theorem()
    off = _pinned(result, [(link_id(i), i + 1) for i in range(THEOREM_I_MAX + 1)],
                  Quantity.TAU)
    return "all pinned", "all pinned" if not off else f"not pinned: {off}"


def _non_splitness(settings: Settings) -> Tuple[str, str]:
    graph = theorem_graph(THEOREM_I_MAX)
    verdicts = [split_obstruction(graph, link_id(i), cable_id(i + 1)).verdict
                for i in range(THEOREM_I_MAX + 1)]
    contradictions = sum(verdict is Verdict.CONTRADICTION for verdict in verdicts)
    return f"{len(verdicts)} contradictions", f"{contradictions} contradictions"


def _boundary_links(settings: Settings) -> Tuple[str, str]:
    companion = generate(_gen(GeneratorName.K))
    values = []
    for i in range(LINKING_I_MAX + 1):
        pattern = generate(_gen(GeneratorName.L, i))
        report = compute(legendrian_satellite(SpliceSpec(pattern=pattern, companion=companion)))
        values.append(report.linking[0][1])
    return f"linking 0 for i <= {LINKING_I_MAX}", f"linking {sorted(set(values))}"


def _reorientation(settings: Settings) -> Tuple[str, str]:
    result = _theorem()
    low = []
    for i in range(THEOREM_I_MAX + 1):
        band = reorientation_bound(i).constant
        node = result.graph.node(reoriented_id(i))
        bennequin = slice_bennequin(node.id, node.tb, node.rot, node.components)[1].constant
        if band != 2 * i + 1 or bennequin != 2 * i + 1 or \
                (i >= 1 and band <= result.interval(link_id(i), Quantity.G4).hi):
            low.append(i)
    return "all hold", ("all hold" if not low else f"fails for {low}")


def _replay(settings: Settings) -> Tuple[str, str]:
    result = _theorem()
    replayed = result.derivation.replay()
    mismatched = [
        node.id for node in result.graph.nodes.values()
        for quantity in Quantity
        if replayed.get((node.id, quantity), Interval()) != getattr(node, quantity.value)
    ]
    return "replay reproduces every interval", (
        "replay reproduces every interval" if not mismatched else f"differs on {mismatched}")


CHECKS: List[Check] = [
    Check("captions", "caption values of every generated diagram, i <= 30", _captions),
    Check("worked-example", "satellite of the demo pattern over the trefoil", _worked_example),
    Check("calibration", "tb-maximising right trefoil", _calibration),
    Check("composition-generators", "composition laws on generator pairs",
          _composition_generators),
    Check("composition-random", "composition laws on perturbed random pairs",
          _composition_random),
    Check("move-invariance", "tb, rot and linking under front moves", _move_invariance),
    Check("satellite-size", "L(50) over K: cusps (n + n(n-1)/2) + crossings n**2 + len(P) events in under 2 s", _satellite_size),
    Check("cables-and-clasps",
          "g4 = tau = i for P_i(K) and Q_i(K), i <= 20, from slice-Bennequin, "
          "parallel copies and crossing changes",
          _cables_and_clasps),
    Check("doubled-cable-genus", "g4(L_i(K)) = i, i <= 20, from the bands around L_i(K)",
          _doubled_cable_genus),
    Check("doubled-cable-tau", "tau(L_i(K)) = i + 1, i <= 20, two-component slice-Bennequin",
          _doubled_cable_tau),
    Check("non-splitness", "split hypothesis against tau of the cable sum", _non_splitness),
    Check("boundary-links", "linking matrix of L_i(K)", _boundary_links),
    Check("reorientation", "g4(L'_i(K)) >= 2i + 1 > g4(L_i(K)), i <= 20, band to P_{2i+2}(K)",
          _reorientation),
    Check("replay", "derivation of the theorem graph", _replay),
]


def _run(check: Check, settings: Settings) -> CheckOutcome:
    try:
        expected, computed = check.run(settings)
        status = "pass" if expected == computed else "fail"
    except Exception as error:
        logger.exception("check %s raised", check.name)
        expected, computed, status = "-", f"{type(error).__name__}: {error}", "error"
    return CheckOutcome(check=check.name, reference=check.reference,
                        expected=expected, computed=computed, status=status)


def run_checks(
    settings: Optional[Settings] = None,
    checks: Optional[List[Check]] = None
) -> List[CheckOutcome]:
    """
    Run every check on a thread pool; outcomes come back in registration
    order.
    """
    settings = settings or get_settings()
    checks = CHECKS if checks is None else checks
    with ThreadPoolExecutor(max_workers=settings.verify_workers) as executor:
        outcomes = list(executor.map(lambda check: _run(check, settings), checks))
    passed = sum(outcome.passed for outcome in outcomes)
    logger.info("verify: %d of %d checks pass", passed, len(outcomes))
    return outcomes


def to_frame(outcomes: List[CheckOutcome]) -> pd.DataFrame:
    return pd.DataFrame(
        [outcome.dict() for outcome in outcomes],
        columns=["check", "reference", "expected", "computed", "status"])
