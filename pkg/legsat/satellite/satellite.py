import logging
from functools import lru_cache
from typing import List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, NonNegativeInt, PositiveInt
from legsat.errors import InvalidFront, NotConnected, SpliceMismatch
from legsat.front_core.event import Direction, EventKind, Shape
from legsat.front_core.front_word import FrontWord
from legsat.front_core.trace import OrientedFront, reorient, trace_components
from legsat.front_core.validation import validate
from legsat.invariants.invariants import InvariantReport, compute

logger = logging.getLogger(__name__)

_L = int(EventKind.LEFT_CUSP)
_R = int(EventKind.RIGHT_CUSP)
_X = int(EventKind.CROSSING)


@lru_cache(maxsize=64)
def _templates(n: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """
    Blocks replacing one companion event by its n vertical copies, as
    (kinds, levels relative to the bundle base), indexed by event kind.

    Copy j of every arc sits at offset j inside its bundle. Right of a
    left cusp the copies leave the tips interleaved (l1 u1 l2 u2 ...); the
    crossings then sort them into a lower and an upper bundle. The right
    cusp block mirrors it. A crossing moves the upper bundle down through
    the lower one, one copy at a time.
    """
    sorting = [2 * a + k for a in range(n - 1, 0, -1) for k in range(n - a)]
    left_levels = [2 * j - 1 for j in range(1, n + 1)] + sorting
    left_kinds = [_L] * n + [_X] * len(sorting)
    right_levels = sorting[::-1] + [2 * j - 1 for j in range(n, 0, -1)]
    right_kinds = [_X] * len(sorting) + [_R] * n
    crossing_levels = [n + k - m for k in range(1, n + 1) for m in range(1, n + 1)]
    crossing_kinds = [_X] * (n * n)

    def frozen(kinds: List[int], levels: List[int]) -> Tuple[np.ndarray, np.ndarray]:
        kinds = np.array(kinds, dtype=np.int8)
        levels = np.array(levels, dtype=np.int32)
        kinds.flags.writeable = False
        levels.flags.writeable = False
        return kinds, levels

    return (frozen(left_kinds, left_levels),
            frozen(right_kinds, right_levels),
            frozen(crossing_kinds, crossing_levels))


def block_sizes(companion: FrontWord, n: int) -> np.ndarray:
    """
    Events each companion event turns into: ``n + n(n-1)/2`` for a cusp,
    ``n**2`` for a crossing.
    """
    cusp = n + n * (n - 1) // 2
    return np.where(companion.kinds == EventKind.CROSSING, n * n, cusp).astype(np.int64)


def block_offsets(companion: FrontWord, n: int) -> np.ndarray:
    """
    Column of the copy word at which the block of companion event t starts;
    the last entry is the length of the copy word.
    """
    offsets = np.zeros(len(companion) + 1, dtype=np.int64)
    np.cumsum(block_sizes(companion, n), out=offsets[1:])
    return offsets


def parallel_copies(companion: FrontWord, n: int) -> FrontWord:
    """
    n vertical parallel copies of a closed front.

    Parameters
    ----------
    companion : FrontWord
        A valid closed word.
    n : int
        Number of copies; 1 returns the companion itself.

    Returns
    -------
    copies : FrontWord
        Closed word with ``n`` times the companion's components; its
        orientation overrides are dropped.
    """
    if companion.is_annular:
        raise InvalidFront("parallel copies are taken of closed fronts")
    report = validate(companion)
    if not report.ok:
        raise InvalidFront(f"event {report.index}: {report.reason}")
    if n < 1:
        raise SpliceMismatch(f"at least one copy is needed, got {n}")
    if n == 1:
        return companion

    templates = _templates(n)
    kinds = companion.kinds.tolist()
    sizes = block_sizes(companion, n)
    all_kinds = np.concatenate(
        [templates[kind][0] for kind in kinds] or [np.zeros(0, dtype=np.int8)])
    relative = np.concatenate(
        [templates[kind][1] for kind in kinds] or [np.zeros(0, dtype=np.int32)])
    bases = (companion.levels.astype(np.int64) - 1) * n
    levels = relative + np.repeat(bases, sizes)
    logger.info("%d copies of %d events: %d events", n, len(companion), levels.size)
    return FrontWord(kinds=all_kinds, levels=levels)


class SpliceSpec(BaseModel):
    """
    Where and what to splice for a Legendrian satellite.

    Parameters
    ----------
    pattern : FrontWord
        Annular word with ``n >= 1`` seam strands.
    companion : FrontWord
        Closed connected word.
    cut_index : int, default=None
        Column of ``parallel_copies(companion, n)`` where the pattern is
        inserted; it must be a block boundary. Defaults to the first
        admissible column.
    strand : int, default=None
        Level (in the companion) of the strand whose bundle is cut; it must
        be rightward at the cut. Defaults to the lowest rightward strand.
    """
    pattern: FrontWord
    companion: FrontWord
    cut_index: Optional[NonNegativeInt] = None
    strand: Optional[PositiveInt] = None

    class Config:
        arbitrary_types_allowed = True

    def __init__(self, **data) -> None:
        super().__init__(**data)
        if self.pattern.shape is not Shape.ANNULAR or self.pattern.seam_strands < 1:
            raise SpliceMismatch("the pattern must be annular with seam strands")
        if self.companion.shape is not Shape.CLOSED:
            raise SpliceMismatch("the companion must be closed")

    @property
    def n(self) -> int:
        return self.pattern.seam_strands


def admissible_cuts(companion: FrontWord, n: int) -> List[Tuple[int, int]]:
    """
    Every ``(cut_index, strand)`` a pattern with ``n`` seam strands can be
    spliced at: block boundaries of the copy word and rightward companion
    strands there.
    """
    front = trace_components(companion)
    offsets = block_offsets(companion, n).tolist()
    occupancy = front.arcs_at(range(len(companion) + 1))
    cuts = []
    for column in range(len(companion) + 1):
        for level, arc in enumerate(occupancy[column], start=1):
            if front.directions[arc] == Direction.RIGHTWARD:
                cuts.append((offsets[column], level))
    return cuts


def _reference_positions(pattern: OrientedFront) -> List[Tuple[int, int]]:
    "Column and level at which each pattern component's reference arc shows up."
    n = pattern.word.seam_strands
    positions = []
    for reference in pattern.references:
        if reference < n:
            positions.append((0, reference + 1))
            continue
        created = np.flatnonzero(
            (pattern.word.kinds == EventKind.LEFT_CUSP) &
            ((pattern.lower_arcs == reference) | (pattern.upper_arcs == reference)))
        event = int(created[0])
        level = int(pattern.word.levels[event])
        if pattern.upper_arcs[event] == reference:
            level += 1
        positions.append((event + 1, level))
    return positions


def legendrian_satellite(spec: SpliceSpec) -> OrientedFront:
    """
    Splice an annular pattern into the parallel copies of a companion.

    The copy bundle of a rightward companion strand is cut open at a block
    boundary and the pattern, shifted up by the bundles below, is inserted;
    pattern seam strand j meets copy j. Each component of the result is
    oriented as the pattern component it comes from.

    Parameters
    ----------
    spec : SpliceSpec

    Returns
    -------
    satellite : OrientedFront
        Closed front with as many components as the pattern.

    Raises
    ------
    NotConnected
        If the companion has more than one component.
    SpliceMismatch
        If ``cut_index`` is not a block boundary or the strand is not a
        rightward strand there.
    """
    n = spec.n
    companion_front = trace_components(spec.companion)
    if companion_front.n_components != 1:
        raise NotConnected(
            f"the companion has {companion_front.n_components} components")
    pattern_front = trace_components(spec.pattern)

    companion_report = compute(companion_front)
    if companion_report.tb != 0:
        logger.warning(
            "companion has tb %d: the result is the %d-twisted satellite",
            companion_report.tb, companion_report.tb)

    cuts = admissible_cuts(spec.companion, n)
    if spec.cut_index is None and spec.strand is None:
        cut_index, strand = cuts[0]
    elif spec.cut_index is None:
        matching = [cut for cut in cuts if cut[1] == spec.strand]
        if not matching:
            raise SpliceMismatch(f"strand {spec.strand} is never rightward")
        cut_index, strand = matching[0]
    else:
        at_cut = [level for index, level in cuts if index == spec.cut_index]
        if not at_cut:
            raise SpliceMismatch(
                f"column {spec.cut_index} is not a block boundary with a "
                f"rightward bundle")
        strand = spec.strand if spec.strand is not None else at_cut[0]
        if strand not in at_cut:
            raise SpliceMismatch(
                f"strand {strand} is not rightward at column {spec.cut_index}")
        cut_index = spec.cut_index

    copies = parallel_copies(spec.companion, n)
    shift = (strand - 1) * n
    kinds = np.concatenate([
        copies.kinds[:cut_index], spec.pattern.kinds, copies.kinds[cut_index:]])
    levels = np.concatenate([
        copies.levels[:cut_index],
        spec.pattern.levels.astype(np.int64) + shift,
        copies.levels[cut_index:]])
    raw = trace_components(FrontWord(kinds=kinds, levels=levels))

    positions = _reference_positions(pattern_front)
    occupancy = raw.arcs_at(cut_index + column for column, _ in positions)
    orientations = []
    for component, (column, level) in enumerate(positions):
        arc = occupancy[cut_index + column][shift + level - 1]
        wanted = pattern_front.component_direction(component)
        if raw.directions[arc] != wanted:
            orientations.append((int(raw.arc_component[arc]), Direction.LEFTWARD))

    satellite = reorient(raw, sorted(orientations))
    logger.info("satellite of %d events with %d components, cut at %d on strand %d",
                len(satellite.word), satellite.n_components, cut_index, strand)
    return satellite


class PredictedInvariants(BaseModel):
    """
    Invariants of a satellite given by the composition laws.

    Parameters
    ----------
    tb : int
        ``w(P)**2 * tb(K) + tb(P)``.
    rot : int
        ``w(P) * rot(K) + rot(P)``.
    components : int
        Components of the pattern.
    """
    tb: int
    rot: int
    components: PositiveInt


def predicted_invariants(
    pattern_report: InvariantReport,
    companion_report: InvariantReport
) -> PredictedInvariants:
    if pattern_report.winding is None:
        raise ValueError("the pattern report has no winding number")
    w = pattern_report.winding
    return PredictedInvariants(
        tb=w * w * companion_report.knot_tb() + pattern_report.tb,
        rot=w * companion_report.knot_rot() + pattern_report.rot,
        components=pattern_report.components)


class CompositionReport(BaseModel):
    """
    Both sides of the composition laws for one satellite.

    Parameters
    ----------
    winding : int
        Winding number of the pattern.
    tb_direct, rot_direct, components_direct : int
        Computed on the spliced front.
    tb_formula, rot_formula, components_formula : int
        Predicted from pattern and companion invariants.
    """
    winding: int
    tb_direct: int
    tb_formula: int
    rot_direct: int
    rot_formula: int
    components_direct: int
    components_formula: int

    @property
    def holds(self) -> bool:
        return (
            self.tb_direct == self.tb_formula and
            self.rot_direct == self.rot_formula and
            self.components_direct == self.components_formula
        )


def check_composition(
    pattern: FrontWord,
    companion: FrontWord,
    cut_index: Optional[int] = None,
    strand: Optional[int] = None
) -> CompositionReport:
    """
    Compare the invariants of the spliced front with the composition laws.
    For multi-component patterns both sides are diagram totals.
    """
    spec = SpliceSpec(
        pattern=pattern, companion=companion, cut_index=cut_index, strand=strand)
    direct = compute(legendrian_satellite(spec))
    pattern_report = compute(trace_components(pattern))
    predicted = predicted_invariants(
        pattern_report, compute(trace_components(companion)))
    report = CompositionReport(
        winding=pattern_report.winding,
        tb_direct=direct.tb,
        tb_formula=predicted.tb,
        rot_direct=direct.rot,
        rot_formula=predicted.rot,
        components_direct=direct.components,
        components_formula=predicted.components)
    if not report.holds:
        logger.warning("composition laws fail: %s", report)
    return report
