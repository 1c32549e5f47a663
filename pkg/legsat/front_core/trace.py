import logging
from typing import Dict, Iterable, List, Optional, Tuple
import numpy as np
from pydantic import BaseModel
from legsat.errors import InvalidFront, OverrideOutOfRange
from legsat.front_core.event import Direction, EventKind
from legsat.front_core.front_word import FrontWord
from legsat.front_core.validation import validate

logger = logging.getLogger(__name__)

_LEFT = int(EventKind.LEFT_CUSP)
_CROSSING = int(EventKind.CROSSING)


class OrientedFront(BaseModel):
    """
    A front word together with the orientation of every strand.

    Strands are arcs: maximal pieces of the front between cusps or word
    edges. Arc ids follow creation order, so the left-edge arcs are
    ``0..seam_strands - 1`` (by level) and every LeftCusp adds its lower
    then its upper arc. The smallest arc of a component is its reference
    strand.

    Parameters
    ----------
    word : FrontWord
        The traced word.
    directions : numpy.ndarray
        int8 direction (+1 rightward, -1 leftward) per arc.
    arc_component : numpy.ndarray
        Component index per arc.
    components : tuple of tuple of int
        Cyclic arc sequence of every component, in traversal order.
    lower_arcs : numpy.ndarray
        Per event, the arc at ``level`` (after the event for a LeftCusp,
        before it otherwise).
    upper_arcs : numpy.ndarray
        Per event, the arc at ``level + 1`` with the same convention.
    left_edge : numpy.ndarray
        Arcs at levels ``1..seam_strands`` on the left edge.
    right_edge : numpy.ndarray
        Arcs at levels ``1..seam_strands`` on the right edge.
    """
    word: FrontWord
    directions: np.ndarray
    arc_component: np.ndarray
    components: Tuple[Tuple[int, ...], ...]
    lower_arcs: np.ndarray
    upper_arcs: np.ndarray
    left_edge: np.ndarray
    right_edge: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def references(self) -> Tuple[int, ...]:
        return tuple(min(cycle) for cycle in self.components)

    @property
    def strand_directions(self) -> Dict[int, Direction]:
        return {arc: Direction(int(d)) for arc, d in enumerate(self.directions)}

    @property
    def winding(self) -> Optional[int]:
        "Signed count of seam strands; absent for closed fronts."
        if not self.word.is_annular:
            return None
        return int(self.directions[self.left_edge].sum())

    def component_direction(self, component: int) -> Direction:
        "Direction of the component's reference strand."
        return Direction(int(self.directions[self.references[component]]))

    def arcs_at(self, columns: Iterable[int]) -> Dict[int, List[int]]:
        """
        Strand occupancy at the requested word columns.

        Parameters
        ----------
        columns : iterable of int
            Column t is the vertical line just before event t; column
            ``len(word)`` is the right edge.

        Returns
        -------
        occupancy : dict
            ``{column: [arc at level 1, arc at level 2, ...]}``.
        """
        wanted = sorted(set(columns))
        occupancy = {}
        config = self.left_edge.tolist()
        kinds = self.word.kinds.tolist()
        levels = self.word.levels.tolist()
        lower = self.lower_arcs.tolist()
        upper = self.upper_arcs.tolist()
        position = 0
        for column in wanted:
            while position < column:
                p = levels[position] - 1
                kind = kinds[position]
                if kind == _CROSSING:
                    config[p], config[p + 1] = config[p + 1], config[p]
                elif kind == _LEFT:
                    config[p:p] = (lower[position], upper[position])
                else:
                    del config[p:p + 2]
                position += 1
            occupancy[column] = list(config)
        return occupancy

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OrientedFront) and
            self.word == other.word and
            np.array_equal(self.directions, other.directions)
        )


def _arcs(word: FrontWord):
    """
    Replay the word creating arcs; return per-event arcs, edge arcs and the
    end-to-end gluing of arcs through cusps and the seam.
    """
    s0 = word.initial_strands
    kinds = word.kinds.tolist()
    levels = word.levels.tolist()
    n_arcs = s0 + 2 * kinds.count(_LEFT)
    left_partner = [-1] * n_arcs
    right_partner = [-1] * n_arcs
    left_seam = [False] * n_arcs
    right_seam = [False] * n_arcs
    lower = [0] * len(kinds)
    upper = [0] * len(kinds)
    config = list(range(s0))
    next_arc = s0
    for e, (kind, level) in enumerate(zip(kinds, levels)):
        p = level - 1
        if kind == _CROSSING:
            a = config[p]
            b = config[p + 1]
            config[p] = b
            config[p + 1] = a
        elif kind == _LEFT:
            a = next_arc
            b = next_arc + 1
            next_arc += 2
            config[p:p] = (a, b)
            left_partner[a] = b
            left_partner[b] = a
        else:
            a = config[p]
            b = config[p + 1]
            del config[p:p + 2]
            right_partner[a] = b
            right_partner[b] = a
        lower[e] = a
        upper[e] = b
    for left, right in zip(range(s0), config):
        right_partner[right] = left
        right_seam[right] = True
        left_partner[left] = right
        left_seam[left] = True
    return (lower, upper, list(range(s0)), config,
            left_partner, right_partner, left_seam, right_seam)


def trace_components(word: FrontWord) -> OrientedFront:
    """
    Follow strands through cusps and the seam, split the front into
    components and orient them.

    Each component is first oriented so that its reference strand (the
    one appearing first, by event index then level) is rightward; the
    word's overrides are applied afterwards.

    Parameters
    ----------
    word : FrontWord
        A word for which ``validate`` is ok.

    Returns
    -------
    front : OrientedFront

    Raises
    ------
    InvalidFront
        If the word does not replay.
    OverrideOutOfRange
        If an override names a component that does not exist.
    """
    report = validate(word)
    if not report.ok:
        raise InvalidFront(
            f"event {report.index}: {report.reason}")
    (lower, upper, left_edge, right_edge,
     left_partner, right_partner, left_seam, right_seam) = _arcs(word)

    n_arcs = len(left_partner)
    directions = [0] * n_arcs
    arc_component = [-1] * n_arcs
    components = []
    for start in range(n_arcs):
        if arc_component[start] >= 0:
            continue
        index = len(components)
        cycle = []
        arc, direction = start, 1
        while True:
            arc_component[arc] = index
            directions[arc] = direction
            cycle.append(arc)
            if direction > 0:
                arc, via_seam = right_partner[arc], right_seam[arc]
            else:
                arc, via_seam = left_partner[arc], left_seam[arc]
            direction = direction if via_seam else -direction
            if arc == start:
                break
        components.append(cycle)

    directions = np.array(directions, dtype=np.int8)
    directions.flags.writeable = False
    front = OrientedFront(
        word=word.with_orientations(()),
        directions=directions,
        arc_component=np.array(arc_component, dtype=np.int32),
        components=tuple(tuple(cycle) for cycle in components),
        lower_arcs=np.array(lower, dtype=np.int32),
        upper_arcs=np.array(upper, dtype=np.int32),
        left_edge=np.array(left_edge, dtype=np.int32),
        right_edge=np.array(right_edge, dtype=np.int32))
    logger.debug("traced %d events into %d components",
                 len(word), len(components))
    return reorient(front, word.orientations)


def reorient(
    front: OrientedFront,
    orientations: Iterable[Tuple[int, Direction]]
) -> OrientedFront:
    """
    Same front with new orientation overrides, without tracing again.

    Every component whose reference strand is not yet pointing as its
    override (default rightward) asks is reversed as a whole.

    Raises
    ------
    OverrideOutOfRange
        If an override names a component that does not exist.
    """
    orientations = tuple(orientations)
    wanted = {}
    for component, direction in orientations:
        if not 0 <= component < front.n_components:
            raise OverrideOutOfRange(
                f"override for component {component}, "
                f"front has {front.n_components}")
        wanted[component] = Direction(direction)

    directions = front.directions.copy()
    components = list(front.components)
    for component, reference in enumerate(front.references):
        if directions[reference] != wanted.get(component, Direction.RIGHTWARD):
            directions[front.arc_component == component] *= -1
            cycle = components[component]
            components[component] = (cycle[0],) + cycle[:0:-1]
    directions.flags.writeable = False
    return front.copy(update={
        "word": front.word.with_orientations(orientations),
        "directions": directions,
        "components": tuple(components)})


def reverse_component(front: OrientedFront, component: int) -> OrientedFront:
    """
    The same front with one component's orientation reversed; every other
    strand keeps its direction.
    """
    if not 0 <= component < front.n_components:
        raise OverrideOutOfRange(
            f"component {component} of {front.n_components}")
    orientations = [(c, front.component_direction(c))
                    for c in range(front.n_components)]
    orientations[component] = (component, -orientations[component][1])
    return reorient(front, orientations)
