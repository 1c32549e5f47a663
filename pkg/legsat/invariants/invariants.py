import logging
from typing import List, Optional
import numpy as np
from pydantic import BaseModel, NonNegativeInt, validate_arguments
from legsat.errors import NotConnected
from legsat.front_core.event import Direction, EventKind
from legsat.front_core.front_word import FrontWord
from legsat.front_core.trace import OrientedFront, trace_components

logger = logging.getLogger(__name__)


@validate_arguments
def crossing_sign(over_dir: Direction, under_dir: Direction) -> int:
    """
    Sign of a front crossing given the directions of its two strands.

    The over strand is the one descending from level i + 1 to level i.
    Rotating the crossing by 45 degrees gives a standard smooth crossing
    whose sign is +1 exactly when both strands point the same way in x.

    Examples
    --------
    >>> crossing_sign(Direction.RIGHTWARD, Direction.LEFTWARD)
    -1
    """
    return 1 if over_dir == under_dir else -1


class InvariantReport(BaseModel):
    """
    Classical invariants of an oriented front.

    Parameters
    ----------
    writhe : int
        Sum of crossing signs.
    cusps_total : int
        Number of cusps.
    cusps_down : int
        Cusps traversed downward.
    cusps_up : int
        Cusps traversed upward.
    tb : int
        Thurston-Bennequin number of the whole diagram,
        ``writhe - cusps_total / 2``.
    rot : int
        Rotation number of the whole diagram,
        ``(cusps_down - cusps_up) / 2``.
    winding : int, default=None
        Signed count of seam strands; absent for closed fronts.
    components : int
        Number of components.
    linking : list of list of int
        Symmetric linking matrix with zero diagonal.
    component_tb : list of int
        tb of every component on its own (self crossings and own cusps).
    component_rot : list of int
        rot of every component on its own.
    """
    writhe: int
    cusps_total: NonNegativeInt
    cusps_down: NonNegativeInt
    cusps_up: NonNegativeInt
    tb: int
    rot: int
    winding: Optional[int] = None
    components: NonNegativeInt
    linking: List[List[int]]
    component_tb: List[int]
    component_rot: List[int]

    def knot_tb(self) -> int:
        "tb of a connected front."
        if self.components != 1:
            raise NotConnected(
                f"tb of a knot requested for {self.components} components")
        return self.tb

    def knot_rot(self) -> int:
        "rot of a connected front."
        if self.components != 1:
            raise NotConnected(
                f"rot of a knot requested for {self.components} components")
        return self.rot

    def as_text(self) -> str:
        """
        Line-oriented rendering, one ``name value`` pair per line.
        """
        lines = [
            f"writhe {self.writhe}",
            f"cusps_down {self.cusps_down}",
            f"cusps_up {self.cusps_up}",
            f"tb {self.tb}",
            f"rot {self.rot}",
            f"winding {'-' if self.winding is None else self.winding}",
            f"components {self.components}",
        ]
        for row in self.linking:
            lines.append("linking " + " ".join(str(value) for value in row))
        return "\n".join(lines) + "\n"


def compute(front: OrientedFront) -> InvariantReport:
    """
    Compute writhe, cusp counts, tb, rot, winding and linking numbers.

    A LeftCusp is traversed downward iff its lower strand is rightward; a
    RightCusp iff its upper (incoming) strand is rightward.

    Parameters
    ----------
    front : OrientedFront
        Output of ``trace_components``.

    Returns
    -------
    report : InvariantReport
    """
    word = front.word
    directions = front.directions.astype(np.int64)
    component = front.arc_component
    n = front.n_components

    crossings = word.kinds == EventKind.CROSSING
    under = front.lower_arcs[crossings]
    over = front.upper_arcs[crossings]
    signs = directions[over] * directions[under]
    over_component = component[over]
    under_component = component[under]

    self_crossing = over_component == under_component
    self_writhe = np.bincount(
        over_component[self_crossing], weights=signs[self_crossing],
        minlength=n).astype(np.int64)

    linking = np.zeros((n, n), dtype=np.int64)
    mixed = ~self_crossing
    np.add.at(linking, (over_component[mixed], under_component[mixed]), signs[mixed])
    linking = linking + linking.T
    linking //= 2

    left = word.kinds == EventKind.LEFT_CUSP
    right = word.kinds == EventKind.RIGHT_CUSP
    cusp_arcs = np.concatenate([front.lower_arcs[left], front.upper_arcs[right]])
    down = directions[cusp_arcs] == Direction.RIGHTWARD
    cusp_component = component[cusp_arcs]
    cusps_per_component = np.bincount(cusp_component, minlength=n)
    down_per_component = np.bincount(cusp_component[down], minlength=n)
    up_per_component = cusps_per_component - down_per_component

    writhe = int(signs.sum())
    cusps_total = int(cusp_arcs.size)
    cusps_down = int(down.sum())
    cusps_up = cusps_total - cusps_down

    report = InvariantReport(
        writhe=writhe,
        cusps_total=cusps_total,
        cusps_down=cusps_down,
        cusps_up=cusps_up,
        tb=writhe - cusps_total // 2,
        rot=(cusps_down - cusps_up) // 2,
        winding=front.winding,
        components=n,
        linking=linking.tolist(),
        component_tb=(self_writhe - cusps_per_component // 2).tolist(),
        component_rot=((down_per_component - up_per_component) // 2).tolist())
    logger.debug("invariants of %d events: tb %d, rot %d",
                 len(word), report.tb, report.rot)
    return report


def invariants_of(word: FrontWord) -> InvariantReport:
    "Trace ``word`` and compute its report."
    return compute(trace_components(word))
