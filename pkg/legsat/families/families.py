import logging
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional
import pandas as pd
from pydantic import BaseModel, NonNegativeInt
from legsat.errors import IndexOutOfRange
from legsat.front_core.event import Direction, L, R, X
from legsat.front_core.front_word import FrontWord
from legsat.front_core.trace import trace_components
from legsat.invariants.invariants import InvariantReport, compute
from legsat.satellite.satellite import SpliceSpec, legendrian_satellite

logger = logging.getLogger(__name__)


class GeneratorName(str, Enum):
    UNKNOT = "unknot"
    TREFOIL = "trefoil"
    DEMO = "demo"
    W = "W"
    J = "J"
    K = "K"
    P = "P"
    Q = "Q"
    L = "L"
    LPRIME = "Lprime"


# smallest admissible index of the indexed families
_MIN_INDEX = {
    GeneratorName.P: 1,
    GeneratorName.Q: 1,
    GeneratorName.L: 0,
    GeneratorName.LPRIME: 0,
}


class GeneratorId(BaseModel):
    """
    Name of a generated diagram.

    Parameters
    ----------
    name : GeneratorName
        Family or fixed diagram.
    index : int, default=None
        Family index; required for P, Q (>= 1) and L, Lprime (>= 0),
        forbidden otherwise.

    Examples
    --------
    >>> GeneratorId.parse("Q(3)")
    GeneratorId(name=<GeneratorName.Q: 'Q'>, index=3)
    """
    name: GeneratorName
    index: Optional[NonNegativeInt] = None

    class Config:
        allow_mutation = False

    def check(self) -> "GeneratorId":
        """
        Raise IndexOutOfRange unless the index suits the family.
        """
        if self.name in _MIN_INDEX:
            smallest = _MIN_INDEX[self.name]
            if self.index is None or self.index < smallest:
                raise IndexOutOfRange(
                    f"{self.name.value} needs an index >= {smallest}, got {self.index}")
        elif self.index is not None:
            raise IndexOutOfRange(f"{self.name.value} takes no index")
        return self

    @classmethod
    def parse(cls, text: str) -> "GeneratorId":
        "Read ``name`` or ``name(i)``."
        text = text.strip()
        if text.endswith(")") and "(" in text:
            name, index = text[:-1].split("(", 1)
            return cls(name=name, index=int(index)).check()
        return cls(name=text).check()

    def __str__(self) -> str:
        if self.index is None:
            return self.name.value
        return f"{self.name.value}({self.index})"


def unknot() -> FrontWord:
    """
    ::

        /\\
        \\/
    """
    return FrontWord.closed([L(1), R(1)], [(0, Direction.RIGHTWARD)])


def trefoil() -> FrontWord:
    """
    Right-handed trefoil with maximal tb: two left cusps, three crossings
    between the middle strands, two right cusps.
    """
    return FrontWord.closed(
        [L(1), L(3), X(2), X(2), X(2), R(1), R(1)], [(0, Direction.RIGHTWARD)])


def demo() -> FrontWord:
    """
    Three seam strands: a crossing between the lower two and a clasp
    between the upper two (tb 2, rot 0, winding 1).
    """
    return FrontWord.annular(
        3, [X(1), L(3), X(2), X(4), R(3)], [(0, Direction.RIGHTWARD)])


def clasp(p: int) -> list:
    """
    Clasp between a rightward strand at level ``p`` and a leftward strand
    at ``p + 1``: two positive crossings and a cusp pair, tb +1.
    """
    return [L(p + 1), X(p), X(p + 2), R(p + 1)]


def whitehead() -> FrontWord:
    """
    Whitehead pattern: a down zigzag on the lower seam strand, then a
    clasp with the upper one (tb 0, rot 1, winding 0).
    """
    return FrontWord.annular(
        2, [L(1), R(2)] + clasp(1), [(0, Direction.RIGHTWARD)])


def companion_j() -> FrontWord:
    """
    The trefoil with a down zigzag on its lowest strand (tb 0, rot 1).
    """
    return FrontWord.closed(
        [L(1), L(1), R(2), L(3), X(2), X(2), X(2), R(1), R(1)],
        [(0, Direction.RIGHTWARD)])


@lru_cache(maxsize=1)
def companion_k() -> FrontWord:
    "Whitehead pattern over J; tb 0, rot 1."
    return legendrian_satellite(
        SpliceSpec(pattern=whitehead(), companion=companion_j())).word


def cable(i: int) -> FrontWord:
    """
    i seam strands, each moving one level down while the lowest climbs to
    the top: the (i, 1) cable pattern (tb i - 1, rot 0, winding i).
    """
    return FrontWord.annular(
        i, [X(level) for level in range(1, i)], [(0, Direction.RIGHTWARD)])


def clasped(i: int) -> FrontWord:
    """
    Two (i, 1) cables of opposite orientation on 2i seam strands, joined by
    one clasp (tb 2i - 1, rot 0, winding 0, one component).
    """
    bottom = [X(level) for level in range(1, i)]
    top = [X(level) for level in range(i + 1, 2 * i)]
    return FrontWord.annular(
        2 * i, bottom + top + clasp(i), [(0, Direction.RIGHTWARD)])


def doubled_cable(i: int, reverse_top: bool = True) -> FrontWord:
    """
    The (i + 1, 1) cable of each of two parallel seam circles. With
    ``reverse_top`` the upper cable runs leftward (tb 2i, rot 0, winding 0);
    without it both run rightward (winding 2i + 2).
    """
    bottom = [X(level) for level in range(1, i + 1)]
    top = [X(level) for level in range(i + 2, 2 * i + 2)]
    orientations = [(0, Direction.RIGHTWARD)]
    orientations.append(
        (1, Direction.LEFTWARD if reverse_top else Direction.RIGHTWARD))
    return FrontWord.annular(2 * i + 2, bottom + top, orientations)


_FIXED: Dict[GeneratorName, Callable[[], FrontWord]] = {
    GeneratorName.UNKNOT: unknot,
    GeneratorName.TREFOIL: trefoil,
    GeneratorName.DEMO: demo,
    GeneratorName.W: whitehead,
    GeneratorName.J: companion_j,
    GeneratorName.K: companion_k,
}

_INDEXED: Dict[GeneratorName, Callable[[int], FrontWord]] = {
    GeneratorName.P: cable,
    GeneratorName.Q: clasped,
    GeneratorName.L: doubled_cable,
    GeneratorName.LPRIME: lambda i: doubled_cable(i, reverse_top=False),
}


def generate(generator: GeneratorId) -> FrontWord:
    """
    Front word of a named diagram, with orientation overrides set.

    Parameters
    ----------
    generator : GeneratorId

    Returns
    -------
    word : FrontWord
        Closed for unknot, trefoil, J and K; annular otherwise.
    """
    generator.check()
    if generator.name in _FIXED:
        return _FIXED[generator.name]()
    return _INDEXED[generator.name](generator.index)


def expected_invariants(generator: GeneratorId) -> Dict[str, Optional[int]]:
    """
    Caption values of a generated diagram: tb, rot, winding (None when
    closed) and components.
    """
    generator.check()
    i = generator.index
    table = {
        GeneratorName.UNKNOT: (-1, 0, None, 1),
        GeneratorName.TREFOIL: (1, 0, None, 1),
        GeneratorName.DEMO: (2, 0, 1, 1),
        GeneratorName.W: (0, 1, 0, 1),
        GeneratorName.J: (0, 1, None, 1),
        GeneratorName.K: (0, 1, None, 1),
    }
    if generator.name in table:
        values = table[generator.name]
    elif generator.name is GeneratorName.P:
        values = (i - 1, 0, i, 1)
    elif generator.name is GeneratorName.Q:
        values = (2 * i - 1, 0, 0, 1)
    elif generator.name is GeneratorName.L:
        values = (2 * i, 0, 0, 2)
    else:
        values = (2 * i, 0, 2 * i + 2, 2)
    return dict(zip(("tb", "rot", "winding", "components"), values))


class CertificationReport(BaseModel):
    """
    Computed invariants of a generated diagram against its caption values.

    Parameters
    ----------
    generator : str
        Printed generator id, e.g. ``"Q(3)"``.
    rows : list of dict
        One ``{"invariant", "expected", "computed"}`` row per invariant.
    """
    generator: str
    rows: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return all(row["expected"] == row["computed"] for row in self.rows)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows, columns=["invariant", "expected", "computed"])
        frame.insert(0, "generator", self.generator)
        return frame


def certify(generator: GeneratorId) -> CertificationReport:
    """
    Compare the invariants of ``generate(generator)`` with the caption
    table.
    """
    report: InvariantReport = compute(trace_components(generate(generator)))
    expected = expected_invariants(generator)
    rows = [
        {"invariant": name, "expected": value, "computed": getattr(report, name)}
        for name, value in expected.items()
    ]
    certification = CertificationReport(generator=str(generator), rows=rows)
    if not certification.passed:
        logger.warning("%s does not match its caption values", generator)
    return certification


def certify_all(i_max: int = 30) -> List[CertificationReport]:
    """
    Certify the fixed diagrams and every family member up to ``i_max``.
    """
    generators = [GeneratorId(name=name) for name in _FIXED]
    for name, smallest in _MIN_INDEX.items():
        generators += [GeneratorId(name=name, index=i)
                       for i in range(smallest, i_max + 1)]
    return [certify(generator) for generator in generators]
