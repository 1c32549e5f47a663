import io
import logging
import re
from enum import Enum
from typing import Dict, List, Optional, Tuple
import numpy as np
from matplotlib import rcParams
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure
from pydantic import BaseModel, PositiveFloat
from legsat.config import get_settings
from legsat.errors import ArityError, FrontSyntaxError
from legsat.front_core.event import Direction, EventKind, Shape
from legsat.front_core.front_word import FrontWord
from legsat.front_core.trace import OrientedFront
from legsat.front_core.validation import strand_counts

logger = logging.getLogger(__name__)

Segment = List[Tuple[float, float]]

_MARKS = {EventKind.LEFT_CUSP: "<", EventKind.RIGHT_CUSP: ">", EventKind.CROSSING: "X"}
_PASSING = {EventKind.LEFT_CUSP: "/", EventKind.RIGHT_CUSP: "\\", EventKind.CROSSING: "-"}
_ORIENT_LINE = re.compile(r"^orient (0|[1-9][0-9]*) ([RL])$")


class RenderFormat(str, Enum):
    SVG = "svg"
    ASCII = "ascii"


class RenderSpec(BaseModel):
    """
    How to draw a front.

    Parameters
    ----------
    format : RenderFormat, default=RenderFormat.SVG
    scale : float, default=None
        Pixels per column and per level; ``Settings.svg_scale`` if absent.
    labels : bool, default=False
        Write the event token above every column (svg).
    directions : bool, default=False
        Mark the direction of every strand at every column (svg).
    """
    format: RenderFormat = RenderFormat.SVG
    scale: Optional[PositiveFloat] = None
    labels: bool = False
    directions: bool = False


def _cusp(tip: Tuple[float, float], width: float, opening: int) -> Tuple[Segment, Segment]:
    "Lower and upper branch of a semicubical cusp opening to the right (+1) or left (-1)."
    s = np.linspace(0.0, 1.0, 9)
    x = tip[0] + opening * width * s ** 2
    lower = list(zip(x, tip[1] - 0.5 * s ** 3))
    upper = list(zip(x, tip[1] + 0.5 * s ** 3))
    return lower, upper


def render_svg(front: OrientedFront, spec: Optional[RenderSpec] = None) -> bytes:
    """
    Draw a traced front as SVG.

    Strands run between columns as straight pieces; a crossing draws the
    strand descending from level i + 1 to level i solid over a broken
    one; cusps are semicubical. Every cusp tip is an element with id
    ``cusp-<k>``, k counting cusps from the left. Annular fronts show their
    seam as dashed vertical lines.
    """
    spec = spec or RenderSpec()
    scale = spec.scale or get_settings().svg_scale
    word = front.word
    n = len(word)
    counts = strand_counts(word)
    height = max(int(counts.max()), 1)
    occupancy = front.arcs_at(range(n + 1))
    component = front.arc_component.tolist()
    colors = rcParams["axes.prop_cycle"].by_key()["color"]

    segments: Dict[int, List[Segment]] = {}
    tips: List[Tuple[float, float]] = []

    def add(arc: int, segment: Segment) -> None:
        segments.setdefault(component[arc], []).append(segment)

    for t, (kind, level) in enumerate(zip(word.kinds.tolist(), word.levels.tolist())):
        kind = EventKind(kind)
        before, after = occupancy[t], occupancy[t + 1]
        after_level = {arc: position + 1 for position, arc in enumerate(after)}
        for position, arc in enumerate(before, start=1):
            if arc not in after_level:
                continue
            if kind is EventKind.CROSSING and position == level:
                add(arc, [(t, level), (t + 0.4, level + 0.4)])
                add(arc, [(t + 0.6, level + 0.6), (t + 1, level + 1)])
            else:
                add(arc, [(t, position), (t + 1, after_level[arc])])
        if kind is EventKind.LEFT_CUSP:
            tip = (t + 0.4, level + 0.5)
            lower, upper = _cusp(tip, 0.6, 1)
            add(after[level - 1], lower)
            add(after[level], upper)
            tips.append(tip)
        elif kind is EventKind.RIGHT_CUSP:
            tip = (t + 0.6, level + 0.5)
            lower, upper = _cusp(tip, 0.6, -1)
            add(before[level - 1], lower)
            add(before[level], upper)
            tips.append(tip)

    figure = Figure(figsize=((n + 1) * scale / 72, (height + 1) * scale / 72), dpi=72)
    FigureCanvasSVG(figure)
    axes = figure.add_axes([0, 0, 1, 1])
    axes.set_axis_off()
    axes.set_xlim(-0.5, n + 0.5)
    axes.set_ylim(0.25, height + 0.75)
    for index, pieces in sorted(segments.items()):
        collection = LineCollection(pieces, colors=colors[index % len(colors)], linewidths=1.5)
        collection.set_gid(f"component-{index}")
        axes.add_collection(collection)
    for k, (x, y) in enumerate(tips):
        marker, = axes.plot([x], [y], marker="o", markersize=2, color="black")
        marker.set_gid(f"cusp-{k}")
    if word.shape is Shape.ANNULAR:
        for x in (0, n):
            axes.axvline(x, linestyle="--", color="grey", linewidth=0.8)
    if spec.labels:
        for t, event in enumerate(word.events):
            axes.text(t + 0.5, height + 0.5, str(event), ha="center", fontsize=7)
    if spec.directions:
        for t in range(n + 1):
            for position, arc in enumerate(occupancy[t], start=1):
                rightward = front.directions[arc] == Direction.RIGHTWARD
                axes.plot([t], [position], marker=">" if rightward else "<",
                          markersize=3, color="black")

    buffer = io.BytesIO()
    figure.savefig(buffer, format="svg")
    logger.info("rendered %d events, %d cusps as svg", n, len(tips))
    return buffer.getvalue()


def _header(word: FrontWord) -> str:
    return "knot" if word.shape is Shape.CLOSED else f"pattern {word.seam_strands}"


def render_ascii(word: FrontWord) -> str:
    """
    Character grid of a front word, top level first.

    Even columns show the strands present between events as ``-``; the
    column of event t shows ``<``, ``>`` or ``X`` on the two levels it acts
    on, ``-`` for strands below it and ``/`` or ``\\`` for the strands a
    cusp pushes up or pulls down. A header line and the ``orient`` lines
    of the DSL surround the grid so ``parse_ascii`` gives the word back.

    The unknot ``L1 R1`` reads::

        knot
         <->
         <->
    """
    counts = strand_counts(word).tolist()
    height = max(counts)
    kinds = word.kinds.tolist()
    levels = word.levels.tolist()
    rows = []
    for row_level in range(height, 0, -1):
        cells = ["-" if row_level <= counts[0] else " "]
        for t, (kind, level) in enumerate(zip(kinds, levels)):
            kind = EventKind(kind)
            if row_level in (level, level + 1):
                mark = _MARKS[kind]
            elif row_level < level:
                mark = "-"
            elif row_level <= max(counts[t], counts[t + 1]):
                mark = _PASSING[kind]
            else:
                mark = " "
            cells.append(mark)
            cells.append("-" if row_level <= counts[t + 1] else " ")
        rows.append("".join(cells))
    lines = [_header(word)] + rows
    lines += [f"orient {component} {Direction(direction).letter}"
              for component, direction in word.orientations]
    return "\n".join(lines) + "\n"


def parse_ascii(text: str) -> FrontWord:
    """
    Read a grid written by ``render_ascii``.

    Raises
    ------
    ArityError
        Missing or malformed header.
    FrontSyntaxError
        A column whose marks do not sit on two adjacent levels.
    """
    lines = text.splitlines()
    if not lines:
        raise ArityError("missing header 'knot' or 'pattern <s>'", 1, 1)
    header = lines[0].split()
    if header == ["knot"]:
        shape, seam = Shape.CLOSED, 0
    elif len(header) == 2 and header[0] == "pattern" and header[1].isdigit():
        shape, seam = Shape.ANNULAR, int(header[1])
    else:
        raise ArityError(f"bad header {lines[0]!r}", 1, 1)

    grid = []
    orientations = []
    for number, line in enumerate(lines[1:], start=2):
        match = _ORIENT_LINE.match(line.strip())
        if match:
            orientations.append(
                (int(match.group(1)), Direction.from_letter(match.group(2))))
        elif orientations:
            raise FrontSyntaxError("grid line after an orient line", number, 1)
        else:
            grid.append(line)

    width = max((len(row) for row in grid), default=0)
    grid = [row.ljust(width) for row in grid]
    height = len(grid)
    kinds = []
    levels = []
    for column in range(1, width, 2):
        marks = {}
        for row_index, row in enumerate(grid):
            character = row[column]
            if character in "<>X":
                marks[height - row_index] = character
            elif character not in " -/\\":
                raise FrontSyntaxError(
                    f"unexpected {character!r}", row_index + 2, column + 1)
        if not marks:
            raise FrontSyntaxError("column without event", 2, column + 1)
        level = min(marks)
        if sorted(marks) != [level, level + 1] or len(set(marks.values())) != 1:
            raise FrontSyntaxError(
                "an event marks two adjacent levels", height - level + 1, column + 1)
        mark = marks[level]
        kinds.append(int(next(kind for kind, char in _MARKS.items() if char == mark)))
        levels.append(level)
    return FrontWord(shape=shape, seam_strands=seam, kinds=kinds, levels=levels,
                     orientations=tuple(orientations))
