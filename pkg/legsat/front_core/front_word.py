from typing import Iterable, List, Tuple
import numpy as np
from pydantic import BaseModel, NonNegativeInt, root_validator, validator
from legsat.front_core.event import Direction, Event, EventKind, Shape


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


class FrontWord(BaseModel):
    """
    Event-word encoding of a front projection: a sequence of columns, each
    holding one elementary event acting on tracked horizontal strand
    levels.

    Parameters
    ----------
    shape : Shape
        ``closed`` for a front in the plane, ``annular`` for a pattern front
        whose right edge is identified with its left edge.
    seam_strands : int, default=0
        Strands crossing the seam of an annular front; they occupy levels
        ``1..seam_strands`` at both edges. Must be 0 for closed fronts.
    kinds : numpy.ndarray
        int8 codes of ``EventKind``, one per column.
    levels : numpy.ndarray
        int32 1-based levels, one per column.
    orientations : tuple of (int, Direction), default=()
        Overrides ``(component_index, direction)``: the reference strand of
        the component (its first appearance) gets ``direction``. Later
        entries win over earlier ones.

    Examples
    --------
    >>> FrontWord.closed([L(1), R(1)])
    FrontWord(knot: L1 R1)
    """
    shape: Shape = Shape.CLOSED
    seam_strands: NonNegativeInt = 0
    kinds: np.ndarray
    levels: np.ndarray
    orientations: Tuple[Tuple[NonNegativeInt, Direction], ...] = ()

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False
        json_encoders = {np.ndarray: lambda array: array.tolist()}

    @validator("kinds", pre=True)
    def _coerce_kinds(cls, value) -> np.ndarray:
        kinds = np.array(value, dtype=np.int8).reshape(-1)
        if kinds.size and (kinds.min() < 0 or kinds.max() > 2):
            raise ValueError("event kinds must be 0 (L), 1 (R) or 2 (X)")
        return _frozen(kinds)

    @validator("levels", pre=True)
    def _coerce_levels(cls, value) -> np.ndarray:
        levels = np.array(value, dtype=np.int32).reshape(-1)
        if levels.size and levels.min() < 1:
            raise ValueError("event levels are 1-based")
        return _frozen(levels)

    @root_validator(skip_on_failure=True)
    def _check_shape(cls, values):
        if values["kinds"].shape != values["levels"].shape:
            raise ValueError("kinds and levels must have the same length")
        if values["shape"] is Shape.CLOSED and values["seam_strands"] != 0:
            raise ValueError("a closed front has no seam strands")
        return values

    @classmethod
    def from_events(
        cls,
        events: Iterable[Event],
        shape: Shape = Shape.CLOSED,
        seam_strands: int = 0,
        orientations: Iterable[Tuple[int, Direction]] = ()
    ) -> "FrontWord":
        events = list(events)
        return cls(
            shape=shape,
            seam_strands=seam_strands,
            kinds=[int(event.kind) for event in events],
            levels=[event.level for event in events],
            orientations=tuple(orientations))

    @classmethod
    def closed(
        cls,
        events: Iterable[Event],
        orientations: Iterable[Tuple[int, Direction]] = ()
    ) -> "FrontWord":
        return cls.from_events(events, orientations=orientations)

    @classmethod
    def annular(
        cls,
        seam_strands: int,
        events: Iterable[Event],
        orientations: Iterable[Tuple[int, Direction]] = ()
    ) -> "FrontWord":
        return cls.from_events(
            events, Shape.ANNULAR, seam_strands, orientations)

    @property
    def is_annular(self) -> bool:
        return self.shape is Shape.ANNULAR

    @property
    def initial_strands(self) -> int:
        "Strand count at the left edge (and, for a valid word, at the right edge)."
        return self.seam_strands

    @property
    def events(self) -> List[Event]:
        return [Event(kind=EventKind(kind), level=level)
                for kind, level in zip(self.kinds.tolist(), self.levels.tolist())]

    def with_orientations(
        self,
        orientations: Iterable[Tuple[int, Direction]]
    ) -> "FrontWord":
        return self.copy(update={"orientations": tuple(orientations)})

    def with_events(self, kinds: np.ndarray, levels: np.ndarray) -> "FrontWord":
        "Same shape and overrides, new columns."
        return FrontWord(
            shape=self.shape,
            seam_strands=self.seam_strands,
            kinds=kinds,
            levels=levels,
            orientations=self.orientations)

    def __len__(self) -> int:
        return int(self.kinds.size)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FrontWord) and
            self.shape == other.shape and
            self.seam_strands == other.seam_strands and
            np.array_equal(self.kinds, other.kinds) and
            np.array_equal(self.levels, other.levels) and
            self.orientations == other.orientations
        )

    def __repr__(self) -> str:
        header = ("knot" if self.shape is Shape.CLOSED
                  else f"pattern {self.seam_strands}")
        body = " ".join(str(event) for event in self.events[:12])
        if len(self) > 12:
            body += f" ... ({len(self)} events)"
        return f"FrontWord({header}: {body})"

    __str__ = __repr__
