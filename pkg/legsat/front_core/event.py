from enum import Enum, IntEnum
from pydantic import BaseModel, PositiveInt


class EventKind(IntEnum):
    """
    Elementary slice of a generic front, stored as the int8 code used in
    ``FrontWord.kinds``.
    """
    LEFT_CUSP = 0
    RIGHT_CUSP = 1
    CROSSING = 2

    @property
    def letter(self) -> str:
        return "LRX"[self.value]

    @classmethod
    def from_letter(cls, letter: str) -> "EventKind":
        return cls("LRX".index(letter))


class Direction(IntEnum):
    "x-direction of an oriented strand."
    RIGHTWARD = 1
    LEFTWARD = -1

    @property
    def letter(self) -> str:
        return "R" if self is Direction.RIGHTWARD else "L"

    @classmethod
    def from_letter(cls, letter: str) -> "Direction":
        return cls.RIGHTWARD if letter == "R" else cls.LEFTWARD

    def __neg__(self) -> "Direction":
        return Direction(-self.value)


class Shape(str, Enum):
    "A closed front lives in the plane, an annular one in [0, 1] x R with identified edges."
    CLOSED = "closed"
    ANNULAR = "annular"


class Event(BaseModel):
    """
    One column of a front word.

    Parameters
    ----------
    kind : EventKind
        LeftCusp inserts two strands at levels ``level``, ``level + 1``;
        RightCusp joins the strands at those levels; Crossing transposes
        them.
    level : int
        1-based strand position, counted from the bottom.
    """
    kind: EventKind
    level: PositiveInt

    class Config:
        allow_mutation = False

    def __str__(self) -> str:
        return f"{self.kind.letter}{self.level}"

    @classmethod
    def from_token(cls, token: str) -> "Event":
        return cls(kind=EventKind.from_letter(token[0]), level=int(token[1:]))


def L(level: int) -> Event:
    return Event(kind=EventKind.LEFT_CUSP, level=level)


def R(level: int) -> Event:
    return Event(kind=EventKind.RIGHT_CUSP, level=level)


def X(level: int) -> Event:
    return Event(kind=EventKind.CROSSING, level=level)
