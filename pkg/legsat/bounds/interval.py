from typing import Optional
from pydantic import BaseModel


def _add(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None or b is None:
        return None
    return a + b


class Interval(BaseModel):
    """
    Integer interval ``[lo, hi]``; ``None`` stands for an infinite end.

    An interval with ``lo > hi`` is empty: it is kept, not rejected, since
    an empty interval is how a contradictory bound graph shows up.

    Parameters
    ----------
    lo : int, default=None
        Lower end, ``None`` for minus infinity.
    hi : int, default=None
        Upper end, ``None`` for plus infinity.

    Examples
    --------
    >>> Interval(lo=3, hi=3) + Interval(lo=4, hi=4)
    Interval(lo=7, hi=7)
    """
    lo: Optional[int] = None
    hi: Optional[int] = None

    class Config:
        allow_mutation = False

    @classmethod
    def exact(cls, value: int) -> "Interval":
        return cls(lo=value, hi=value)

    @property
    def is_empty(self) -> bool:
        return self.lo is not None and self.hi is not None and self.lo > self.hi

    @property
    def is_exact(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(lo=_add(self.lo, other.lo), hi=_add(self.hi, other.hi))

    def __neg__(self) -> "Interval":
        return Interval(
            lo=None if self.hi is None else -self.hi,
            hi=None if self.lo is None else -self.lo)

    def meet(self, other: "Interval") -> "Interval":
        "Intersection; may be empty."
        lo = self.lo if other.lo is None else (
            other.lo if self.lo is None else max(self.lo, other.lo))
        hi = self.hi if other.hi is None else (
            other.hi if self.hi is None else min(self.hi, other.hi))
        return Interval(lo=lo, hi=hi)

    def __contains__(self, value: int) -> bool:
        return (self.lo is None or self.lo <= value) and \
            (self.hi is None or value <= self.hi)

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"
