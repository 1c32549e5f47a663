from typing import Optional
import numpy as np
from pydantic import BaseModel, NonNegativeInt
from legsat.front_core.event import EventKind
from legsat.front_core.front_word import FrontWord


class ValidationReport(BaseModel):
    """
    Outcome of replaying a front word.

    Parameters
    ----------
    ok : bool
        True if every event meets its precondition and the strand count
        returns to its initial value.
    index : int, default=None
        Index of the first violating event; ``len(word)`` when only the
        final strand count is wrong.
    reason : str, default=None
        Short description of the violation.
    """
    ok: bool
    index: Optional[NonNegativeInt] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def strand_counts(word: FrontWord) -> np.ndarray:
    """
    Strand count in front of every column plus the final count.

    Returns
    -------
    counts : numpy.ndarray
        Array of length ``len(word) + 1``; ``counts[t]`` is the number of
        strands just before event ``t``.
    """
    delta = np.zeros(len(word), dtype=np.int64)
    delta[word.kinds == EventKind.LEFT_CUSP] = 2
    delta[word.kinds == EventKind.RIGHT_CUSP] = -2
    counts = np.empty(len(word) + 1, dtype=np.int64)
    counts[0] = word.initial_strands
    np.cumsum(delta, out=counts[1:])
    counts[1:] += word.initial_strands
    return counts


def validate(word: FrontWord) -> ValidationReport:
    """
    Replay ``word`` from its initial strand count and report the first
    event whose precondition fails.

    A LeftCusp at level i needs ``i <= strands + 1``; a RightCusp or a
    Crossing at level i needs strands at levels i and i + 1.
    """
    counts = strand_counts(word)
    before = counts[:-1]
    is_left = word.kinds == EventKind.LEFT_CUSP
    limit = np.where(is_left, before + 1, before - 1)
    bad = np.flatnonzero(word.levels > limit)
    if bad.size:
        index = int(bad[0])
        kind = EventKind(int(word.kinds[index]))
        reason = {
            EventKind.LEFT_CUSP: "left cusp above the top gap",
            EventKind.RIGHT_CUSP: "right cusp needs two strands",
            EventKind.CROSSING: "crossing needs two strands",
        }[kind]
        return ValidationReport(ok=False, index=index, reason=reason)
    if counts[-1] != word.initial_strands:
        return ValidationReport(
            ok=False,
            index=len(word),
            reason=(f"word ends with {int(counts[-1])} strands, "
                    f"expected {word.initial_strands}"))
    return ValidationReport(ok=True)
