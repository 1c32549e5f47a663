from typing import List
import numpy as np
from pydantic import BaseModel, NonNegativeInt, PositiveInt, root_validator
from legsat.front_core.event import EventKind, Shape
from legsat.front_core.front_word import FrontWord


class FrontWordGenerator(BaseModel):
    """
    Class useful to sample random valid front words, used by the quantified
    checks (round trip, move invariance, orientation reversal).

    Parameters
    ----------
    n_words : int, default=100
        Number of words to sample.
    length : int, default=12
        Number of freely sampled events per word; closing right (or left)
        cusps are appended until the strand count is back to its initial
        value.
    max_strands : int, default=8
        Left cusps are not sampled above this strand count.
    shape : Shape, default=Shape.CLOSED
        Shape of the sampled words.
    seam_strands : int, default=0
        Seam strand count of annular words.
    seed : int, default=0
        Random seed.
    words : list of FrontWord, default=[]
        The sampled words.

    Examples
    --------
    >>> fwg = FrontWordGenerator(n_words=2, length=4)
    >>> fwg.sample()
    >>> fwg.words
    [FrontWord(knot: L1 L2 X1 R2 R1), FrontWord(knot: L1 X1 ...)]
    """
    n_words: NonNegativeInt = 100
    length: NonNegativeInt = 12
    max_strands: PositiveInt = 8
    shape: Shape = Shape.CLOSED
    seam_strands: NonNegativeInt = 0
    seed: NonNegativeInt = 0
    words: List[FrontWord] = []

    class Config:
        arbitrary_types_allowed = True

    @root_validator(skip_on_failure=True)
    def _check_seam(cls, values):
        if values["shape"] is Shape.CLOSED and values["seam_strands"]:
            raise ValueError("a closed front has no seam strands")
        return values

    def _sample_word(self, rng: np.random.Generator) -> FrontWord:
        """
        Random walk over strand counts: a left cusp is always possible, a
        right cusp or a crossing needs two strands.
        """
        strands = self.seam_strands
        kinds = []
        levels = []
        for _ in range(self.length):
            if strands < 2:
                kind = EventKind.LEFT_CUSP
            elif strands >= self.max_strands:
                kind = EventKind(int(rng.choice([1, 2], p=[0.4, 0.6])))
            else:
                kind = EventKind(int(rng.choice([0, 1, 2], p=[0.3, 0.2, 0.5])))

            if kind == EventKind.LEFT_CUSP:
                level = int(rng.integers(1, strands + 2))
                strands += 2
            else:
                level = int(rng.integers(1, strands))
                if kind == EventKind.RIGHT_CUSP:
                    strands -= 2
            kinds.append(int(kind))
            levels.append(level)

        while strands > self.seam_strands:
            kinds.append(int(EventKind.RIGHT_CUSP))
            levels.append(int(rng.integers(1, strands)))
            strands -= 2
        while strands < self.seam_strands:
            kinds.append(int(EventKind.LEFT_CUSP))
            levels.append(int(rng.integers(1, strands + 2)))
            strands += 2

        return FrontWord(
            shape=self.shape,
            seam_strands=self.seam_strands,
            kinds=kinds,
            levels=levels)

    def sample(self) -> None:
        """
        Fill attribute .words with random valid words.
        """
        rng = np.random.default_rng(self.seed)
        self.words = [self._sample_word(rng) for _ in range(self.n_words)]
