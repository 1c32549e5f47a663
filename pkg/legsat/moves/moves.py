import logging
from enum import Enum
from typing import Dict, List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, NonNegativeInt, PositiveInt
from legsat.errors import StaleSite
from legsat.front_core.event import Direction, EventKind
from legsat.front_core.front_word import FrontWord
from legsat.front_core.trace import OrientedFront, trace_components
from legsat.front_core.validation import strand_counts

logger = logging.getLogger(__name__)

_L = int(EventKind.LEFT_CUSP)
_R = int(EventKind.RIGHT_CUSP)
_X = int(EventKind.CROSSING)

Block = Tuple[Tuple[int, int], ...]


class MoveKind(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    COMMUTE = "commute"


class MoveVariant(str, Enum):
    """
    Local configurations of the front moves, in both directions.

    ``KINK_*`` adds or removes a loop with two cusps and one crossing on
    the strand at ``level`` (UP: loop above the strand, DOWN: below).
    ``LEFT_*`` / ``RIGHT_*`` push the cusp at ``level`` through the strand
    just below or just above it. ``TRIPLE_*`` slides the strand across a
    crossing. ``SWAP`` exchanges adjacent events on disjoint levels.
    """
    KINK_UP_INSERT = "kink-up-insert"
    KINK_UP_REMOVE = "kink-up-remove"
    KINK_DOWN_INSERT = "kink-down-insert"
    KINK_DOWN_REMOVE = "kink-down-remove"
    LEFT_BELOW_EXPAND = "left-below-expand"
    LEFT_BELOW_CONTRACT = "left-below-contract"
    LEFT_ABOVE_EXPAND = "left-above-expand"
    LEFT_ABOVE_CONTRACT = "left-above-contract"
    RIGHT_BELOW_EXPAND = "right-below-expand"
    RIGHT_BELOW_CONTRACT = "right-below-contract"
    RIGHT_ABOVE_EXPAND = "right-above-expand"
    RIGHT_ABOVE_CONTRACT = "right-above-contract"
    TRIPLE_RAISE = "triple-raise"
    TRIPLE_LOWER = "triple-lower"
    SWAP = "swap"


class MoveSite(BaseModel):
    """
    A place where a front move applies.

    Parameters
    ----------
    move : MoveKind
        Family of the move.
    event_index : int
        First event of the rewritten block; for insertions, the column the
        new block is inserted at.
    variant : MoveVariant
        Local configuration.
    level : int
        Strand level of a kink, cusp level of a cusp move, lower level of a
        triple point, level of the first swapped event.
    """
    move: MoveKind
    event_index: NonNegativeInt
    variant: MoveVariant
    level: PositiveInt

    class Config:
        allow_mutation = False

    def __str__(self) -> str:
        return f"{self.variant.value}@{self.event_index}:{self.level}"


def _kink_up(i: int) -> Block:
    return ((_L, i + 1), (_X, i), (_R, i + 1))


def _kink_down(i: int) -> Block:
    return ((_L, i), (_X, i + 1), (_R, i))


def _left_below(j: int) -> Block:
    return ((_L, j - 1), (_X, j), (_X, j - 1))


def _left_above(j: int) -> Block:
    return ((_L, j + 1), (_X, j), (_X, j + 1))


def _right_below(j: int) -> Block:
    return ((_X, j - 1), (_X, j), (_R, j - 1))


def _right_above(j: int) -> Block:
    return ((_X, j + 1), (_X, j), (_R, j + 1))


def _triple(i: int) -> Block:
    return ((_X, i), (_X, i + 1), (_X, i))


def _triple_raised(i: int) -> Block:
    return ((_X, i + 1), (_X, i), (_X, i + 1))


# variant -> (block before, block after) as functions of the site level
_REWRITES = {
    MoveVariant.KINK_UP_INSERT: (lambda i: (), _kink_up),
    MoveVariant.KINK_UP_REMOVE: (_kink_up, lambda i: ()),
    MoveVariant.KINK_DOWN_INSERT: (lambda i: (), _kink_down),
    MoveVariant.KINK_DOWN_REMOVE: (_kink_down, lambda i: ()),
    MoveVariant.LEFT_BELOW_EXPAND: (lambda j: ((_L, j),), _left_below),
    MoveVariant.LEFT_BELOW_CONTRACT: (_left_below, lambda j: ((_L, j),)),
    MoveVariant.LEFT_ABOVE_EXPAND: (lambda j: ((_L, j),), _left_above),
    MoveVariant.LEFT_ABOVE_CONTRACT: (_left_above, lambda j: ((_L, j),)),
    MoveVariant.RIGHT_BELOW_EXPAND: (lambda j: ((_R, j),), _right_below),
    MoveVariant.RIGHT_BELOW_CONTRACT: (_right_below, lambda j: ((_R, j),)),
    MoveVariant.RIGHT_ABOVE_EXPAND: (lambda j: ((_R, j),), _right_above),
    MoveVariant.RIGHT_ABOVE_CONTRACT: (_right_above, lambda j: ((_R, j),)),
    MoveVariant.TRIPLE_RAISE: (_triple, _triple_raised),
    MoveVariant.TRIPLE_LOWER: (_triple_raised, _triple),
}

_KIND_OF = {
    MoveVariant.KINK_UP_INSERT: MoveKind.R1,
    MoveVariant.KINK_UP_REMOVE: MoveKind.R1,
    MoveVariant.KINK_DOWN_INSERT: MoveKind.R1,
    MoveVariant.KINK_DOWN_REMOVE: MoveKind.R1,
    MoveVariant.TRIPLE_RAISE: MoveKind.R3,
    MoveVariant.TRIPLE_LOWER: MoveKind.R3,
    MoveVariant.SWAP: MoveKind.COMMUTE,
}

_INVERSE = {
    MoveVariant.KINK_UP_INSERT: MoveVariant.KINK_UP_REMOVE,
    MoveVariant.KINK_DOWN_INSERT: MoveVariant.KINK_DOWN_REMOVE,
    MoveVariant.LEFT_BELOW_EXPAND: MoveVariant.LEFT_BELOW_CONTRACT,
    MoveVariant.LEFT_ABOVE_EXPAND: MoveVariant.LEFT_ABOVE_CONTRACT,
    MoveVariant.RIGHT_BELOW_EXPAND: MoveVariant.RIGHT_BELOW_CONTRACT,
    MoveVariant.RIGHT_ABOVE_EXPAND: MoveVariant.RIGHT_ABOVE_CONTRACT,
    MoveVariant.TRIPLE_RAISE: MoveVariant.TRIPLE_LOWER,
    MoveVariant.SWAP: MoveVariant.SWAP,
}
_INVERSE.update({value: key for key, value in list(_INVERSE.items())})

# three-event patterns: position of the event whose level is the site level
_ANCHOR = {
    MoveVariant.KINK_UP_REMOVE: 1,
    MoveVariant.KINK_DOWN_REMOVE: 0,
    MoveVariant.LEFT_BELOW_CONTRACT: 1,
    MoveVariant.LEFT_ABOVE_CONTRACT: 1,
    MoveVariant.RIGHT_BELOW_CONTRACT: 1,
    MoveVariant.RIGHT_ABOVE_CONTRACT: 1,
    MoveVariant.TRIPLE_RAISE: 0,
    MoveVariant.TRIPLE_LOWER: 1,
}

_DELTA = {_L: 2, _R: -2, _X: 0}


def _site(variant: MoveVariant, event_index: int, level: int) -> MoveSite:
    return MoveSite(
        move=_KIND_OF.get(variant, MoveKind.R2),
        event_index=event_index,
        variant=variant,
        level=level)


def _range_after(kind: int, level: int) -> Tuple[float, float]:
    "Levels touched by an event, seen from the right."
    if kind == _R:
        return level - 0.5, level - 0.5
    return level, level + 1


def _range_before(kind: int, level: int) -> Tuple[float, float]:
    "Levels touched by an event, seen from the left."
    if kind == _L:
        return level - 0.5, level - 0.5
    return level, level + 1


def commuted(
    first: Tuple[int, int],
    second: Tuple[int, int]
) -> Optional[Block]:
    """
    Exchange two adjacent events acting on disjoint levels.

    Parameters
    ----------
    first, second : tuple of int
        ``(kind, level)`` of the events, ``first`` to the left.

    Returns
    -------
    block : tuple or None
        The two events in exchanged order with re-based levels, or None
        when their level ranges meet.
    """
    kind_1, level_1 = first
    kind_2, level_2 = second
    low_1, high_1 = _range_after(kind_1, level_1)
    low_2, high_2 = _range_before(kind_2, level_2)
    if low_2 > high_1:
        return (kind_2, level_2 - _DELTA[kind_1]), (kind_1, level_1)
    if high_2 < low_1:
        return (kind_2, level_2), (kind_1, level_1 + _DELTA[kind_2])
    return None


def inverse_site(word: FrontWord, site: MoveSite) -> MoveSite:
    """
    Site that undoes ``site`` on ``apply(word, site)``.
    """
    variant = _INVERSE[site.variant]
    if site.variant is MoveVariant.SWAP:
        kinds = word.kinds.tolist()
        levels = word.levels.tolist()
        k = site.event_index
        block = commuted((kinds[k], levels[k]), (kinds[k + 1], levels[k + 1]))
        if block is None:
            raise StaleSite(f"no swap at {site}")
        return _site(variant, k, block[0][1])
    return _site(variant, site.event_index, site.level)


def find_sites(word: FrontWord) -> List[MoveSite]:
    """
    Enumerate every place a front move applies.

    Kinks can be inserted on any strand at any column; cusp moves need a
    strand right next to the cusp on the side it is pushed through.

    Parameters
    ----------
    word : FrontWord
        A valid word.

    Returns
    -------
    sites : list of MoveSite
        Sorted by event index, then variant order, then level.
    """
    kinds = word.kinds.tolist()
    levels = word.levels.tolist()
    counts = strand_counts(word).tolist()
    sites = []
    for t in range(len(kinds) + 1):
        for i in range(1, counts[t] + 1):
            sites.append(_site(MoveVariant.KINK_UP_INSERT, t, i))
            sites.append(_site(MoveVariant.KINK_DOWN_INSERT, t, i))
        if t == len(kinds):
            break

        kind, level = kinds[t], levels[t]
        if kind == _L:
            if level >= 2:
                sites.append(_site(MoveVariant.LEFT_BELOW_EXPAND, t, level))
            if level <= counts[t]:
                sites.append(_site(MoveVariant.LEFT_ABOVE_EXPAND, t, level))
        elif kind == _R:
            if level >= 2:
                sites.append(_site(MoveVariant.RIGHT_BELOW_EXPAND, t, level))
            if level + 2 <= counts[t]:
                sites.append(_site(MoveVariant.RIGHT_ABOVE_EXPAND, t, level))

        window = tuple(zip(kinds[t:t + 3], levels[t:t + 3]))
        if len(window) == 3:
            for variant, position in _ANCHOR.items():
                before, _ = _REWRITES[variant]
                anchor = window[position][1]
                if before(anchor) == window:
                    sites.append(_site(variant, t, anchor))
        if t + 1 < len(kinds) and \
                commuted(window[0], (kinds[t + 1], levels[t + 1])) is not None:
            sites.append(_site(MoveVariant.SWAP, t, level))

    order = {variant: position for position, variant in enumerate(MoveVariant)}
    sites.sort(key=lambda s: (s.event_index, order[s.variant], s.level))
    return sites


def _rewrite(word: FrontWord, site: MoveSite) -> Tuple[List[int], List[int], int, int]:
    """
    New kinds and levels for ``site``, plus the lengths of the replaced
    and of the inserted block.
    """
    kinds = word.kinds.tolist()
    levels = word.levels.tolist()
    k = site.event_index
    if site.variant is MoveVariant.SWAP:
        if k + 1 >= len(kinds) or levels[k] != site.level:
            raise StaleSite(f"no swap at {site}")
        new = commuted((kinds[k], levels[k]), (kinds[k + 1], levels[k + 1]))
        if new is None:
            raise StaleSite(f"events at {site} do not commute")
        old_length = 2
    else:
        before, after = _REWRITES[site.variant]
        old = before(site.level)
        window = tuple(zip(kinds[k:k + len(old)], levels[k:k + len(old)]))
        if k > len(kinds) or window != old:
            raise StaleSite(f"{site} does not match the word")
        new = after(site.level)
        if any(level < 1 for _, level in new):
            raise StaleSite(f"{site} needs a strand below level {site.level}")
        old_length = len(old)
        counts = strand_counts(word).tolist()
        needed = {
            MoveVariant.KINK_UP_INSERT: site.level,
            MoveVariant.KINK_DOWN_INSERT: site.level,
            MoveVariant.LEFT_ABOVE_EXPAND: site.level,
            MoveVariant.RIGHT_ABOVE_EXPAND: site.level + 2,
        }.get(site.variant, 0)
        if counts[k] < needed:
            raise StaleSite(f"{site} needs a strand at level {needed}")

    kinds[k:k + old_length] = [kind for kind, _ in new]
    levels[k:k + old_length] = [level for _, level in new]
    return kinds, levels, old_length, len(new)


def _carry_orientation(
    old: OrientedFront,
    new: OrientedFront,
    k: int,
    old_length: int,
    new_length: int
) -> Tuple[Tuple[int, Direction], ...]:
    """
    Overrides making every strand of ``new`` outside the rewritten columns
    point as it does in ``old``.

    Arcs created before column ``k`` keep their ids; arcs met at the column
    right after the block are matched by level; arcs created after the
    block are shifted by the number of arcs the rewrite adds.
    """
    word = old.word
    s0 = word.initial_strands
    left_before = int((word.kinds[:k] == EventKind.LEFT_CUSP).sum())
    created_before = s0 + 2 * left_before
    old_left_inside = int((word.kinds[k:k + old_length] == EventKind.LEFT_CUSP).sum())
    new_left_inside = int((new.word.kinds[k:k + new_length] == EventKind.LEFT_CUSP).sum())
    created_old = created_before + 2 * old_left_inside
    created_new = created_before + 2 * new_left_inside

    pairs: Dict[int, int] = {arc: arc for arc in range(created_before)}
    old_column = old.arcs_at([k + old_length])[k + old_length]
    new_column = new.arcs_at([k + new_length])[k + new_length]
    for new_arc, old_arc in zip(new_column, old_column):
        pairs.setdefault(new_arc, old_arc)
    shift = created_new - created_old
    for new_arc in range(created_new, new.directions.size):
        pairs.setdefault(new_arc, new_arc - shift)

    flipped = set()
    seen = set()
    for new_arc, old_arc in pairs.items():
        component = int(new.arc_component[new_arc])
        if component in seen:
            continue
        seen.add(component)
        if new.directions[new_arc] != old.directions[old_arc]:
            flipped.add(component)
    missing = new.n_components - len(seen)
    if missing:
        logger.debug("%d components lie inside the rewritten block", missing)
    return tuple((component, Direction.LEFTWARD) for component in sorted(flipped))


def apply(word: FrontWord, site: MoveSite) -> FrontWord:
    """
    Apply a front move.

    The result keeps the shape and the seam strand count, and its
    orientation overrides are chosen so that every strand outside the
    rewritten block keeps its direction.

    Raises
    ------
    StaleSite
        If the site's pattern does not occur in ``word``.
    """
    kinds, levels, old_length, new_length = _rewrite(word, site)
    old = trace_components(word)
    raw = FrontWord(
        shape=word.shape,
        seam_strands=word.seam_strands,
        kinds=kinds,
        levels=levels)
    new = trace_components(raw)
    orientations = _carry_orientation(
        old, new, site.event_index, old_length, new_length)
    logger.debug("applied %s", site)
    return raw.with_orientations(orientations)


def perturb(word: FrontWord, steps: int, seed: int) -> FrontWord:
    """
    Apply ``steps`` moves, each chosen uniformly among the applicable
    sites.

    Parameters
    ----------
    word : FrontWord
        A valid word.
    steps : int
        Number of moves.
    seed : int
        Seed of the numpy generator choosing the sites.

    Returns
    -------
    word : FrontWord
        Legendrian isotopic to the input.
    """
    rng = np.random.default_rng(seed)
    for _ in range(steps):
        sites = find_sites(word)
        if not sites:
            break
        word = apply(word, sites[int(rng.integers(len(sites)))])
    return word
