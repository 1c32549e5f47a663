import re
from typing import Iterator, List, Tuple, Union
from legsat.errors import ArityError, FrontSyntaxError, UnknownDirective
from legsat.front_core.event import Direction, EventKind, Shape
from legsat.front_core.front_word import FrontWord

EVENT_TOKEN = re.compile(r"^([LRX])([1-9][0-9]*)$")
WORD_TOKEN = re.compile(r"^[A-Za-z][A-Za-z_-]*$")
INTEGER_TOKEN = re.compile(r"^(0|[1-9][0-9]*)$")
TOKENS_PER_LINE = 16

Token = Tuple[str, int, int]


def _tokens(text: str) -> Iterator[Token]:
    "Yield (token, line, column) pairs, dropping ``#`` comments."
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for match in re.finditer(r"\S+", line):
            yield match.group(0), line_number, match.start() + 1


def _integer(token: Token, what: str) -> int:
    text, line, column = token
    if not INTEGER_TOKEN.match(text):
        raise FrontSyntaxError(f"{what} must be a non-negative integer, got {text!r}",
                               line, column)
    return int(text)


def parse(text: Union[bytes, str]) -> FrontWord:
    """
    Parse the front-word DSL.

    The first non-comment line is the header ``knot`` or ``pattern <s>``;
    the rest is a whitespace separated stream of events ``L<i>``,
    ``R<i>``, ``X<i>`` and directives ``orient <component> <R|L>``.

    Parameters
    ----------
    text : bytes or str
        UTF-8 text.

    Returns
    -------
    word : FrontWord
        The parsed word; it is not validated.

    Raises
    ------
    FrontSyntaxError
        Malformed token (e.g. ``Q9`` or ``L0``).
    UnknownDirective
        A word-like token that is not ``orient``.
    ArityError
        Header or directive with missing or extra arguments.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = [line.split("#", 1)[0].split() for line in text.splitlines()]
    header_line = next((i for i, parts in enumerate(lines) if parts), None)
    if header_line is None:
        raise ArityError("missing header 'knot' or 'pattern <s>'", 1, 1)

    tokens = list(_tokens(text))
    header = [token for token in tokens if token[1] == header_line + 1]
    body = [token for token in tokens if token[1] > header_line + 1]
    name, line, column = header[0]
    if name == "knot":
        if len(header) != 1:
            raise ArityError("'knot' takes no argument", line, column)
        shape, seam = Shape.CLOSED, 0
    elif name == "pattern":
        if len(header) != 2:
            raise ArityError("'pattern' takes the seam strand count", line, column)
        shape, seam = Shape.ANNULAR, _integer(header[1], "seam strand count")
    else:
        raise UnknownDirective(f"unknown header {name!r}", line, column)

    kinds: List[int] = []
    levels: List[int] = []
    orientations = []
    position = 0
    while position < len(body):
        text_token, line, column = body[position]
        match = EVENT_TOKEN.match(text_token)
        if match:
            kinds.append(int(EventKind.from_letter(match.group(1))))
            levels.append(int(match.group(2)))
            position += 1
        elif text_token == "orient":
            arguments = [token for token in body[position + 1:position + 3]
                         if token[1] == line]
            if len(arguments) != 2:
                raise ArityError("'orient' takes <component> <R|L>", line, column)
            component = _integer(arguments[0], "component index")
            letter, arg_line, arg_column = arguments[1]
            if letter not in ("R", "L"):
                raise FrontSyntaxError(
                    f"direction must be R or L, got {letter!r}",
                    arg_line, arg_column)
            orientations.append((component, Direction.from_letter(letter)))
            position += 3
        elif text_token in ("knot", "pattern"):
            raise ArityError(f"header {text_token!r} repeated", line, column)
        elif WORD_TOKEN.match(text_token) and len(text_token) > 1 and \
                not EVENT_TOKEN.match(text_token):
            raise UnknownDirective(f"unknown directive {text_token!r}", line, column)
        else:
            raise FrontSyntaxError(f"unknown token {text_token!r}", line, column)

    return FrontWord(
        shape=shape,
        seam_strands=seam,
        kinds=kinds,
        levels=levels,
        orientations=tuple(orientations))


def render_text(word: FrontWord) -> bytes:
    """
    Render a word in the DSL accepted by ``parse``; ``parse(render_text(w))``
    equals ``w``.
    """
    header = "knot" if word.shape is Shape.CLOSED else f"pattern {word.seam_strands}"
    tokens = [f"{EventKind(kind).letter}{level}"
              for kind, level in zip(word.kinds.tolist(), word.levels.tolist())]
    lines = [header]
    for start in range(0, len(tokens), TOKENS_PER_LINE):
        lines.append(" ".join(tokens[start:start + TOKENS_PER_LINE]))
    for component, direction in word.orientations:
        lines.append(f"orient {component} {Direction(direction).letter}")
    return ("\n".join(lines) + "\n").encode("utf-8")
