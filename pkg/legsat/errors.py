from typing import Optional


class LegsatError(Exception):
    "Base class of every fault raised by the toolkit."


class InvalidFront(LegsatError, ValueError):
    "A front word that does not replay was handed to an operation requiring a valid one."


class ParseError(LegsatError, ValueError):
    """
    Fault in a front-word or scenario text.

    Parameters
    ----------
    message : str
        Human readable reason.
    line : int, default=None
        1-based line of the offending token.
    column : int, default=None
        1-based column of the offending token.
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None
    ) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


class FrontSyntaxError(ParseError):
    "Malformed or unknown token."


class UnknownDirective(ParseError):
    "A word-like token that names no directive."


class ArityError(ParseError):
    "A header or directive with missing or extra arguments."


class OverrideOutOfRange(LegsatError, ValueError):
    "An orientation override names a component that does not exist."


class NotConnected(LegsatError, ValueError):
    "A knot-only quantity was requested for a multi-component front."


class StaleSite(LegsatError, ValueError):
    "A move site does not match the word it is applied to."


class SpliceMismatch(LegsatError, ValueError):
    "A pattern, copy count or cut that cannot be spliced into the companion."


class IndexOutOfRange(LegsatError, ValueError):
    "A generator index outside the family's range."


class UnsupportedComponents(LegsatError, ValueError):
    "The slice-Bennequin bound is only available for knots and 2-component links."


class MissingFacts(LegsatError, ValueError):
    "A verdict needs exact bounds that the graph does not provide."


class ScenarioError(LegsatError, ValueError):
    "A scenario refers to unknown nodes or is otherwise inconsistent."
