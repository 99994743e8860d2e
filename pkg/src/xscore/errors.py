"""Exception hierarchy.

Every domain/validation failure derives from :class:`XScoreError`; the CLI
maps those to exit status 1. :class:`ParseError` (malformed input text) maps
to exit status 2 alongside I/O failures.
"""

from __future__ import annotations


class XScoreError(Exception):
    """Base class for domain and validation errors."""

    exit_code = 1


class ParseError(XScoreError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class InvalidIdentifier(XScoreError):
    pass


class DuplicateCell(XScoreError):
    pass


class MissingCell(XScoreError):
    pass


class OutOfRange(XScoreError):
    pass


class TooFewModels(XScoreError):
    pass


class TooFewDatasets(XScoreError):
    pass


class DegenerateColumn(XScoreError):
    pass


class DegenerateAnchor(XScoreError):
    pass


class AnchorMissing(XScoreError):
    pass


class InvalidLambda(XScoreError):
    pass


class BadSubsetSize(XScoreError):
    pass


class SearchTooLarge(BadSubsetSize):
    """Raised when C(N, k) exceeds the brute-force guard."""


class ModelSetMismatch(XScoreError):
    pass


class UnknownDataset(XScoreError):
    pass


class UnknownObjective(XScoreError):
    pass


class ConstantVariable(XScoreError):
    pass
