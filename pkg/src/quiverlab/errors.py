class QuiverLabError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class ValidationError(QuiverLabError):
    exit_code = 2

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class WalkError(QuiverLabError):
    exit_code = 3


class RelationError(QuiverLabError):
    exit_code = 4


class BoundTooSmall(QuiverLabError):
    exit_code = 5


class NotProperlyGraded(QuiverLabError):
    exit_code = 6


class NotNicelyGraded(QuiverLabError):
    exit_code = 7


class WindowError(QuiverLabError):
    exit_code = 8


class SliceError(QuiverLabError):
    exit_code = 9


class ParseError(QuiverLabError):
    exit_code = 10

    def __init__(self, message, line, column):
        self.line, self.column = line, column
        super().__init__(f"line {line}, column {column}: {message}")


class PresentationError(QuiverLabError):
    exit_code = 11
