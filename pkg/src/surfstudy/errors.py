"""Exception types shared across the package."""


class SurfStudyError(Exception):
    """Base class for all errors raised by this package."""


class AsciiGridError(SurfStudyError, ValueError):
    """Malformed ASCII grid input; message names the offending line/column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class DatasetError(SurfStudyError, ValueError):
    """Fields cannot be combined into a dataset (shape/origin/label problems)."""


class EmptyMeshError(SurfStudyError, ValueError):
    """Height field has no renderable cells."""


class BandConfigError(SurfStudyError, ValueError):
    """Invalid horizon-band configuration."""


class DegenerateDataError(SurfStudyError, ValueError):
    """Data has no dynamic range (e.g. flat-zero dataset)."""


class LayoutError(SurfStudyError, ValueError):
    """Scene assembly or layout parameter problem."""


class TrialGenerationError(SurfStudyError, RuntimeError):
    """Trial generation could not satisfy its constraints."""


class TieError(SurfStudyError, ValueError):
    """Probe values tie at the top; the trial has no single correct answer."""


class ResponseError(SurfStudyError, ValueError):
    """Invalid trial response."""


class UnknownTrialError(ResponseError):
    """Response references a trial no plan knows about."""


class DuplicateResponseError(ResponseError):
    """A response for this trial was already recorded."""
