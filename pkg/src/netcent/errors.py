"""Exception hierarchy shared across the toolkit.

Two broad families matter for the CLI: UsageError (caller asked for
something invalid, exit code 1) and DataError (the input data cannot
support the request, exit code 2). Anything else is treated as an
internal error (exit code 3).
"""


class NetcentError(Exception):
    """Base class for all toolkit errors."""


class UsageError(NetcentError):
    """Invalid parameters or an ill-formed request."""


class DataError(NetcentError):
    """Input data is missing, malformed, or degenerate."""


class EmptyInput(DataError):
    """No usable records were supplied."""


class ParseError(DataError):
    """A record could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidNode(DataError):
    """A node id or label does not exist in the graph."""


class InvalidParameter(UsageError):
    """A parameter is out of range or otherwise unusable."""


class ZeroMatrix(DataError):
    """The adjacency structure has no edges; spectral methods are undefined."""


class MissingAttribute(DataError):
    """A required per-node attribute is absent for some node."""

    def __init__(self, node, column=None):
        self.node = node
        self.column = column
        detail = f" (column {column!r})" if column else ""
        super().__init__(f"node {node!r} has no attribute value{detail}")


class InsufficientData(DataError):
    """Too few observations to compute the requested statistic."""


class UndefinedCorrelation(DataError):
    """One of the variables has zero variance; correlation is undefined."""


class DegenerateBaseline(DataError):
    """A comparison baseline is empty or zero."""


class NothingToEmit(DataError):
    """The report lacks the section plot emission needs."""


class PipelineError(NetcentError):
    """Wraps a stage failure with the stage name; keeps the cause for exit codes."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


def exit_code_for(err: BaseException) -> int:
    """Map an exception to the CLI exit code contract (1 usage, 2 data, 3 internal)."""
    if isinstance(err, PipelineError):
        return exit_code_for(err.cause)
    if isinstance(err, UsageError):
        return 1
    if isinstance(err, (DataError, FileNotFoundError)):
        return 2
    return 3
