"""
Error types and the CLI error mapping.

Every failure raised by the library derives from `LeafError`. The CLI maps
error classes to exit codes and prints a path-free message; the full
traceback only goes to the DEBUG log.
"""

import logging
import re
import traceback
from enum import IntEnum

from leaf.core.settings import settings

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    CONFIG_ERROR = 1
    RUNTIME_FAILURE = 2


class LeafError(Exception):
    """Base class for every error raised by leaf."""

    exit_code: ExitCode = ExitCode.RUNTIME_FAILURE


class ConfigError(LeafError):
    """Invalid run configuration, CLI flags or config file."""

    exit_code = ExitCode.CONFIG_ERROR


class DataError(LeafError):
    """
    Invalid dataset content.

    Attributes:
        row: 1-based data row (header excluded), if known
        column: column name or 1-based column position, if known
    """

    def __init__(self, message: str, row: int | None = None, column: str | int | None = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} at {', '.join(location)}"
        super().__init__(message)


class TrainingError(LeafError):
    """A black-box model could not be trained on the given data."""


class ExplainerError(LeafError):
    """An explainer was called outside its contract."""


class SingularSystemError(ExplainerError):
    """A least-squares system had no unique solution."""


class MetricError(LeafError):
    """A metric was called outside its contract."""


class OracleError(LeafError):
    """A reference implementation cannot answer for the given input."""


class ReportError(LeafError):
    """A report could not be written or read back."""


class RunError(LeafError):
    """
    Failure of a single sweep task, annotated with its run coordinates.
    """

    def __init__(self, cause: Exception, **coordinates: object):
        self.cause = cause
        self.coordinates = coordinates
        where = ", ".join(f"{key}={value}" for key, value in coordinates.items())
        super().__init__(f"{safe_str_exception(cause)} [{where}]")


def safe_str_exception(exc: BaseException, max_length: int = 300) -> str:
    """
    Render an exception as `Type: message` with file paths masked.

    Args:
        exc: Exception to render
        max_length: Truncate the message past this many characters

    Returns:
        A string safe to embed in reports
    """
    exc_type = exc.__class__.__name__
    exc_str = str(exc)

    exc_str = re.sub(r'File ".*?"', 'File "<internal>"', exc_str)
    exc_str = re.sub(r"(?<![\w.])/[\w\-.]+(?:/[\w\-.]+)+", "<path>", exc_str)
    exc_str = re.sub(r"[A-Za-z]:[/\\][\w\-./\\]+", "<path>", exc_str)

    if len(exc_str) > max_length:
        exc_str = exc_str[:max_length] + "..."

    return f"{exc_type}: {exc_str}"


def exit_code_for(exc: BaseException) -> ExitCode:
    """Exit code the CLI returns for an exception."""
    if isinstance(exc, LeafError):
        return exc.exit_code
    return ExitCode.RUNTIME_FAILURE


def handle_cli_error(exc: BaseException) -> ExitCode:
    """
    Log an exception escaping a CLI command and return its exit code.

    Expected failures (`LeafError`) are logged as a single line; anything
    else is logged as an unhandled error. Tracebacks go to DEBUG, or to ERROR
    when LEAF_MODE=dev.
    """
    code = exit_code_for(exc)
    if isinstance(exc, LeafError):
        logger.error(safe_str_exception(exc))
    else:
        logger.error(f"Unhandled exception: {safe_str_exception(exc)}")
    stacktrace = "Stacktrace:\n" + "".join(traceback.format_exception(exc))
    if settings.is_dev():
        logger.error(stacktrace)
    else:
        logger.debug(stacktrace)
    return code
