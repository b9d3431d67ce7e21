"""
Error types and logging helpers shared by every layer.

Provides consistent error handling across the application:
- One exception hierarchy for model and configuration failures
- Mapping from exceptions to process exit codes for the CLI
- Contextual log helpers that work with or without an app context
"""

from __future__ import annotations

import logging

from flask import current_app, has_app_context

from ..constants import EXIT_MODEL, EXIT_OK, EXIT_VALIDATION

logger = logging.getLogger("qcoexist")


class QcoexistError(Exception):
    """Base class for every error raised by this package."""


class ModelError(QcoexistError, ValueError):
    """The physics model cannot produce a result for the given inputs."""


class ConfigError(QcoexistError):
    """A configuration document failed validation.

    Args:
        diagnostics: One message per problem, each naming the offending field
    """

    def __init__(self, diagnostics: list[str] | str):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


# spectra
class EmptyTable(ModelError):
    pass


class NegativeCoefficient(ModelError):
    pass


class DuplicateDetuning(ModelError):
    pass


class NegativeDetuning(ModelError):
    pass


# nonlinear
class EmptyPlan(ModelError):
    pass


class NonPositiveAttenuation(ModelError):
    pass


# link
class NegativePower(ModelError):
    pass


# qkd
class AllRatesZero(ModelError):
    pass


class NoSolution(ModelError):
    pass


# planner
class NoCrossover(ModelError):
    pass


# cli
class UnreadableFile(ConfigError):
    pass


def exit_code_for(error: BaseException | None) -> int:
    """
    Map an exception to the CLI exit code.

    Args:
        error: Exception raised by a command, or None on success

    Returns:
        0 on success, 2 for configuration problems, 3 for model failures

    Examples:
        >>> exit_code_for(NoCrossover("fwm never reaches raman"))
        3
    """
    if error is None:
        return EXIT_OK
    if isinstance(error, ConfigError):
        return EXIT_VALIDATION
    return EXIT_MODEL


def _emit(level: int, message: str, context: dict) -> None:
    if context:
        context_str = ", ".join(f"{k}={v}" for k, v in context.items())
        message = f"{message} | Context: {context_str}"

    target = current_app.logger if has_app_context() else logger
    target.log(level, message)


def log_warning(message: str, **context) -> None:
    """
    Log a warning with optional context.

    Examples:
        >>> log_warning("[Planner] degenerate placement", power_dbm=-99)
    """
    _emit(logging.WARNING, message, context)


def log_info(message: str, **context) -> None:
    """
    Log an info message with optional context.

    Examples:
        >>> log_info("[Calibration] solved", mu=0.139, intrinsic_error=0.0245)
    """
    _emit(logging.INFO, message, context)
