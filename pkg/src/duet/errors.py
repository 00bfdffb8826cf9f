"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class DuetError(Exception):
    exit_code = 1


class ConfigError(DuetError, ValueError):
    exit_code = 1


class ConvergenceError(DuetError, RuntimeError):
    exit_code = 2


class PhysicalityError(DuetError, ValueError):
    exit_code = 3


class SingularResponseError(DuetError, ZeroDivisionError):
    """D(omega) vanished on the real axis (undamped resonance)."""

    exit_code = 2
