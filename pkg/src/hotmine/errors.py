"""Exception types shared across the pipeline."""


class HotmineError(Exception):
    """Base class for all package errors."""


class InputError(HotmineError, ValueError):
    """Bad input data or parameters (CLI exit code 1)."""


class ConvergenceError(HotmineError, RuntimeError):
    """An iterative solver failed to converge (CLI exit code 2)."""
