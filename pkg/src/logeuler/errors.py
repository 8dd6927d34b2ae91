"""Exception hierarchy shared by every module.

Each class carries the diagnostic category and the process exit code used by
the command-line frontend.
"""


class LogEulerError(Exception):
    category = "internal"
    exit_code = 5


class InputError(LogEulerError, ValueError):
    """Malformed or inconsistent user input."""

    category = "input"
    exit_code = 2


class ParseError(InputError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class ContextMismatch(InputError):
    pass


class NonTransverseError(LogEulerError):
    """An intersection that should be finite is positive dimensional."""

    category = "non_transverse"
    exit_code = 3


class ResourceError(LogEulerError):
    """A configured computation budget was exhausted."""

    category = "resource"
    exit_code = 4


class InvariantError(LogEulerError):
    """An internal consistency check failed."""

    category = "invariant"
    exit_code = 5
