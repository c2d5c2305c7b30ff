"""Exception hierarchy. Command dispatch maps these onto process exit codes."""


class VnsError(Exception):
    """Base class for every error raised by vnslab."""


class ConfigError(VnsError, ValueError):
    """Invalid experiment description or grid/profile mismatch (exit code 2)."""


class UsageError(VnsError, ValueError):
    """An operation was called with arguments outside its domain."""


class PreconditionError(UsageError):
    """Input violates a documented precondition (e.g. nonzero mean for homogeneous norms)."""


class FitError(VnsError, ValueError):
    """Decay fit impossible on the selected window."""


class DataError(VnsError, ValueError):
    """Sampled series has the wrong sign structure."""


class InternalError(VnsError, RuntimeError):
    """State the code should never reach, e.g. a missing cached derivative."""


class NumericalAbort(VnsError, RuntimeError):
    """Run stopped on non-finite values or a continuation guard (exit code 3)."""

    def __init__(self, reason: str, last_good=None):
        super().__init__(reason)
        self.reason = reason
        self.last_good = last_good


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, NumericalAbort):
        return EXIT_NUMERICAL
    if isinstance(error, (ConfigError, UsageError)):
        return EXIT_CONFIG
    return EXIT_FAILURE
