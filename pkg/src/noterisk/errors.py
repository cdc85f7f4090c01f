"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
transport/featurization failures -> 4, model fitting failures -> 5.
"""


class NoteriskError(Exception):
    """Base class for all package errors."""


class ConfigError(NoteriskError):
    """Invalid or inconsistent configuration."""


class DataError(NoteriskError):
    """Malformed input data: CSV schema, note files, feature values."""


class EvalError(NoteriskError):
    """Metric preconditions violated (single-class input, id mismatch, ...)."""


class FitError(NoteriskError):
    """Model fitting cannot proceed (degenerate design, separable data at lambda=0)."""


class ConvergenceError(FitError):
    """Solver ran out of its iteration budget."""

    def __init__(self, lam: float, last_delta: float, detail: str = ""):
        self.lam = lam
        self.last_delta = last_delta
        msg = f"no convergence at lambda={lam!r} (last max coefficient change {last_delta:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ResponseParseError(NoteriskError):
    """Base for LLM answer-parsing failures; carries the raw response text."""

    def __init__(self, message: str, raw: str):
        self.raw = raw
        super().__init__(f"{message}; raw response: {raw!r}")


class FormatError(ResponseParseError):
    """Response does not contain exactly the three numbered answers."""


class RangeError(ResponseParseError):
    """An answer is out of [1, 100] or not an integer."""


class TransportError(NoteriskError):
    """HTTP request failed after all retries."""


class ContextLengthError(NoteriskError):
    """Rendered prompt exceeds the configured model context budget."""


class UnparsableError(NoteriskError):
    """Backend kept returning malformed answers through all re-asks."""


class FeaturizeError(NoteriskError):
    """Batch featurization failed for too large a fraction of patients."""

    def __init__(self, message: str, failures: dict[str, str]):
        self.failures = dict(failures)
        super().__init__(message)
