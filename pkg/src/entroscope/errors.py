"""Exception hierarchy shared across the toolkit."""


class EntroscopeError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(EntroscopeError):
    """Invalid input value or configuration."""


class ParseError(EntroscopeError):
    """Malformed file content, with a line number where possible."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DomainError(EntroscopeError):
    """Mathematical precondition violated (out-of-range probabilities, empty sequences)."""


class CapabilityError(EntroscopeError):
    """Backend does not support the requested operation."""


class TransportError(EntroscopeError):
    """Network-level failure talking to a backend; retryable unless marked otherwise."""

    def __init__(self, message: str, retryable: bool = True, status: int | None = None):
        super().__init__(message)
        self.retryable = retryable
        self.status = status


class GenerationError(EntroscopeError):
    """Backend produced an unusable generation (unknown item, empty response)."""


class ScoringError(EntroscopeError):
    """A detector could not score one item; not fatal to a batch."""


class BatchError(EntroscopeError):
    """Every item in a batch failed."""


class DivergenceError(EntroscopeError):
    """Simulator training produced non-finite values."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
