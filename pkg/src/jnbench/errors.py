"""Shared error types. Every out-of-domain situation raises eagerly;
the workbench never produces NaN/inf placeholders that could read as a pass."""


class DomainError(ValueError):
    """Operation applied outside its mathematical domain (x/0, log of <= 0, ...)."""


class PreconditionError(ValueError):
    """Caller violated a documented precondition (overlap, cap, threshold)."""


class RangeLimitError(ValueError):
    """Requested level/index beyond the built truncation depth."""


class SizeError(ValueError):
    """Input too large for an exhaustive routine."""


class AccuracyError(RuntimeError):
    """A numerical routine could not reach its requested accuracy."""


class UnsupportedCaseError(ValueError):
    """Configuration outside the implemented cases (documented, not silent)."""


class UsageError(ValueError):
    """Bad user-facing input (unknown claim id, malformed config, ...)."""
