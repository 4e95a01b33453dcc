"""Exception types shared across the package."""


class CoblabError(Exception):
    """Base class for all package-specific errors."""


class CompositionError(CoblabError):
    """Raised when composing maps/morphisms with mismatched endpoints."""


class TruncationError(CoblabError):
    """Raised when an operation needs simplicial data above the stored truncation.

    Carries the level that would be required so callers can rebuild deeper.
    """

    def __init__(self, message: str, required_level: int | None = None):
        super().__init__(message)
        self.required_level = required_level


class ResourceLimitError(CoblabError):
    """Raised when an enumeration or a pushout exceeds a configured ceiling.

    Never downgraded into a partial silent result: callers either backtrack
    (construction enumerators treat an unrepresentable pushout as an
    unsatisfiable constraint) or abort loudly.
    """

    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message)
        self.context = dict(context or {})
