"""Exception hierarchy shared across the package."""


class PomcheckError(Exception):
    """Base class for all package-specific errors."""


class StructuralError(PomcheckError, ValueError):
    """A value violates a structural invariant (cycles, reflexive order,
    missing labels, empty prefix pomsets, ...)."""


class ParseError(PomcheckError, ValueError):
    """Malformed process-file text.

    Carries ``line`` and ``column`` (1-based) when available.
    """

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{line}:{column or 0}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class InternalInconsistencyError(PomcheckError, RuntimeError):
    """A self-check that must hold by construction failed.

    Raised e.g. when an extracted distinguishing tree does not re-verify;
    signals a bug in this package, never swallowed.
    """
