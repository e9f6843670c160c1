"""Exception types shared across the package.

DomainError: a caller broke a precondition (bad input, unsupported ideal,
set beyond its index set).  The CLI maps it to exit code 1.

InternalCheckError: a construction failed its own postcondition check, i.e.
an invariant the library promises was caught broken.  CLI exit code 2.

WindowError: a symbolic set could not answer a membership query below the
requested horizon (predicate files only).  Subclass of DomainError because
it is a property of the caller's data.
"""


class DomainError(ValueError):
    pass


class WindowError(DomainError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class InternalCheckError(AssertionError):
    pass
