"""Exception hierarchy shared by all modules."""


class ZetaIFSError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ZetaIFSError, ValueError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    """Log-gamma evaluated at a nonpositive integer."""


class BackendRangeError(DomainError):
    """A zeta backend was asked for a height it does not cover."""


class IndeterminateError(ZetaIFSError, ArithmeticError):
    """Quantity undefined at this point (zero of zeta, vanishing derivative, ...)."""


class ConsistencyError(ZetaIFSError, ArithmeticError):
    """An internal consistency check failed (e.g. Z picked up an imaginary part)."""


class MissingPrerequisiteError(ZetaIFSError):
    """Earlier zeros needed by a sequential computation are not available."""


class NonConvergenceError(ZetaIFSError):
    """Iteration hit max_iterations without meeting the stopping rule."""

    def __init__(self, message, n=None, iterations=None, t_last=None):
        super().__init__(message)
        self.n = n
        self.iterations = iterations
        self.t_last = t_last


class MisconvergenceError(ZetaIFSError):
    """Iteration stopped, but not on the zero it was supposed to find."""

    def __init__(self, message, n=None, t_last=None):
        super().__init__(message)
        self.n = n
        self.t_last = t_last


class BracketViolationError(ZetaIFSError):
    """The exact-equation target is not straddled at a computed zero."""


class BracketNotFoundError(ZetaIFSError):
    """Grid scan could not locate the end points needed by the Lipschitz probe."""


class TableParseError(ZetaIFSError, ValueError):
    """Malformed line in a reference zero table."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else "line %d: %s" % (line, message))
        self.line = line


class TableOrderError(TableParseError):
    """Reference zero table is not strictly increasing."""
