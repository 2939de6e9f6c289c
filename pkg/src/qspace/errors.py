"""Exception hierarchy shared by all qspace modules."""


class QSpaceError(Exception):
    """Base class for every error raised by qspace."""


class ConfigurationError(QSpaceError, ValueError):
    """Invalid build parameters or experiment configuration."""

    def __init__(self, message, path=None):
        super().__init__(message if path is None else f"{path}: {message}")
        self.path = path


class UnknownVertexError(QSpaceError, LookupError):
    pass


class UnknownEdgeError(QSpaceError, LookupError):
    pass


class DomainError(QSpaceError, ValueError):
    """An operation was applied outside its domain (tadpole, bad generator...)."""


class StateError(QSpaceError, RuntimeError):
    """The complex is not in a state that admits the operation."""


class DeadEndError(DomainError):
    """A walk asked for a generator that has no live edge at the occupied vertex."""

    def __init__(self, message, state=None, position=None):
        super().__init__(message)
        self.state = state
        self.position = position


class ConstraintError(DomainError):
    """A walk traversed the same directed spatial edge twice."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class HolonomyUndefinedError(DomainError):
    """One of the two curvature routes dead-ends; ``partial`` holds the walk so far."""

    def __init__(self, message, route, partial=None, position=None):
        super().__init__(message)
        self.route = route
        self.partial = partial
        self.position = position


class UnreachableError(QSpaceError, LookupError):
    pass


class FitError(QSpaceError, ValueError):
    pass


class InsufficientStatisticsError(FitError):
    pass


class WordSyntaxError(QSpaceError, ValueError):
    pass
