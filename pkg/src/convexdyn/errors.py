"""Exception hierarchy shared by all modules."""


class ConvexDynError(Exception):
    """Base class for every error raised by the package."""


class InvalidShapeError(ConvexDynError, ValueError):
    pass


class SmoothingOverlapError(InvalidShapeError):
    pass


class ConvexityViolationError(ConvexDynError):
    pass


class AccuracyError(ConvexDynError):
    pass


class DomainError(ConvexDynError, ValueError):
    """A point that should lie inside a domain does not."""


class UnboundedRayError(ConvexDynError):
    pass


class NoIntersectionError(ConvexDynError):
    """The inward normal ray misses the target body."""


class DegenerateGeometryError(ConvexDynError, ValueError):
    pass


class HypothesisViolation(ConvexDynError, ValueError):
    """A theorem hypothesis (e.g. q < 1, delta > 0) is not satisfied."""


class FitError(ConvexDynError):
    pass


class InversionError(ConvexDynError, ValueError):
    pass


class SingularParametrizationError(ConvexDynError, ValueError):
    pass


class ConfigError(ConvexDynError, ValueError):
    """Configuration text is malformed or violates the schema.

    ``violations`` lists every problem found, not just the first one.
    """

    def __init__(self, violations, line=None, column=None):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__("; ".join(self.violations) + where)
