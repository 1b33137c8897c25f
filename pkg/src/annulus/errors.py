"""Exception hierarchy.

Two families matter to callers: ``InputError`` (the data is not what the
operation accepts) and ``SolverError`` (the numerics could not deliver the
requested accuracy). The CLI maps them to distinct exit codes.
"""


class AnnulusError(Exception):
    pass


class InputError(AnnulusError, ValueError):
    pass


class SolverError(AnnulusError, RuntimeError):
    pass


class InvalidParameter(InputError):
    pass


class MonotonicityViolation(InputError):
    pass


class OrientationError(InputError):
    pass


class DomainViolation(InputError):
    pass


class RangeViolation(InputError):
    pass


class ZeroInImage(InputError):
    pass


class DerivativeVanishes(InputError):
    pass


class ClassificationError(InputError):
    pass


class UnivalenceFailure(InputError):
    pass


class InvalidInput(InputError):
    def __init__(self, message, path=None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class DegenerateProbe(SolverError):
    pass


class AliasingError(SolverError):
    def __init__(self, message, fraction=None):
        super().__init__(message)
        self.fraction = fraction


class NotStarlikeFallbackFailed(SolverError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class WeldNonConvergence(SolverError):
    def __init__(self, message, residual=None, progress=None):
        super().__init__(message)
        self.residual = residual
        self.progress = progress


class InversionFailure(SolverError):
    pass
