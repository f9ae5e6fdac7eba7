"""Exception hierarchy shared by every module."""


class ChoquetError(Exception):
    """Base class for all errors raised by this package."""


class NotAPartialOrder(ChoquetError):
    pass


class NotALattice(ChoquetError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NoTop(ChoquetError):
    pass


class NotDistributive(ChoquetError):
    pass


class SizeExceeded(ChoquetError):
    pass


class EmptyIndexSet(ChoquetError):
    pass


class InvalidSetFunction(ChoquetError):
    pass


class InvalidMeasure(ChoquetError):
    pass


class UnsupportedClassForDirection(ChoquetError):
    pass


class PrerequisiteClassFailed(ChoquetError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ClassificationFailed(ChoquetError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NonUniqueSolution(ChoquetError):
    """The inversion did not reproduce its input; signals an internal bug."""


class NotAnAntichain(ChoquetError):
    pass


class EvaluatorNotExact(ChoquetError):
    pass


class ConfigError(ChoquetError):
    pass
