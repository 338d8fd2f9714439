"""Exception hierarchy shared by all modules."""


class TempoCorrError(ValueError):
    """Base class for input/validation failures."""


class DimensionError(TempoCorrError):
    pass


class HermitianityError(TempoCorrError):
    pass


class PositivityError(TempoCorrError):
    pass


class TraceError(TempoCorrError):
    pass


class BasisError(TempoCorrError):
    pass


class UnitarityError(TempoCorrError):
    pass


class ProbabilityError(TempoCorrError):
    pass


class RangeError(TempoCorrError):
    pass
