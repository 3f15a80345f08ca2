"""Exception hierarchy shared by all effheis modules."""


class EffheisError(Exception):
    """Base class for all library errors."""


class NotHermitian(EffheisError):
    pass


class NotSymmetric(EffheisError):
    pass


class NotAntisymmetric(EffheisError):
    pass


class NotTildeAntisymmetric(EffheisError):
    pass


class NotTildeSymmetric(EffheisError):
    pass


class NoConvergence(EffheisError):
    pass


class Overflow(EffheisError):
    pass


class DimensionOverflow(EffheisError):
    pass


class DimensionMismatch(EffheisError):
    pass


class IndexOutOfRange(EffheisError):
    pass


class TooManyModes(EffheisError):
    pass


class UnsupportedOrder(EffheisError):
    pass


class StepTooLarge(EffheisError):
    pass


class GridMismatch(EffheisError):
    pass


class DegenerateFit(EffheisError):
    pass


class ConfigError(EffheisError):
    pass
