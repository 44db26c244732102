"""Exception hierarchy shared by the numerical core and the benchmark driver."""

import numpy as np


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


class NumericalBreakdown(np.linalg.LinAlgError):
    """A factorization or inverse failed, usually because of non-finite input."""


class NotPositiveDefinite(NumericalBreakdown):
    """Cholesky pivot was non-positive or non-finite."""


class SingularTriangular(NumericalBreakdown):
    """Triangular matrix has a zero or non-finite diagonal entry."""


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 1)."""


class ScheduleExceedsData(ConfigError):
    """Initial size plus the batch schedule needs more rows than the training set has."""


class DataError(Exception):
    """Problem with an input data file (CLI exit code 2)."""


class ParseError(DataError):
    pass


class RaggedRows(DataError):
    pass


class BadMagic(DataError):
    pass


class CountMismatch(DataError):
    pass


class TruncatedFile(DataError):
    pass
