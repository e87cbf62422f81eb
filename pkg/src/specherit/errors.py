"""Exception hierarchy.

Errors split into two families that the CLI maps onto exit codes:
configuration problems (bad flags, bad config files, illegal parameter
ranges) and data/numerical problems (bad input data, degenerate models,
solver failures).
"""


class SpecheritError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SpecheritError, ValueError):
    """Invalid parameter value, range, or configuration document."""


class DataError(SpecheritError):
    """Invalid or degenerate input data."""


class ShapeMismatchError(DataError):
    """Array dimensions do not agree with the operation's contract."""


class DataParseError(DataError):
    """A data file failed to parse; message carries the line number."""


class MonomorphicColumnError(DataError):
    """Genotype columns with zero empirical variance cannot be standardized."""

    def __init__(self, columns):
        self.columns = tuple(int(c) for c in columns)
        super().__init__(
            f"monomorphic (zero-variance) columns cannot be standardized: "
            f"{list(self.columns)}"
        )


class RankDeficientCovariatesError(DataError):
    """Covariate matrix is not of full column rank."""


class DegenerateDataError(DataError):
    """Observations carry no signal (e.g. all-zero phenotype)."""


class NumericalFailureError(SpecheritError):
    """A numerical routine failed to converge or produced non-finite values."""


class UnidentifiableModelError(SpecheritError):
    """The likelihood carries no information about the heritability
    (all eigenvalues equal to one, or zero spectral variance)."""
