"""Exception hierarchy shared by all modules."""


class UniflagError(Exception):
    """Base class for every error raised by this package."""


class FileUnreadable(UniflagError):
    """Input file is missing or cannot be opened."""


class MissingTargetColumn(UniflagError):
    """Requested target column is not in the CSV header."""


class NonBinaryTarget(UniflagError):
    """A target cell is not exactly 0 or 1."""


class UnparseableCell(UniflagError):
    """A non-missing cell does not parse as a finite real."""


class EmptyColumn(UniflagError):
    """Column statistics requested on a column with no present values."""


class InsufficientData(UniflagError):
    """Too few present values (or an empty baseline) for detection."""


class UnknownVariable(UniflagError):
    """A rule refers to a variable the dataset does not contain."""


class DegenerateTarget(UniflagError):
    """An operation requiring both classes saw only one."""


class TooFewRows(UniflagError):
    """Not enough rows per class for the requested fold count."""


class EmptyDistribution(UniflagError):
    """Mode requested for an empty collection of bootstrap cuts."""


class FileUnwritable(UniflagError):
    """Output path cannot be written."""


class ConstantColumnWarning(UserWarning):
    """Noise injection hit a zero-variance column; its cells stay unchanged."""
