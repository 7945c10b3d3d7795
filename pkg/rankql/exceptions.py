"""
Errors raised by rankql.

Every error derives from :class:`RankQLError` so the command line can map
them to a single exit status. Errors caused by bad input also derive from
:class:`ValueError`.
"""


class RankQLError(Exception):
    """Base class for all rankql errors."""


# Input validation

class SampleTooSmall(RankQLError, ValueError):
    """Fewer observations than the operation needs."""


class NonFiniteInput(RankQLError, ValueError):
    """A NaN or infinite value reached an estimator."""


class LengthMismatch(RankQLError, ValueError):
    """Paired samples differ in length."""


class DegenerateVariable(RankQLError, ValueError):
    """A variable is constant, so its rank embedding carries no order information."""


class ConfigError(RankQLError, ValueError):
    """An experiment or run setting is outside its admissible range."""


# Numerical failures

class SingularInformation(RankQLError, ArithmeticError):
    """The Fisher information is zero or negative."""


class SingularDesign(RankQLError, ArithmeticError):
    """The embedded design matrix is collinear or numerically singular."""


class Underdetermined(RankQLError, ValueError):
    """No more observations than parameters."""


class NonPositiveVariance(RankQLError, ValueError):
    """A per-observation variance is zero, negative or not finite."""


class SingularInstruments(RankQLError, ArithmeticError):
    """The instruments are collinear or carry no information about the regressors."""


class Underidentified(RankQLError, ValueError):
    """Fewer instruments than regressors."""


# Data ingestion and dispatch

class ParseError(RankQLError, ValueError):
    """
    A CSV cell could not be read as a finite decimal number.

    Attributes
    ----------
    row : int
        1-based line number in the file (the header is line 1).
    column : str
        Header name of the offending column.
    """
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyFile(RankQLError, ValueError):
    """The CSV file has no header or no data rows."""


class RaggedRows(RankQLError, ValueError):
    """A CSV row has a different number of cells than the header."""
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class UnknownColumn(RankQLError, KeyError):
    """A requested column is not in the dataset."""
    def __str__(self):
        return str(self.args[0]) if self.args else ''


class UnknownExperiment(RankQLError, KeyError):
    """No simulation experiment is registered under the requested name."""
    def __str__(self):
        return str(self.args[0]) if self.args else ''
