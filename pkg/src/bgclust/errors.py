"""Exception types shared across the package.

The CLI maps these onto exit codes: parameter problems are usage errors,
data problems come from input files, numeric problems from the solvers.
"""


class DataError(ValueError):
    """Base class for problems with input data files."""


class ParseError(DataError):
    """A line of an input file could not be parsed; message carries the line number."""


class ValidationError(DataError):
    """Parsed data violates a documented precondition (bad weight, empty file, ...)."""


class ParameterError(ValueError):
    """A caller-supplied parameter is out of its documented range."""


class NumericError(RuntimeError):
    """A numeric sanity check failed during computation."""
