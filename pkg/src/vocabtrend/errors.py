"""Exception hierarchy shared by the whole package.

The CLI maps these onto stable exit codes: InputError -> 2,
NumericError -> 3. Library code raises them directly.
"""


class VocabTrendError(Exception):
    """Base class for all errors raised by this package."""


class InputError(VocabTrendError):
    """Bad user input: missing files, malformed data, out-of-range arguments."""


class NumericError(VocabTrendError):
    """Numeric failure: non-finite values where finite ones are required."""
