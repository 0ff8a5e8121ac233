"""Exception hierarchy shared by every qksvm module."""


class QksvmError(Exception):
    """Base class for all qksvm errors."""


class ValidationError(QksvmError, ValueError):
    """Malformed input: bad shapes, indices, labels or parameters."""


class CapacityError(QksvmError, ValueError):
    """A requested size exceeds what the inputs or the simulator allow."""


class DegenerateScaleError(QksvmError, ValueError):
    """Zero variance where a positive scale is required."""


class LoadError(QksvmError, ValueError):
    """A dataset file could not be parsed.

    ``row`` is the 1-based line number in the file, header included.
    """

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
