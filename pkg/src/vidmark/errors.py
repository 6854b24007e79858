"""Exception types shared across the toolkit.

All of these subclass ValueError so callers can catch broadly; the CLI maps
each class to a distinct exit code.
"""


class FormatError(ValueError):
    """Malformed file content: bad PGM header, corrupt or truncated stream."""


class DimensionError(ValueError):
    """Image or sequence dimensions violate a contract."""


class CapacityError(ValueError):
    """Watermark payload does not fit the cover frame."""


class UndefinedCorrelationError(ValueError):
    """Pearson correlation is undefined (an input has zero variance)."""
