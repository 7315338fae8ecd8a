"""Typed errors raised by the curlearn pipeline.

Every error carries enough context (row index, id, cluster id, ...) to
locate the offending input. The CLI maps any CurlearnError to exit code 3.
"""


class CurlearnError(Exception):
    """Base class for all typed curlearn errors."""


# embedding I/O


class MalformedHeader(CurlearnError):
    """File structure is invalid: bad magic, truncated data, or broken record."""


class DimensionMismatch(CurlearnError):
    """A row's vector length disagrees with the matrix dimension."""

    def __init__(self, row: int, row_id: str | None, expected: int, got: int):
        self.row = row
        self.row_id = row_id
        self.expected = expected
        self.got = got
        super().__init__(
            f"row {row}" + (f" (id {row_id!r})" if row_id else "")
            + f": expected {expected} components, got {got}"
        )


class DuplicateId(CurlearnError):
    """Two rows share the same sample identifier."""

    def __init__(self, row_id: str, first_row: int, second_row: int):
        self.row_id = row_id
        self.first_row = first_row
        self.second_row = second_row
        super().__init__(f"id {row_id!r} appears at rows {first_row} and {second_row}")


class NonFiniteValue(CurlearnError):
    """A vector contains NaN or infinity."""

    def __init__(self, row: int, row_id: str | None):
        self.row = row
        self.row_id = row_id
        super().__init__(
            f"non-finite value in row {row}" + (f" (id {row_id!r})" if row_id else "")
        )


class IoFailure(CurlearnError):
    """Underlying file write failed."""


# clustering


class KTooLarge(CurlearnError):
    """Requested more clusters than there are samples."""


class ShapeMismatch(CurlearnError):
    """Matrix, centroid, and assignment shapes are inconsistent."""


# difficulty


class EmptyCluster(CurlearnError):
    """A cluster has no assigned samples; signals upstream corruption."""


class InconsistentInputs(CurlearnError):
    """Matrix, cluster model, and level mapping do not describe the same data."""


# scheduler


class WindowNotFull(CurlearnError):
    """Average growth rate needs a full window of at least two values."""


class WindowTooShort(CurlearnError):
    """Instantaneous growth rate needs at least two values."""


class AlreadyTerminated(CurlearnError):
    """The scheduler has stopped and accepts no further epoch results."""


class InvalidMetric(CurlearnError):
    """Reported macro-F1 is NaN or outside [0, 1]."""


# metrics


class EmptyInput(CurlearnError):
    """Metric computation over zero samples."""


class SingleClassOnly(CurlearnError):
    """AUROC needs at least one positive and one negative example."""


class KExceedsClasses(CurlearnError):
    """precision@K with K larger than the number of classes."""
