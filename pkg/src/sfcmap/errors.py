"""Exception types raised across the package."""


class SfcmapError(Exception):
    """Base class for every error this package raises deliberately."""


class IndexOutOfRange(SfcmapError):
    """A linear curve index lies outside [0, length)."""


class CoordOutOfRange(SfcmapError):
    """A lattice coordinate has the wrong dimensionality or a component >= side."""


class CapacityExceeded(SfcmapError):
    """An exact or materialized computation would exceed its configured limit."""


class LengthMismatch(SfcmapError):
    """Two curves cannot be composed because their point counts differ."""


class ShapeMismatch(SfcmapError):
    """A grid's shape does not match the mapping or operation it was given to."""


class MalformedRecord(SfcmapError):
    """A fixed-column atom record could not be parsed.

    `line_number` is 1-based.
    """

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DegenerateGeometry(SfcmapError):
    """Too few atoms, or a covariance too rank-deficient, to define alignment axes."""


class UnknownElement(SfcmapError):
    """An element symbol has no radius entry and no default radius was configured."""


class BinvoxError(SfcmapError):
    """Base for binvox stream errors; `offset` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class BadMagic(BinvoxError):
    pass


class BadHeader(BinvoxError):
    pass


class TruncatedPayload(BinvoxError):
    pass


class RunOverflow(BinvoxError):
    pass


class CorruptTensorFile(SfcmapError):
    """A tensor file or its sidecar header is unreadable or inconsistent."""


class MissingProvenance(SfcmapError):
    """A tensor file header lacks the mapping information needed to decode it."""


class BadFractions(SfcmapError):
    """Split fractions are not three positive numbers summing to 1."""


class UnsupportedShape(SfcmapError):
    """The input tensor has a shape the command cannot render or process."""
