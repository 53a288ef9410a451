"""Exception types shared across the package."""


class UrbtexError(Exception):
    """Base class for all urbtex errors."""


class ImageTooSmall(UrbtexError):
    """Raster has no whole block at the requested block size."""


class InvalidSpec(UrbtexError):
    """Synthetic raster specification is inconsistent (bad dimensions,
    overlapping or gappy composite regions, out-of-range parameters)."""


class UnsupportedFormat(UrbtexError):
    """File is not one of the raster formats this package reads."""


class CorruptFile(UrbtexError):
    """File matched a known format but its contents are broken.

    ``offset`` is the byte position where the damage was detected, or None
    when the decoder cannot pin it down.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class BitDepthUnsupported(UrbtexError):
    """Sample depth other than 8 bits per channel (16-bit inputs are
    rejected explicitly rather than truncated)."""


class EmptyReport(UrbtexError):
    """Report serialization called with no rows."""
