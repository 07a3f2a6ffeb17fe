"""Structured exceptions shared across the package.

Every error carries a stable ``code`` string so the CLI can emit
machine-parseable failure lines.
"""


class PanoroomError(Exception):
    code = "error"


class CoordinateRangeError(PanoroomError):
    """Continuous pixel coordinate outside the image domain."""

    code = "coordinate-range"


class ShapeMismatchError(PanoroomError):
    """Maps that must share a grid do not."""

    code = "shape-mismatch"


class CornerExtractionError(PanoroomError):
    """Fewer than four layout corners found; the room cannot be closed."""

    code = "corner-extraction"


class PolygonError(PanoroomError):
    """Floor-plan polygon is degenerate, non-simple, or excludes the camera."""

    code = "polygon"


class NoValidSamplesError(PanoroomError):
    """An aggregation found no valid pixels or columns to work with."""

    code = "no-valid-samples"


class PfmError(PanoroomError):
    code = "pfm"


class PfmMagicError(PfmError):
    code = "pfm-magic"


class PfmHeaderError(PfmError):
    code = "pfm-header"


class PfmTruncatedError(PfmError):
    code = "pfm-truncated"
