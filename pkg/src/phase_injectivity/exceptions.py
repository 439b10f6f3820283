"""Exceptions raised by phase_injectivity.

All of them derive from a builtin so callers catching ``ValueError`` or
``RuntimeError`` keep working.
"""


class DimensionMismatchError(ValueError):
    """Vectors or matrices whose lengths/shapes do not agree."""


class NonHermitianError(ValueError):
    """A matrix that should be Hermitian is not."""


class FrameFormatError(ValueError):
    """A frame file could not be parsed."""


class UnsupportedShapeError(ValueError):
    """An exact test was requested for a frame of the wrong (M, N)."""


class CertificateError(ValueError):
    """A certificate is inconsistent with a spanning frame."""


class FrameConstructionError(RuntimeError):
    """Random frame sampling kept producing rank-deficient frames."""
