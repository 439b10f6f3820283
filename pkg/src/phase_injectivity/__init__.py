"""Phase Injectivity - certify injectivity of phase retrieval measurements for complex frames."""

from .certifiers import FrameCertifier, certify_frame, verify_certificate, witness_from_certificate
from .constraints import constraint_matrix, kernel_basis, kernel_dimension
from .core import (
    Frame,
    HermitianCoords,
    Indeterminate,
    Injective,
    NonInjective,
    NotFound,
    intensity_measurements,
    phase_distance,
    random_frame,
)
from .frame_io import load_frame, save_frame

__version__ = "0.1.0"
__all__ = [
    "Frame",
    "HermitianCoords",
    "Injective",
    "NonInjective",
    "Indeterminate",
    "NotFound",
    "FrameCertifier",
    "certify_frame",
    "verify_certificate",
    "witness_from_certificate",
    "constraint_matrix",
    "kernel_basis",
    "kernel_dimension",
    "intensity_measurements",
    "phase_distance",
    "random_frame",
    "load_frame",
    "save_frame",
]
