"""
Certifier submodule with support for multiple backends.

Provides injectivity certification with built-in support for:
- det_m2n4: exact determinant test for four vectors in C^2
- det_m3n8: exact determinant test for eight vectors in C^3
- kernel_m2n3: kernel certificate for three vectors in C^2
- pencil_m3n7: cubic pencil certificate for seven vectors in C^3
- search: alternating projection search for any shape

Users can also provide custom certifier classes.
"""

from .base import BaseCertifier, CertifierMethod
from .certifier import CERTIFIER_REGISTRY, FrameCertifier, certify_frame, resolve_method
from .exact_small import (
    ExactShapeCertifier,
    M2N3KernelCertifier,
    M2N4DeterminantCertifier,
    M3N7PencilCertifier,
    M3N8DeterminantCertifier,
    cubic_discriminant,
    det_test_m2n4,
    det_test_m3n8,
    hermitian_determinant,
    kernel_cert_m2n3,
    pencil_coefficients,
    pencil_cubic_m3n7,
    real_polynomial_roots,
    solve_m3n8,
)
from .rank2search import (
    ComplexCertificate,
    ComplexSearchReport,
    HermitianSubspace,
    SearchCertifier,
    SearchOptions,
    alternating_search,
    project_linear,
    project_rank2,
)
from .verification import (
    CertificateDiagnostics,
    WitnessDiagnostics,
    build_certificate,
    check_witness,
    noninjective_from_candidates,
    verify_certificate,
    witness_from_certificate,
)

__all__ = [
    # Main API
    "FrameCertifier",
    "certify_frame",
    "resolve_method",
    "CERTIFIER_REGISTRY",
    # Base classes and types
    "BaseCertifier",
    "CertifierMethod",
    # Exact constructions
    "det_test_m2n4",
    "solve_m3n8",
    "det_test_m3n8",
    "kernel_cert_m2n3",
    "pencil_cubic_m3n7",
    "pencil_coefficients",
    "real_polynomial_roots",
    "cubic_discriminant",
    "hermitian_determinant",
    "ExactShapeCertifier",
    "M2N4DeterminantCertifier",
    "M3N8DeterminantCertifier",
    "M2N3KernelCertifier",
    "M3N7PencilCertifier",
    # Search
    "SearchOptions",
    "SearchCertifier",
    "alternating_search",
    "project_rank2",
    "project_linear",
    "HermitianSubspace",
    "ComplexCertificate",
    "ComplexSearchReport",
    # Verification
    "CertificateDiagnostics",
    "WitnessDiagnostics",
    "check_witness",
    "verify_certificate",
    "witness_from_certificate",
    "build_certificate",
    "noninjective_from_candidates",
]
