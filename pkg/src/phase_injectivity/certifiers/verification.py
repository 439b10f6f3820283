"""
Certificate checking and witness extraction.

Everything here is independent of how a candidate Q was produced, so the
exact constructions and the numerical search share one acceptance test.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np

from ..config import CERTIFICATE_TOL, MEASUREMENT_MATCH_TOL, RANK_REL_TOL, WITNESS_SEPARATION_RATIO
from ..core import (
    Certificate,
    Frame,
    HermitianCoords,
    NonInjective,
    WitnessPair,
    coords_from_hermitian,
    hermitian_from_coords,
    intensity_measurements,
)
from ..exceptions import CertificateError, DimensionMismatchError

logger = logging.getLogger(__name__)


def as_complex_matrix(q) -> np.ndarray:
    """Dense complex float view of Hermitian coords, a sympy matrix or an array."""
    if isinstance(q, HermitianCoords):
        return hermitian_from_coords(q.to_float())
    if hasattr(q, "evalf"):
        return np.array(q.evalf().tolist(), dtype=complex)
    return np.asarray(q, dtype=complex)


@dataclass(frozen=True)
class CertificateDiagnostics:
    """Residuals of a candidate certificate against a frame."""

    linear_residual: float
    worst_row: int
    rank_residual: float
    hermitian_deviation: float
    frobenius_norm: float
    passed: bool
    reason: str

    def to_dict(self) -> dict:
        return {
            "linear_residual": self.linear_residual,
            "worst_row": self.worst_row,
            "rank_residual": self.rank_residual,
            "hermitian_deviation": self.hermitian_deviation,
            "frobenius_norm": self.frobenius_norm,
            "passed": self.passed,
            "reason": self.reason,
        }


def verify_certificate(frame: Frame, q, tol: float = CERTIFICATE_TOL) -> CertificateDiagnostics:
    """
    Recompute the residuals of a candidate certificate.

    ``linear_residual`` is ``max_n |phi_n* Q phi_n|`` on Q as given (row
    index 0-based), ``rank_residual`` the third largest eigenvalue
    magnitude. The check passes when Q is Hermitian and nonzero,
    ``linear_residual <= tol * ||Q||_F * max(1, max_n ||phi_n||^2)`` and
    ``rank_residual <= tol * ||Q||_F``.

    Args:
        frame: Frame the certificate refers to
        q: HermitianCoords, sympy matrix or complex array
        tol: Relative tolerance

    Returns:
        CertificateDiagnostics

    Raises:
        DimensionMismatchError: If Q is not M x M
    """
    matrix = as_complex_matrix(q)
    if matrix.shape != (frame.m, frame.m):
        raise DimensionMismatchError(f"Certificate shape {matrix.shape} does not match m={frame.m}")

    deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
    hermitian = (matrix + matrix.conj().T) / 2
    norm = float(np.linalg.norm(hermitian))

    phi = frame.complex_matrix()
    values = np.einsum("mn,mk,kn->n", phi.conj(), hermitian, phi)
    magnitudes = np.abs(values)
    worst_row = int(np.argmax(magnitudes))
    linear = float(magnitudes[worst_row])

    eigenvalues = np.sort(np.abs(np.linalg.eigvalsh(hermitian)))[::-1]
    rank = float(eigenvalues[2]) if eigenvalues.size > 2 else 0.0

    scale = max(1.0, float(np.max(np.sum(np.abs(phi) ** 2, axis=0))))
    if norm == 0.0:
        passed, reason = False, "zero matrix"
    elif deviation > tol * max(1.0, norm):
        passed, reason = False, "not Hermitian"
    elif linear > tol * norm * scale:
        passed, reason = False, f"linear residual too large at row {worst_row}"
    elif rank > tol * norm:
        passed, reason = False, "rank exceeds 2"
    else:
        passed, reason = True, "ok"

    return CertificateDiagnostics(
        linear_residual=linear,
        worst_row=worst_row,
        rank_residual=rank,
        hermitian_deviation=deviation,
        frobenius_norm=norm,
        passed=passed,
        reason=reason,
    )


def witness_from_certificate(q, tol: float = RANK_REL_TOL) -> WitnessPair:
    """
    Split a rank-2 certificate into colliding vectors.

    With ``Q = l_plus u u* + l_minus w w*`` (the two eigenvalues of largest
    magnitude, ``l_plus > 0 > l_minus``) return ``x = sqrt(l_plus) u`` and
    ``y = sqrt(-l_minus) w``, so ``xx* - yy*`` reproduces the rank-2 part
    of Q.

    Args:
        q: Hermitian certificate (coords, sympy matrix or array)
        tol: Eigenvalues below ``tol * ||Q||_F`` count as zero

    Returns:
        WitnessPair

    Raises:
        CertificateError: If Q is zero or semidefinite

    Example:
        >>> w = witness_from_certificate(np.array([[0, 1j], [-1j, 0]]))
        >>> np.allclose(w.outer_difference(), [[0, 1j], [-1j, 0]])
        True
    """
    matrix = as_complex_matrix(q)
    hermitian = (matrix + matrix.conj().T) / 2
    norm = float(np.linalg.norm(hermitian))
    if norm == 0.0:
        raise CertificateError("The zero matrix is not a certificate")

    eigenvalues, vectors = np.linalg.eigh(hermitian)
    top = np.argsort(-np.abs(eigenvalues), kind="stable")[:2]
    plus, minus = (top[0], top[1]) if eigenvalues[top[0]] >= eigenvalues[top[1]] else (top[1], top[0])
    if eigenvalues[plus] <= tol * norm or eigenvalues[minus] >= -tol * norm:
        raise CertificateError("certificate inconsistent with spanning frame")

    x = np.sqrt(eigenvalues[plus]) * vectors[:, plus]
    y = np.sqrt(-eigenvalues[minus]) * vectors[:, minus]
    return WitnessPair(x, y)


def build_certificate(frame: Frame, q, tol: float = CERTIFICATE_TOL) -> Certificate:
    """
    Normalize a candidate and attach its diagnostics.

    Rational coordinates are scaled so the first nonzero one equals 1,
    float ones to unit Frobenius norm.

    Raises:
        CertificateError: If the candidate fails ``verify_certificate``
    """
    coords = q if isinstance(q, HermitianCoords) else coords_from_hermitian(q, tol=max(tol, 1e-12))
    if coords.is_zero():
        raise CertificateError("The zero matrix is not a certificate")
    coords = coords.normalized()
    diagnostics = verify_certificate(frame, coords, tol)
    if not diagnostics.passed:
        raise CertificateError(f"Candidate rejected: {diagnostics.reason}")
    return Certificate(
        q=coords,
        linear_residual=diagnostics.linear_residual,
        rank_residual=diagnostics.rank_residual,
        frobenius_norm=diagnostics.frobenius_norm,
        worst_row=diagnostics.worst_row,
    )


@dataclass(frozen=True)
class WitnessDiagnostics:
    """Measurement agreement and separation of a witness pair."""

    measurement_gap: float
    separation: float
    passed: bool
    reason: str

    def to_dict(self) -> dict:
        return {
            "measurement_gap": self.measurement_gap,
            "separation": self.separation,
            "passed": self.passed,
            "reason": self.reason,
        }


def check_witness(
    frame: Frame,
    witness: WitnessPair,
    q,
    gap_tol: float = MEASUREMENT_MATCH_TOL,
    separation_ratio: float = WITNESS_SEPARATION_RATIO,
) -> WitnessDiagnostics:
    """
    Check that a witness pair really collides and is not a phase multiple.

    ``measurement_gap`` is ``||A(x) - A(y)||_inf / max(||A(x)||_inf, 1)``;
    ``separation`` is ``||xx* - yy*||_F / ||Q||_F``.

    Args:
        frame: Frame the witness refers to
        witness: Pair extracted from Q
        q: The certificate the pair was split from
        gap_tol: Largest accepted relative measurement gap
        separation_ratio: Smallest accepted separation

    Returns:
        WitnessDiagnostics
    """
    a_x = np.asarray(intensity_measurements(frame, witness.x), dtype=float)
    a_y = np.asarray(intensity_measurements(frame, witness.y), dtype=float)
    gap = float(np.max(np.abs(a_x - a_y))) / max(float(np.max(np.abs(a_x))), 1.0)

    norm = float(np.linalg.norm(as_complex_matrix(q)))
    separation = float(np.linalg.norm(witness.outer_difference())) / norm if norm > 0 else 0.0

    if gap > gap_tol:
        passed, reason = False, f"measurement gap {gap:.3e} exceeds {gap_tol:.1e}"
    elif separation < separation_ratio:
        passed, reason = False, f"witness separation {separation:.3e} below {separation_ratio}"
    else:
        passed, reason = True, "ok"
    return WitnessDiagnostics(gap, separation, passed, reason)


def noninjective_from_candidates(
    frame: Frame,
    candidates: Iterable,
    details: Optional[Dict[str, object]] = None,
    tol: float = CERTIFICATE_TOL,
) -> Optional[NonInjective]:
    """
    First candidate that verifies and splits into a sound witness, as a verdict.

    A witness must also pass ``check_witness``; its gap tolerance is
    ``max(MEASUREMENT_MATCH_TOL, tol)`` so a looser search tolerance is not
    rejected after the fact. Returns None when every candidate is rejected,
    which the exact constructions report as Indeterminate.
    """
    for index, q in enumerate(candidates):
        try:
            certificate = build_certificate(frame, q, tol)
            witness = witness_from_certificate(certificate.q)
        except CertificateError as e:
            logger.debug(f"Candidate {index} rejected: {e}")
            continue
        soundness = check_witness(frame, witness, certificate.q, max(MEASUREMENT_MATCH_TOL, tol))
        if not soundness.passed:
            logger.warning(f"Candidate {index} rejected: {soundness.reason}")
            continue
        return NonInjective(certificate, witness, dict(details or {}))
    return None
