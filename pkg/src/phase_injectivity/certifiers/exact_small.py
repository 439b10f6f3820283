"""
Explicit constructions for small frames.

- (2, 4): the 4 x 4 constraint determinant vanishes exactly on
  non-injective frames.
- (3, 8): the alternating 8 x 8 minors of the constraint matrix give the
  unique (up to scale) kernel element D; the frame is non-injective
  exactly when the 3 x 3 Hermitian matrix built from D is singular.
- (2, 3): the kernel is never trivial, and every 2 x 2 matrix has rank
  at most 2, so any kernel element is a certificate.
- (3, 7): the kernel is a pencil ``Q0 + t Q1``; its determinant is a real
  cubic in t, and a real root gives a singular, hence rank-2, certificate.

Rational frames are handled with exact arithmetic throughout except for
the cubic pencil, whose roots are found in floating point.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq, newton
from sympy import expand

from ..config import CERTIFICATE_TOL, CERTIFIER_CONFIG, CUBIC_REFINE_TOL, DET_REL_TOL
from ..constraints import constraint_matrix, kernel_basis
from ..core import (
    Frame,
    HermitianCoords,
    Indeterminate,
    Injective,
    NonInjective,
    Verdict,
    hermitian_from_coords,
)
from ..exceptions import UnsupportedShapeError
from ..utils import exact_det
from .base import BaseCertifier
from .rank2search import SearchOptions, alternating_search
from .verification import noninjective_from_candidates

logger = logging.getLogger(__name__)


def _require_shape(frame: Frame, m: int, n: int) -> None:
    if (frame.m, frame.n) != (m, n):
        raise UnsupportedShapeError(f"Expected a frame with m={m}, n={n}, got m={frame.m}, n={frame.n}")


def _hadamard_bound(rows: np.ndarray) -> float:
    return float(np.prod(np.linalg.norm(rows, axis=1)))


def _certificate_failure(frame: Frame, reason: str, details: dict) -> Indeterminate:
    logger.warning(f"m={frame.m}, n={frame.n}: {reason}")
    return Indeterminate(reason, details)


def det_test_m2n4(frame: Frame, det_rel_tol: float = DET_REL_TOL) -> Verdict:
    """
    Exact injectivity test for four vectors in C^2.

    The 4 x 4 constraint matrix is square; a nonzero determinant means the
    kernel is trivial. Otherwise any kernel element is a certificate.

    Args:
        frame: Frame with m=2, n=4
        det_rel_tol: Float determinants below this times the Hadamard bound count as zero

    Returns:
        Injective, NonInjective, or Indeterminate for float frames that are
        numerically singular without a usable kernel element

    Raises:
        UnsupportedShapeError: For any other shape

    Example:
        >>> frame = Frame([[1, 0, 1, 1], [0, 1, 1, 0]], [[0, 0, 0, 0], [0, 0, 0, 1]], "rational")
        >>> det_test_m2n4(frame).details["determinant"]
        4
    """
    _require_shape(frame, 2, 4)
    cm = constraint_matrix(frame)
    details = {"method": "det_m2n4"}

    if frame.mode == "rational":
        det = exact_det(cm.to_rows())
        details["determinant"] = det
        if det != 0:
            return Injective("constraint determinant is nonzero", details)
        basis = kernel_basis(cm, "rational")
        verdict = noninjective_from_candidates(frame, basis.basis, details)
        if verdict is None:
            return _certificate_failure(frame, "no kernel element splits into a witness", details)
        return verdict

    rows = cm.entries.astype(float)
    det = float(np.linalg.det(rows))
    details["determinant"] = det
    if abs(det) > det_rel_tol * _hadamard_bound(rows):
        return Injective("constraint determinant is nonzero", details)

    basis = kernel_basis(cm, "float")
    verdict = noninjective_from_candidates(frame, basis.basis, details)
    if verdict is None:
        details["condition_number"] = float(np.linalg.cond(rows))
        return _certificate_failure(frame, "determinant numerically zero but no certificate verified", details)
    return verdict


def solve_m3n8(frame: Frame) -> Tuple[np.ndarray, HermitianCoords]:
    """
    Kernel element of the 8 x 9 constraint matrix J by alternating minors.

    ``D_k = (-1)^k det(J without column k)`` for k = 1..9, so ``J D = 0``
    (the expansion of a 9 x 9 determinant with a repeated row). D read in
    Hermitian coordinate order is the matrix
    ``[[D1, D2+iD7, D3+iD8], [D2-iD7, D4, D5+iD9], [D3-iD8, D5-iD9, D6]]``.

    Args:
        frame: Frame with m=3, n=8

    Returns:
        Tuple of D (object array of Rationals in rational mode) and the
        Hermitian coordinates built from it

    Raises:
        UnsupportedShapeError: For any other shape
    """
    _require_shape(frame, 3, 8)
    cm = constraint_matrix(frame)

    if frame.mode == "rational":
        rows = cm.to_rows()
        minors = [exact_det([row[:k] + row[k + 1 :] for row in rows]) for k in range(9)]
        d = np.array([(-1) ** (k + 1) * minor for k, minor in enumerate(minors)], dtype=object)
    else:
        jac = cm.entries.astype(float)
        d = np.array([(-1) ** (k + 1) * np.linalg.det(np.delete(jac, k, axis=1)) for k in range(9)])

    return d, HermitianCoords(3, d, frame.mode)


def hermitian_determinant(q: HermitianCoords):
    """
    Determinant of a Hermitian matrix; a Rational in rational mode.

    Raises:
        ArithmeticError: If the exact determinant is not real
    """
    if q.mode == "rational":
        value = expand(hermitian_from_coords(q).det(method="berkowitz"))
        real, imag = value.as_real_imag()
        if imag != 0:
            raise ArithmeticError(f"Hermitian determinant has imaginary part {imag}")
        return real
    return float(np.linalg.det(hermitian_from_coords(q)).real)


def det_test_m3n8(frame: Frame, det_rel_tol: float = DET_REL_TOL) -> Verdict:
    """
    Exact injectivity test for eight vectors in C^3.

    The frame is injective iff the matrix Q built from ``solve_m3n8`` is
    nonsingular. A vanishing D leaves the test inconclusive.

    Raises:
        UnsupportedShapeError: For any other shape
    """
    d, q = solve_m3n8(frame)
    details = {"method": "det_m3n8"}

    if frame.mode == "rational":
        if q.is_zero():
            return _certificate_failure(frame, "Jacobian rank deficient", details)
        det = hermitian_determinant(q)
        details["determinant"] = det
        if det != 0:
            return Injective("determinant of the kernel matrix is nonzero", details)
    else:
        rows = constraint_matrix(frame).entries.astype(float)
        if np.linalg.norm(d) <= det_rel_tol * _hadamard_bound(rows):
            return _certificate_failure(frame, "Jacobian rank deficient", details)
        matrix = hermitian_from_coords(q)
        det = hermitian_determinant(q)
        details["determinant"] = det
        if abs(det) > det_rel_tol * _hadamard_bound(matrix):
            return Injective("determinant of the kernel matrix is nonzero", details)

    verdict = noninjective_from_candidates(frame, [q], details)
    if verdict is None:
        return _certificate_failure(frame, "determinant vanishes but the certificate did not verify", details)
    return verdict


def kernel_cert_m2n3(frame: Frame) -> NonInjective:
    """
    Certificate for three vectors in C^2, which are never injective.

    Raises:
        UnsupportedShapeError: For any other shape
        RuntimeError: If no kernel element yields a witness

    Example:
        >>> frame = Frame([[1, 0, 1], [0, 1, 1]], [[0, 0, 0], [0, 0, 0]], "rational")
        >>> kernel_cert_m2n3(frame).certificate.q.to_list()
        ['0/1', '0/1', '0/1', '1/1']
    """
    _require_shape(frame, 2, 3)
    basis = kernel_basis(constraint_matrix(frame), frame.mode)
    if basis.dim == 0:
        raise RuntimeError("Kernel of a 3 x 4 system is empty")
    verdict = noninjective_from_candidates(
        frame, basis.basis, {"method": "kernel_m2n3", "kernel_dimension": basis.dim}
    )
    if verdict is None:
        raise RuntimeError("No kernel element of the 3 x 4 system splits into a witness")
    return verdict


def pencil_coefficients(q0: np.ndarray, q1: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Coefficients (ascending) of ``p(t) = det(Q0 + t Q1)`` by interpolation.

    Returns:
        Real coefficients and the largest imaginary part discarded
    """
    ts = np.array([-1.0, 0.0, 1.0, 2.0])
    values = np.array([np.linalg.det(q0 + t * q1) for t in ts])
    coeffs = np.linalg.solve(np.vander(ts, 4, increasing=True), values)
    return coeffs.real, float(np.max(np.abs(coeffs.imag)))


def cubic_discriminant(coeffs: np.ndarray) -> float:
    """Discriminant of ``c0 + c1 t + c2 t^2 + c3 t^3``."""
    d, c, b, a = coeffs
    return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2


def _refine_root(poly: Polynomial, t0: float, tol: float) -> float:
    deriv = poly.deriv()
    try:
        t = float(newton(poly, t0, fprime=deriv, tol=tol, maxiter=50))
    except (RuntimeError, ZeroDivisionError):
        t = t0
    width = 1e-8 * (1.0 + abs(t))
    lo, hi = t - width, t + width
    if poly(lo) * poly(hi) < 0:
        t = float(brentq(poly, lo, hi, xtol=tol))
    return t


def real_polynomial_roots(coeffs: np.ndarray, refine_tol: float = CUBIC_REFINE_TOL) -> List[float]:
    """
    Real roots of a real polynomial of degree <= 3, refined.

    Cubics are classified by their discriminant: nonnegative means three
    real roots, negative means exactly one. Leading coefficients below
    ``1e-9`` times the largest one are treated as zero.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    scale = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    if scale == 0.0:
        return []
    degree = len(coeffs) - 1
    while degree > 0 and abs(coeffs[degree]) <= DET_REL_TOL * scale:
        degree -= 1
    if degree == 0:
        return []

    poly = Polynomial(coeffs[: degree + 1])
    roots = poly.roots()
    if degree == 3:
        if cubic_discriminant(coeffs) >= 0:
            real = list(roots.real)
        else:
            real = [roots[np.argmin(np.abs(roots.imag))].real]
    else:
        real = [r.real for r in roots if abs(r.imag) <= 1e-9 * (1.0 + abs(r))]
    return sorted(_refine_root(poly, float(t), refine_tol) for t in real)


def _rank_gap(q: np.ndarray) -> float:
    eigenvalues = np.sort(np.abs(np.linalg.eigvalsh(q)))
    return float(eigenvalues[0] / np.linalg.norm(q))


def pencil_cubic_m3n7(
    frame: Frame,
    search_options: Optional[SearchOptions] = None,
    refine_tol: float = CUBIC_REFINE_TOL,
) -> Verdict:
    """
    Certificate for seven vectors in C^3 from a real root of the kernel pencil.

    With kernel basis {Q0, Q1}, ``p(t) = det(Q0 + t Q1)`` is a real cubic and
    has a real root t*, so ``Q0 + t* Q1`` is singular. When the leading
    coefficient vanishes, Q1 itself is singular and is tried too. The
    candidate with the smallest eigenvalue ratio is verified first.

    Frames whose kernel is not two-dimensional fall back to the
    alternating projection search; Indeterminate is returned only if that
    also fails. Never returns Injective.

    Raises:
        UnsupportedShapeError: For any other shape
    """
    _require_shape(frame, 3, 7)
    basis = kernel_basis(constraint_matrix(frame), frame.mode)
    details = {"method": "pencil_m3n7", "kernel_dimension": basis.dim}

    verdict = None
    if basis.dim == 2:
        q0, q1 = (hermitian_from_coords(b.to_float()) for b in basis.basis)
        coeffs, max_imag = pencil_coefficients(q0, q1)
        details["max_imag_coefficient"] = max_imag
        if max_imag > 1e-12:
            logger.warning(f"Pencil determinant has imaginary coefficients up to {max_imag:.3e}")

        candidates = [q0 + t * q1 for t in real_polynomial_roots(coeffs, refine_tol)]
        scale = float(np.max(np.abs(coeffs)))
        if scale == 0.0:
            candidates.append(q0)
        elif abs(coeffs[3]) <= DET_REL_TOL * scale:
            logger.warning("Degenerate cubic pencil, using the second basis element")
            candidates.append(q1)
        candidates.sort(key=_rank_gap)
        verdict = noninjective_from_candidates(frame, candidates, details, CERTIFICATE_TOL)
        if verdict is not None:
            return verdict

    logger.warning(f"Pencil construction failed (kernel dimension {basis.dim}), falling back to search")
    fallback = alternating_search(frame, search_options or SearchOptions())
    if isinstance(fallback, NonInjective):
        return NonInjective(fallback.certificate, fallback.witness, {**details, "fallback": "search"})
    return _certificate_failure(frame, "pencil construction and search fallback found no certificate", details)


class ExactShapeCertifier(BaseCertifier):
    """Base for certifiers tied to the single frame shape in their CERTIFIER_CONFIG entry."""

    def supports(self, m: int, n: int) -> bool:
        return (m, n) == CERTIFIER_CONFIG[self.method]["shape"]

    def setting(self, key: str):
        """A value from this method's CERTIFIER_CONFIG entry."""
        return CERTIFIER_CONFIG[self.method][key]


class M2N4DeterminantCertifier(ExactShapeCertifier):
    """Exact determinant test for (m, n) = (2, 4)."""

    method = "det_m2n4"

    def certify(self, frame: Frame) -> Verdict:
        self.check_shape(frame)
        return det_test_m2n4(frame, self.setting("det_rel_tol"))


class M3N8DeterminantCertifier(ExactShapeCertifier):
    """Exact determinant test for (m, n) = (3, 8)."""

    method = "det_m3n8"

    def certify(self, frame: Frame) -> Verdict:
        self.check_shape(frame)
        return det_test_m3n8(frame, self.setting("det_rel_tol"))


class M2N3KernelCertifier(ExactShapeCertifier):
    """Kernel certificate for (m, n) = (2, 3)."""

    method = "kernel_m2n3"

    def certify(self, frame: Frame) -> Verdict:
        self.check_shape(frame)
        return kernel_cert_m2n3(frame)


class M3N7PencilCertifier(ExactShapeCertifier):
    """Cubic pencil certificate for (m, n) = (3, 7); extra options go to the search fallback."""

    method = "pencil_m3n7"

    def certify(self, frame: Frame) -> Verdict:
        self.check_shape(frame)
        options = SearchOptions(**self.kwargs) if self.kwargs else None
        return pencil_cubic_m3n7(frame, options, self.setting("refine_tol"))
