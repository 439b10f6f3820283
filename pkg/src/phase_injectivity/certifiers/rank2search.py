"""
Numerical search for rank-2 points of L by alternating projections.

Iterates ``Q <- normalize(P_L(P_rank2(Q)))`` from random starts inside L,
then polishes the best iterate by nonlinear least squares in factor
coordinates. A certificate is accepted only if ``verify_certificate``
passes. Failure to find one is reported as NotFound, which is not a proof
of injectivity unless L = 0.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import least_squares

from ..config import (
    CERTIFIER_CONFIG,
    EMPTY_KERNEL_REASON,
    NOT_FOUND_REASON,
    SEARCH_DEFAULTS,
    SearchMode,
)
from ..constraints import KernelBasis, complex_kernel_basis, constraint_matrix, kernel_basis
from ..core import (
    BudgetReport,
    Frame,
    HermitianCoords,
    Injective,
    NotFound,
    Verdict,
    coords_from_hermitian,
    frobenius_weights,
    hermitian_from_coords,
    outer_difference,
)
from .base import BaseCertifier
from .verification import noninjective_from_candidates, verify_certificate

logger = logging.getLogger(__name__)

SINGLE_ELEMENT_REASON = "L_Φ is spanned by a single matrix of rank > 2"


@dataclass(frozen=True)
class SearchOptions:
    """Budget and acceptance threshold of the alternating projection search."""

    mode: SearchMode = "hermitian"
    tol: float = SEARCH_DEFAULTS["tol"]
    max_iters: int = SEARCH_DEFAULTS["max_iters"]
    restarts: int = SEARCH_DEFAULTS["restarts"]
    seed: int = 0
    polish: bool = SEARCH_DEFAULTS["polish"]
    stagnation_tol: float = SEARCH_DEFAULTS["stagnation_tol"]

    def __post_init__(self):
        if self.mode not in ("hermitian", "complex"):
            raise ValueError(f"Unknown search mode: {self.mode}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be at least 1, got {self.restarts}")


def project_rank2(q: np.ndarray, mode: SearchMode = "hermitian") -> np.ndarray:
    """
    Nearest matrix of rank at most 2 in Frobenius norm.

    Hermitian mode keeps the two eigenvalues of largest magnitude (ties go
    to the lower index of the ascending eigenvalue order); complex mode
    truncates the SVD.

    Example:
        >>> np.round(project_rank2(np.diag([3.0, 2.0, 1.0])).real, 12)
        array([[3., 0., 0.],
               [0., 2., 0.],
               [0., 0., 0.]])
    """
    q = np.asarray(q, dtype=complex)
    if mode == "complex":
        u, s, vh = np.linalg.svd(q)
        return (u[:, :2] * s[:2]) @ vh[:2]
    eigenvalues, vectors = np.linalg.eigh(q)
    keep = np.argsort(-np.abs(eigenvalues), kind="stable")[:2]
    kept = vectors[:, keep]
    return (kept * eigenvalues[keep]) @ kept.conj().T


class HermitianSubspace:
    """
    Frobenius-orthogonal projector onto the span of a kernel basis.

    Coordinates are rescaled by the square roots of the Frobenius weights
    and re-orthonormalized, so the projection is orthogonal for
    ``Re tr(A* B)`` rather than for the plain coordinate inner product.
    """

    def __init__(self, basis: KernelBasis):
        self.m = basis.m
        self.sqrt_w = np.sqrt(frobenius_weights(self.m))
        if basis.dim == 0:
            self.onb = np.zeros((self.m * self.m, 0))
        else:
            weighted = (basis.as_array() * self.sqrt_w).T
            self.onb, _ = np.linalg.qr(weighted)

    @property
    def dim(self) -> int:
        return self.onb.shape[1]

    def __call__(self, q: np.ndarray) -> np.ndarray:
        c = coords_from_hermitian(q, tol=1e-8).coords * self.sqrt_w
        projected = self.onb @ (self.onb.T @ c) / self.sqrt_w
        return hermitian_from_coords(_float_coords(self.m, projected))

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        """Uniformly random unit-Frobenius matrix in the subspace."""
        c = self.onb @ rng.standard_normal(self.dim) / self.sqrt_w
        q = hermitian_from_coords(_float_coords(self.m, c))
        return q / np.linalg.norm(q)


def _float_coords(m: int, values: np.ndarray) -> HermitianCoords:
    return HermitianCoords(m, values, "float")


def project_linear(q: np.ndarray, basis: KernelBasis) -> np.ndarray:
    """
    Frobenius-orthogonal projection of a Hermitian matrix onto span(basis).

    An empty basis projects everything to zero.
    """
    q = np.asarray(q, dtype=complex)
    if basis.dim == 0:
        return np.zeros_like(q)
    return HermitianSubspace(basis)(q)


def _rank_residual(q: np.ndarray, mode: SearchMode) -> float:
    norm = np.linalg.norm(q)
    if norm == 0:
        return np.inf
    if mode == "complex":
        s = np.linalg.svd(q, compute_uv=False)
    else:
        s = np.sort(np.abs(np.linalg.eigvalsh(q)))[::-1]
    return float(s[2] / norm) if s.size > 2 else 0.0


def _polish_hermitian(frame: Frame, q: np.ndarray) -> np.ndarray:
    """
    Least-squares refinement of ``Q = xx* - yy*`` with ``<x, y> = 0``.

    Residuals are the measurement differences scaled by ``||phi_n||^2``,
    the real and imaginary part of ``<x, y>`` and ``||x||^2 + ||y||^2 - 1``.
    """
    m = frame.m
    phi = frame.complex_matrix()
    scale = np.sum(np.abs(phi) ** 2, axis=0)
    eigenvalues, vectors = np.linalg.eigh(q)
    top = np.argsort(-np.abs(eigenvalues), kind="stable")[:2]
    i, j = (top[0], top[1]) if eigenvalues[top[0]] >= eigenvalues[top[1]] else (top[1], top[0])
    x0 = np.sqrt(abs(eigenvalues[i])) * vectors[:, i]
    y0 = np.sqrt(abs(eigenvalues[j])) * vectors[:, j]
    z0 = np.concatenate([x0.real, x0.imag, y0.real, y0.imag])

    def unpack(z):
        x = z[:m] + 1j * z[m : 2 * m]
        y = z[2 * m : 3 * m] + 1j * z[3 * m :]
        return x, y

    def residuals(z):
        x, y = unpack(z)
        gap = (np.abs(phi.conj().T @ x) ** 2 - np.abs(phi.conj().T @ y) ** 2) / scale
        inner = np.vdot(y, x)
        norm = np.vdot(x, x).real + np.vdot(y, y).real - 1.0
        return np.concatenate([gap, [inner.real, inner.imag, norm]])

    result = least_squares(residuals, z0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
    x, y = unpack(result.x)
    return outer_difference(x, y)


def _polish_complex(frame: Frame, q: np.ndarray) -> np.ndarray:
    """Least-squares refinement of ``Q = P R^T`` with P, R in C^{M x 2}."""
    m = frame.m
    phi = frame.complex_matrix()
    scale = np.sum(np.abs(phi) ** 2, axis=0)
    u, s, vh = np.linalg.svd(q)
    p0 = u[:, :2] * s[:2]
    r0 = vh[:2].T
    z0 = np.concatenate([p0.real.ravel(), p0.imag.ravel(), r0.real.ravel(), r0.imag.ravel()])
    k = 2 * m

    def unpack(z):
        p = (z[:k] + 1j * z[k : 2 * k]).reshape(m, 2)
        r = (z[2 * k : 3 * k] + 1j * z[3 * k :]).reshape(m, 2)
        return p @ r.T

    def residuals(z):
        candidate = unpack(z)
        values = np.einsum("mn,mk,kn->n", phi.conj(), candidate, phi) / scale
        norm = np.linalg.norm(candidate) ** 2 - 1.0
        return np.concatenate([values.real, values.imag, [norm]])

    result = least_squares(residuals, z0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
    return unpack(result.x)


@dataclass(frozen=True, eq=False)
class ComplexCertificate:
    """A nonzero complex Q of rank <= 2 with ``phi_n* Q phi_n = 0`` for all n."""

    q: np.ndarray
    linear_residual: float
    rank_residual: float

    def to_dict(self) -> dict:
        return {
            "q_real": np.real(self.q).tolist(),
            "q_imag": np.imag(self.q).tolist(),
            "linear_residual": float(self.linear_residual),
            "rank_residual": float(self.rank_residual),
        }


@dataclass(frozen=True, eq=False)
class ComplexSearchReport:
    """Outcome of a complex-mode search: a complex rank-2 point of L, or the budget spent."""

    found: bool
    budget: BudgetReport
    certificate: Optional[ComplexCertificate] = None
    details: dict = field(default_factory=dict)

    @property
    def tag(self) -> str:
        return "ComplexRank2Found" if self.found else "NotFound"

    def to_dict(self) -> dict:
        payload = {"verdict": self.tag, "budget": self.budget.to_dict(), **self.details}
        if self.certificate is not None:
            payload["certificate"] = self.certificate.to_dict()
        return payload


def _complex_linear_residual(phi: np.ndarray, q: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.sum(np.abs(phi) ** 2, axis=0))))
    values = np.einsum("mn,mk,kn->n", phi.conj(), q, phi)
    return float(np.max(np.abs(values)) / (np.linalg.norm(q) * scale))


def _run_restart(
    frame: Frame,
    start: np.ndarray,
    project: Callable[[np.ndarray], np.ndarray],
    opts: SearchOptions,
) -> Tuple[np.ndarray, int]:
    """Alternating projections from one start; returns the last iterate in L."""
    q = start
    iterations = 0
    for iterations in range(1, opts.max_iters + 1):
        projected = project(project_rank2(q, opts.mode))
        norm = np.linalg.norm(projected)
        if norm == 0:
            break
        nxt = projected / norm
        step = np.linalg.norm(nxt - q)
        q = nxt
        if _rank_residual(q, opts.mode) <= opts.tol or step < opts.stagnation_tol:
            break
    return q, iterations


def alternating_search(frame: Frame, opts: Optional[SearchOptions] = None):
    """
    Search for a nonzero rank-2 matrix in L.

    Restarts run in order with generator ``default_rng([seed, restart])``
    and stop at the first success, so results are reproducible.

    Args:
        frame: The frame to test
        opts: Search options (defaults from ``SEARCH_DEFAULTS``)

    Returns:
        Hermitian mode: Injective if L = 0, NonInjective with a verified
        certificate, or NotFound with the budget spent. Complex mode:
        ComplexSearchReport.

    Example:
        >>> frame = random_frame(2, 3, seed=1)
        >>> alternating_search(frame).tag
        'NonInjective'
    """
    opts = opts or SearchOptions()
    frame = frame.to_float()
    phi = frame.complex_matrix()

    if opts.mode == "complex":
        return _complex_search(frame, phi, opts)

    basis = kernel_basis(constraint_matrix(frame), "float")
    details = {"method": "search", "kernel_dimension": basis.dim}
    if basis.dim == 0:
        logger.info("Kernel is trivial, intensity map is injective")
        return Injective(EMPTY_KERNEL_REASON, details)

    subspace = HermitianSubspace(basis)
    best_linear, best_rank = np.inf, np.inf

    if basis.dim == 1:
        q = hermitian_from_coords(basis.basis[0])
        verdict = noninjective_from_candidates(frame, [q], {**details, "restart": 0, "iterations": 0}, opts.tol)
        if verdict is not None:
            return verdict
        diagnostics = verify_certificate(frame, q, opts.tol)
        budget = BudgetReport(
            restarts=0,
            iterations=0,
            best_linear_residual=diagnostics.linear_residual,
            best_rank_residual=diagnostics.rank_residual / max(diagnostics.frobenius_norm, 1e-300),
            reason=SINGLE_ELEMENT_REASON,
            kernel_dimension=1,
        )
        return NotFound(budget, details)

    total_iterations = 0
    for restart in range(opts.restarts):
        rng = np.random.default_rng([opts.seed, restart])
        q, iterations = _run_restart(frame, subspace.random_point(rng), subspace, opts)
        total_iterations += iterations

        candidates = [q]
        if opts.polish:
            try:
                candidates.append(_polish_hermitian(frame, q))
            except (ValueError, np.linalg.LinAlgError) as e:
                logger.debug(f"Polish failed on restart {restart}: {e}")

        for candidate in candidates:
            diagnostics = verify_certificate(frame, candidate, opts.tol)
            norm = max(diagnostics.frobenius_norm, 1e-300)
            best_linear = min(best_linear, diagnostics.linear_residual / norm)
            best_rank = min(best_rank, diagnostics.rank_residual / norm)

        verdict = noninjective_from_candidates(
            frame, candidates, {**details, "restart": restart, "iterations": total_iterations}, opts.tol
        )
        if verdict is not None:
            logger.info(f"Certificate found on restart {restart} after {total_iterations} iterations")
            return verdict
        logger.debug(f"Restart {restart}: no certificate after {iterations} iterations")

    logger.warning(f"No certificate found after {opts.restarts} restarts")
    budget = BudgetReport(
        restarts=opts.restarts,
        iterations=total_iterations,
        best_linear_residual=float(best_linear),
        best_rank_residual=float(best_rank),
        reason=NOT_FOUND_REASON,
        kernel_dimension=basis.dim,
    )
    return NotFound(budget, details)


def _complex_search(frame: Frame, phi: np.ndarray, opts: SearchOptions) -> ComplexSearchReport:
    m = frame.m
    kernel = complex_kernel_basis(frame)
    dim = kernel.shape[0]
    details = {"method": "search", "mode": "complex", "kernel_dimension": dim}

    def empty_budget(reason: str, restarts: int = 0, iterations: int = 0,
                     linear: float = np.inf, rank: float = np.inf) -> BudgetReport:
        return BudgetReport(restarts, iterations, float(linear), float(rank), reason, dim)

    if dim == 0:
        return ComplexSearchReport(False, empty_budget(EMPTY_KERNEL_REASON), None, details)

    def project(q: np.ndarray) -> np.ndarray:
        return (kernel.T @ (kernel.conj() @ q.ravel())).reshape(m, m)

    def accept(q: np.ndarray) -> Optional[ComplexCertificate]:
        q = q / np.linalg.norm(q)
        linear = _complex_linear_residual(phi, q)
        rank = _rank_residual(q, "complex")
        if linear <= opts.tol and rank <= opts.tol:
            return ComplexCertificate(q, linear, rank)
        return None

    if dim == 1:
        q = kernel[0].reshape(m, m)
        certificate = accept(q)
        if certificate is not None:
            return ComplexSearchReport(True, empty_budget("found"), certificate, details)
        budget = empty_budget(SINGLE_ELEMENT_REASON, linear=_complex_linear_residual(phi, q),
                              rank=_rank_residual(q, "complex"))
        return ComplexSearchReport(False, budget, None, details)

    best_linear, best_rank = np.inf, np.inf
    total_iterations = 0
    for restart in range(opts.restarts):
        rng = np.random.default_rng([opts.seed, restart])
        coeffs = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        start = (coeffs @ kernel).reshape(m, m)
        q, iterations = _run_restart(frame, start / np.linalg.norm(start), project, opts)
        total_iterations += iterations

        candidates = [q]
        if opts.polish:
            try:
                candidates.append(_polish_complex(frame, q))
            except (ValueError, np.linalg.LinAlgError) as e:
                logger.debug(f"Polish failed on restart {restart}: {e}")

        for candidate in candidates:
            if np.linalg.norm(candidate) == 0:
                continue
            best_linear = min(best_linear, _complex_linear_residual(phi, candidate))
            best_rank = min(best_rank, _rank_residual(candidate, "complex"))
            certificate = accept(candidate)
            if certificate is not None:
                logger.info(f"Complex rank-2 point found on restart {restart}")
                budget = empty_budget("found", restart + 1, total_iterations, certificate.linear_residual,
                                      certificate.rank_residual)
                return ComplexSearchReport(True, budget, certificate, {**details, "restart": restart})

    logger.warning(f"No complex rank-2 point found after {opts.restarts} restarts")
    budget = empty_budget(NOT_FOUND_REASON, opts.restarts, total_iterations, best_linear, best_rank)
    return ComplexSearchReport(False, budget, None, details)


class SearchCertifier(BaseCertifier):
    """Certifier backed by the alternating projection search; any (m, n)."""

    method = "search"

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        defaults = {k: v for k, v in CERTIFIER_CONFIG["search"].items() if k != "shape"}
        self.options = SearchOptions(**{**defaults, **kwargs})

    def supports(self, m: int, n: int) -> bool:
        return m >= 2 and n >= 1

    def certify(self, frame: Frame) -> Verdict | ComplexSearchReport:
        self.check_shape(frame)
        logger.info(f"Searching for a certificate on m={frame.m}, n={frame.n}")
        return alternating_search(frame, self.options)
