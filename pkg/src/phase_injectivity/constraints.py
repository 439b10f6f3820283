"""
The realified linear constraint system of a frame and its Hermitian kernel.

Row n of the constraint matrix holds the coefficients of the real linear
form ``Q -> phi_n* Q phi_n`` in Hermitian coordinate order, so the kernel
of the matrix is the space L of Hermitian Q with ``phi_n* Q phi_n = 0`` for
every frame vector.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from sympy import Matrix

from .config import KERNEL_REL_TOL, ScalarMode
from .core import Frame, HermitianCoords, frobenius_weights
from .exceptions import DimensionMismatchError
from .utils import exact_rank, numerical_rank, to_rational

logger = logging.getLogger(__name__)


def _is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def constraint_row(u_n, v_n) -> np.ndarray:
    """
    Coefficients of ``phi* Q phi`` for ``phi = u_n + i v_n``.

    The coefficient of x_mm is ``u_m^2 + v_m^2``, of x_lm (l < m) it is
    ``2(u_l u_m + v_l v_m)`` and of y_lm it is ``2(u_m v_l - u_l v_m)``.

    Args:
        u_n: Real parts, length M
        v_n: Imaginary parts, length M

    Returns:
        Length M^2 row (object array of Rationals for exact inputs)

    Raises:
        DimensionMismatchError: If the lengths differ

    Example:
        >>> constraint_row([1, 0], [0, 1])
        array([ 1.,  0.,  1., -2.])
    """
    u = np.asarray(u_n)
    v = np.asarray(v_n)
    if u.ndim != 1 or u.shape != v.shape:
        raise DimensionMismatchError(
            f"u and v must be vectors of equal length, got {u.shape} and {v.shape}"
        )
    m = u.shape[0]
    exact = _is_exact(u) or _is_exact(v)
    if exact:
        u = np.array([to_rational(a) for a in u], dtype=object)
        v = np.array([to_rational(a) for a in v], dtype=object)
    else:
        u = u.astype(float)
        v = v.astype(float)

    gram = np.outer(u, u) + np.outer(v, v)
    # skew[l, m] = v_l u_m - u_l v_m
    skew = np.outer(v, u) - np.outer(u, v)
    coeffs = np.concatenate([gram[np.triu_indices(m)], skew[np.triu_indices(m, k=1)]])

    if exact:
        weights = [int(w) for w in frobenius_weights(m)]
        return np.array([w * c for w, c in zip(weights, coeffs)], dtype=object)
    return frobenius_weights(m) * coeffs


@dataclass(frozen=True, eq=False)
class ConstraintMatrix:
    """N x M^2 real matrix whose row n evaluates ``phi_n* Q phi_n``."""

    m: int
    entries: np.ndarray
    mode: ScalarMode = "float"

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def apply(self, c: HermitianCoords) -> np.ndarray:
        """The values ``(phi_n* Q phi_n)_n`` for Q with coordinates ``c``."""
        if c.m != self.m:
            raise DimensionMismatchError(f"Coordinates for m={c.m}, matrix for m={self.m}")
        if self.mode == "rational" and c.mode == "rational":
            return self.entries.dot(c.coords)
        return self.entries.astype(float) @ c.coords.astype(float)

    def rank(self) -> int:
        if self.mode == "rational":
            return exact_rank(self.entries.tolist())
        return numerical_rank(self.entries, KERNEL_REL_TOL)

    def to_rows(self) -> list:
        return self.entries.tolist()


def constraint_matrix(frame: Frame) -> ConstraintMatrix:
    """
    Stack ``constraint_row`` over the columns of a frame.

    Exact in rational mode.

    Example:
        >>> frame = Frame([[1, 0, 1], [0, 1, 1]], [[0, 0, 0], [0, 0, 0]])
        >>> constraint_matrix(frame).entries
        array([[1., 0., 0., 0.],
               [0., 0., 1., 0.],
               [1., 2., 1., 0.]])
    """
    rows = [constraint_row(*frame.column(n)) for n in range(frame.n)]
    dtype = object if frame.mode == "rational" else float
    entries = np.array(rows, dtype=dtype)
    entries.setflags(write=False)
    return ConstraintMatrix(frame.m, entries, frame.mode)


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """
    A basis of L as Hermitian coordinates.

    Float bases are Euclidean-orthonormal in coordinate space; rational
    bases are the canonical free-variable basis of the exact nullspace.
    """

    m: int
    basis: Tuple[HermitianCoords, ...]
    mode: ScalarMode = "float"
    orthonormal: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def as_array(self) -> np.ndarray:
        """``dim x M^2`` float array with one basis element per row."""
        if not self.basis:
            return np.zeros((0, self.m * self.m))
        return np.array([b.coords.astype(float) for b in self.basis])

    def to_list(self) -> list:
        return [b.to_list() for b in self.basis]


def kernel_basis(cm: ConstraintMatrix, mode: Optional[ScalarMode] = None) -> KernelBasis:
    """
    Basis of the kernel of a constraint matrix.

    Float mode keeps the right singular vectors whose singular value is
    below ``1e-9 * sigma_max`` (all of them for a zero matrix). Rational mode
    uses the exact reduced row echelon nullspace.

    Args:
        cm: The constraint matrix
        mode: Arithmetic to use; defaults to the matrix's own mode

    Returns:
        KernelBasis (possibly empty)
    """
    mode = mode or cm.mode
    m = cm.m

    if mode == "rational":
        rows = [[to_rational(a) for a in row] for row in cm.entries.tolist()]
        vectors = Matrix(rows).nullspace()
        basis = tuple(HermitianCoords(m, list(vec), "rational") for vec in vectors)
        logger.debug(f"Exact kernel of {cm.shape} constraint matrix has dimension {len(basis)}")
        return KernelBasis(m, basis, "rational", orthonormal=False)

    a = cm.entries.astype(float)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    sigma_max = s[0] if s.size else 0.0
    rank = int(np.sum(s > KERNEL_REL_TOL * sigma_max)) if sigma_max > 0 else 0
    basis = tuple(HermitianCoords(m, row, "float") for row in vh[rank:])
    logger.debug(f"Numerical kernel of {cm.shape} constraint matrix has dimension {len(basis)}")
    return KernelBasis(m, basis, "float", orthonormal=True)


def kernel_dimension(frame: Frame, mode: Optional[ScalarMode] = None) -> int:
    """Dimension of L for a frame; generically ``max(M^2 - N, 0)``."""
    return kernel_basis(constraint_matrix(frame), mode or frame.mode).dim


def realified_form(q: HermitianCoords) -> np.ndarray:
    """
    Symmetric ``2M x 2M`` matrix G with ``[u; v]^T G [u; v] = phi* Q phi``.

    For Q = X + iY this is ``[[X, -Y], [Y, X]]``.
    """
    matrix = q.to_float().to_matrix()
    x, y = matrix.real, matrix.imag
    return np.block([[x, -y], [y, x]])


def quadratic_form_is_nonzero(q: HermitianCoords) -> bool:
    """
    Whether ``(u, v) -> phi* Q phi`` is not identically zero.

    The coefficient of u_m^2 reads off x_mm, that of u_l u_m reads off
    2 x_lm and that of u_l v_m reads off y_lm, so the form vanishes
    identically only for Q = 0. Coefficients are read exactly.
    """
    m = q.m
    u_sq, u_cross, uv_cross = [], [], []
    for k, (i, j) in enumerate(zip(*np.triu_indices(m))):
        if i == j:
            u_sq.append(q.coords[k])
        else:
            u_cross.append(2 * q.coords[k])
    for k in range(q.m * (q.m - 1) // 2):
        # coefficient of u_l v_m is -2 y_lm
        uv_cross.append(-2 * q.coords[q.n_x + k])
    return any(c != 0 for c in u_sq + u_cross + uv_cross)


def complex_constraint_matrix(frame: Frame) -> np.ndarray:
    """
    N x M^2 complex matrix with row n equal to ``vec(conj(phi_n) phi_n^T)``.

    Row n applied to the row-major ``vec(Q)`` gives ``phi_n* Q phi_n`` for
    any complex Q, Hermitian or not.
    """
    phi = frame.complex_matrix()
    return np.array([np.outer(phi[:, n].conj(), phi[:, n]).ravel() for n in range(frame.n)])


def complex_kernel_basis(frame: Frame) -> np.ndarray:
    """
    Orthonormal basis (rows, row-major ``vec``) of all complex Q with
    ``phi_n* Q phi_n = 0``; generic complex dimension ``max(M^2 - N, 0)``.
    """
    a = complex_constraint_matrix(frame)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    sigma_max = s[0] if s.size else 0.0
    rank = int(np.sum(s > KERNEL_REL_TOL * sigma_max)) if sigma_max > 0 else 0
    return vh[rank:].conj()
