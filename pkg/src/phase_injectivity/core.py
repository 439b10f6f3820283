"""Domain types, frame construction, the intensity map and phase utilities.

A frame is stored as the real and imaginary parts ``u`` and ``v`` of an
``M x N`` complex matrix whose columns are the frame vectors. In ``float``
mode both are ``float64`` arrays; in ``rational`` mode they are object
arrays of sympy ``Rational``. Every type here is immutable.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Basic, I, ImmutableMatrix, MatrixBase, Rational, conjugate
from sympy import expand, im, re, sympify, zeros

from .config import (
    HERMITIAN_TOL,
    MAX_RESAMPLE_ATTEMPTS,
    RANK_REL_TOL,
    RATIONAL_DENOMINATOR_BOUND,
    RATIONAL_NUMERATOR_BOUND,
    FrameSampling,
    ScalarMode,
)
from .exceptions import (
    DimensionMismatchError,
    FrameConstructionError,
    NonHermitianError,
)
from .utils import exact_rank, format_rational, numerical_rank, to_rational

logger = logging.getLogger(__name__)


def _as_matrix(data, mode: ScalarMode) -> np.ndarray:
    """Read-only 2-D array in the representation of ``mode``."""
    if mode == "float":
        arr = np.array(data, dtype=float)
    elif mode == "rational":
        raw = np.asarray(data, dtype=object)
        arr = np.empty(raw.shape, dtype=object)
        for idx, value in np.ndenumerate(raw):
            arr[idx] = to_rational(value)
    else:
        raise ValueError(f"Unknown scalar mode: {mode}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Frame:
    """
    A collection of N vectors in C^M, stored as real parts ``u`` and
    imaginary parts ``v`` (column n is the n-th frame vector).

    The spanning property is checked on construction and exposed as
    ``spanning``; rank-deficient frames are accepted but flagged.
    """

    u: np.ndarray
    v: np.ndarray
    mode: ScalarMode = "float"
    spanning: bool = field(init=False)

    def __post_init__(self):
        u = _as_matrix(self.u, self.mode)
        v = _as_matrix(self.v, self.mode)
        if u.ndim != 2 or u.shape != v.shape:
            raise DimensionMismatchError(
                f"u and v must be matrices of identical shape, got {u.shape} and {v.shape}"
            )
        if u.shape[0] < 2 or u.shape[1] < 1:
            raise ValueError(f"Frame needs m >= 2 and n >= 1, got shape {u.shape}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "spanning", self.rank() == self.m)
        if not self.spanning:
            logger.warning(
                f"Frame with m={self.m}, n={self.n} does not span C^{self.m}"
            )

    @property
    def m(self) -> int:
        return self.u.shape[0]

    @property
    def n(self) -> int:
        return self.u.shape[1]

    @property
    def is_real(self) -> bool:
        """True when every imaginary part is zero."""
        return not bool(np.any(self.v != 0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.mode == other.mode
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
        )

    __hash__ = None

    def rank(self) -> int:
        """
        Complex rank of U + iV.

        Float mode uses singular values above ``1e-9 * sigma_max``; rational
        mode eliminates exactly on the realified ``2M x 2N`` block matrix
        ``[[U, -V], [V, U]]``, whose rank is twice the complex rank.
        """
        if self.mode == "float":
            return numerical_rank(self.complex_matrix(), RANK_REL_TOL)
        block = np.block([[self.u, -self.v], [self.v, self.u]])
        return exact_rank(block.tolist()) // 2

    def column(self, index: int) -> Tuple[np.ndarray, np.ndarray]:
        """Real and imaginary parts of the frame vector at ``index``."""
        return self.u[:, index], self.v[:, index]

    def complex_matrix(self) -> np.ndarray:
        """The frame as a complex ``M x N`` float array."""
        return self.u.astype(float) + 1j * self.v.astype(float)

    def to_rational(self) -> "Frame":
        """Exact rational copy (floats keep their exact binary value)."""
        if self.mode == "rational":
            return self
        return Frame(self.u, self.v, mode="rational")

    def to_float(self) -> "Frame":
        """Float64 copy."""
        if self.mode == "float":
            return self
        return Frame(self.u.astype(float), self.v.astype(float), mode="float")

    @classmethod
    def from_complex(cls, matrix, mode: ScalarMode = "float") -> "Frame":
        """Build a frame from a complex ``M x N`` array."""
        matrix = np.asarray(matrix, dtype=complex)
        return cls(matrix.real, matrix.imag, mode=mode)


def _triangle_indices(m: int) -> Tuple[Tuple[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]:
    """Row-major upper triangle indices with and without the diagonal."""
    return np.triu_indices(m), np.triu_indices(m, k=1)


def frobenius_weights(m: int) -> np.ndarray:
    """
    Weights w with ``||Q||_F^2 = sum(w * coords**2)`` for Hermitian coords.

    Diagonal x-coordinates count once, off-diagonal x and all y twice.
    """
    (rows, cols), _ = _triangle_indices(m)
    w_x = np.where(rows == cols, 1.0, 2.0)
    w_y = np.full(m * (m - 1) // 2, 2.0)
    return np.concatenate([w_x, w_y])


@dataclass(frozen=True, eq=False)
class HermitianCoords:
    """
    The M^2 real coordinates of a Hermitian matrix Q = X + iY.

    Ordering: ``x11..x1M, x22..x2M, ..., xMM`` followed by
    ``y12..y1M, y23..y2M, ..., y(M-1)M`` (row-major upper triangles).
    """

    m: int
    coords: np.ndarray
    mode: ScalarMode = "float"

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=object if self.mode == "rational" else float)
        if coords.ndim != 1 or coords.shape[0] != self.m * self.m:
            raise DimensionMismatchError(
                f"Hermitian coordinates for m={self.m} need length {self.m * self.m}, "
                f"got shape {coords.shape}"
            )
        if self.mode == "rational":
            coords = np.array([to_rational(c) for c in coords], dtype=object)
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def n_x(self) -> int:
        return self.m * (self.m + 1) // 2

    @property
    def x_part(self) -> np.ndarray:
        return self.coords[: self.n_x]

    @property
    def y_part(self) -> np.ndarray:
        return self.coords[self.n_x :]

    def is_zero(self) -> bool:
        return not bool(np.any(self.coords != 0))

    def frobenius_norm(self) -> float:
        values = self.coords.astype(float)
        return float(np.sqrt(np.sum(frobenius_weights(self.m) * values**2)))

    def first_nonzero(self) -> Optional[int]:
        nonzero = np.flatnonzero(self.coords != 0)
        return int(nonzero[0]) if nonzero.size else None

    def normalized(self) -> "HermitianCoords":
        """
        Canonical projective representative.

        Float mode scales to Frobenius norm 1; rational mode scales so the
        first nonzero coordinate equals 1 exactly.

        Raises:
            ValueError: For the zero matrix
        """
        if self.is_zero():
            raise ValueError("The zero matrix has no normalization")
        if self.mode == "rational":
            pivot = self.coords[self.first_nonzero()]
            return HermitianCoords(self.m, [c / pivot for c in self.coords], "rational")
        return HermitianCoords(self.m, self.coords / self.frobenius_norm(), "float")

    def to_float(self) -> "HermitianCoords":
        if self.mode == "float":
            return self
        return HermitianCoords(self.m, self.coords.astype(float), "float")

    def to_matrix(self):
        return hermitian_from_coords(self)

    def to_list(self) -> list:
        """JSON-ready coordinates (floats or ``"p/q"`` strings)."""
        if self.mode == "rational":
            return [format_rational(c) for c in self.coords]
        return [float(c) for c in self.coords]


def hermitian_from_coords(c: HermitianCoords):
    """
    Dense Hermitian matrix Q = X + iY from its coordinates.

    Args:
        c: Hermitian coordinates

    Returns:
        Complex numpy array in float mode, sympy ImmutableMatrix in
        rational mode

    Example:
        >>> hermitian_from_coords(HermitianCoords(2, [0, 0, 0, 1]))
        array([[0.+0.j, 0.+1.j],
               [0.-1.j, 0.+0.j]])
    """
    m = c.m
    upper, strict = _triangle_indices(m)
    if c.mode == "rational":
        q = zeros(m, m)
        for value, i, j in zip(c.x_part, *upper):
            q[i, j] = value
            q[j, i] = value
        for value, i, j in zip(c.y_part, *strict):
            q[i, j] += I * value
            q[j, i] -= I * value
        return ImmutableMatrix(q)

    x = np.zeros((m, m))
    x[upper] = c.x_part
    x = x + x.T - np.diag(np.diag(x))
    y = np.zeros((m, m))
    y[strict] = c.y_part
    y = y - y.T
    return x + 1j * y


def coords_from_hermitian(q, tol: float = HERMITIAN_TOL) -> HermitianCoords:
    """
    Coordinates of a Hermitian matrix.

    Args:
        q: Square complex array (float mode) or sympy matrix (rational mode)
        tol: Allowed deviation ``max|Q - Q*|`` relative to ``max(1, max|Q|)``

    Returns:
        HermitianCoords in the mode matching the input

    Raises:
        DimensionMismatchError: If q is not square
        NonHermitianError: If q is not Hermitian
    """
    if isinstance(q, MatrixBase):
        if q.rows != q.cols:
            raise DimensionMismatchError(f"Expected a square matrix, got {q.shape}")
        m = q.rows
        for i in range(m):
            for j in range(i, m):
                if expand(q[i, j] - conjugate(q[j, i])) != 0:
                    raise NonHermitianError(f"Entry ({i}, {j}) breaks Hermitian symmetry")
        upper, strict = _triangle_indices(m)
        x = [re(q[i, j]) for i, j in zip(*upper)]
        y = [im(q[i, j]) for i, j in zip(*strict)]
        return HermitianCoords(m, x + y, "rational")

    q = np.asarray(q, dtype=complex)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got {q.shape}")
    scale = max(1.0, float(np.max(np.abs(q))) if q.size else 1.0)
    deviation = float(np.max(np.abs(q - q.conj().T))) if q.size else 0.0
    if deviation > tol * scale:
        raise NonHermitianError(f"Matrix deviates from Hermitian by {deviation:.3e}")
    m = q.shape[0]
    upper, strict = _triangle_indices(m)
    return HermitianCoords(m, np.concatenate([q.real[upper], q.imag[strict]]), "float")


def _is_exact_vector(x: Sequence) -> bool:
    return all(
        isinstance(e, (int, Fraction, Basic)) and not isinstance(e, bool) for e in x
    )


def intensity_measurements(frame: Frame, x: Sequence) -> np.ndarray:
    """
    Intensity measurements ``|<phi_n, x>|^2`` of x.

    With ``<x, y> = sum_m x_m conj(y_m)`` entry n equals
    ``|sum_m x_m conj(phi_mn)|^2``. A rational frame paired with an exact
    vector (sympy numbers such as ``1 + 2*I``) is evaluated exactly.

    Args:
        frame: The measurement frame
        x: Vector of length M

    Returns:
        Nonnegative length-N array (object array of Rationals when exact)

    Raises:
        DimensionMismatchError: If len(x) != M

    Example:
        >>> frame = Frame([[1, 0, 1], [0, 1, 1]], [[0, 0, 0], [0, 0, 0]])
        >>> intensity_measurements(frame, [1, 1j])
        array([1., 1., 2.])
    """
    if len(x) != frame.m:
        raise DimensionMismatchError(f"Vector length {len(x)} does not match m={frame.m}")

    if frame.mode == "rational" and _is_exact_vector(x):
        xs = [sympify(e) for e in x]
        values = []
        for n in range(frame.n):
            s = sum(xs[k] * (frame.u[k, n] - I * frame.v[k, n]) for k in range(frame.m))
            values.append(expand(s * conjugate(s)))
        return np.array(values, dtype=object)

    x = np.asarray(x, dtype=complex)
    inner = frame.complex_matrix().conj().T @ x
    return np.abs(inner) ** 2


def phase_distance(x: Sequence, y: Sequence) -> float:
    """
    Distance in C^M / S^1: ``min_theta ||x - e^{i theta} y||``.

    Computed in closed form as ``sqrt(||x||^2 + ||y||^2 - 2|<x, y>|)``.

    Raises:
        DimensionMismatchError: If lengths differ
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"Vector shapes differ: {x.shape} vs {y.shape}")
    gap = np.vdot(x, x).real + np.vdot(y, y).real - 2 * abs(np.vdot(y, x))
    return float(np.sqrt(max(gap, 0.0)))


def outer_difference(x: Sequence, y: Sequence) -> np.ndarray:
    """The Hermitian matrix ``xx* - yy*``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return np.outer(x, x.conj()) - np.outer(y, y.conj())


def _random_rationals(rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
    numerators = rng.integers(-RATIONAL_NUMERATOR_BOUND, RATIONAL_NUMERATOR_BOUND + 1, size=shape)
    denominators = rng.integers(1, RATIONAL_DENOMINATOR_BOUND + 1, size=shape)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = Rational(int(numerators[idx]), int(denominators[idx]))
    return out


def random_frame(
    m: int,
    n: int,
    seed: int | None = None,
    mode: FrameSampling = "gaussian",
    real: bool = False,
) -> Frame:
    """
    Sample a generic frame.

    Gaussian mode draws i.i.d. standard normal real and imaginary parts;
    rational mode draws small rationals ``p/q`` with ``|p| <= 9`` and
    ``1 <= q <= 9``. Rank-deficient samples are redrawn up to 10 times.

    Args:
        m: Dimension (>= 2)
        n: Number of vectors (>= 1)
        seed: RNG seed; identical seeds give identical frames
        mode: 'gaussian' or 'rational'
        real: Sample real frames (V = 0)

    Returns:
        A frame of rank min(m, n)

    Raises:
        ValueError: For invalid sizes or mode
        FrameConstructionError: If every attempt was rank deficient
    """
    if m < 2 or n < 1:
        raise ValueError(f"random_frame needs m >= 2 and n >= 1, got m={m}, n={n}")
    if mode not in ("gaussian", "rational"):
        raise ValueError(f"Unknown sampling mode: {mode}")

    rng = np.random.default_rng(seed)
    target_rank = min(m, n)
    for attempt in range(MAX_RESAMPLE_ATTEMPTS):
        if mode == "gaussian":
            u = rng.standard_normal((m, n))
            v = np.zeros((m, n)) if real else rng.standard_normal((m, n))
            frame = Frame(u, v, mode="float")
        else:
            u = _random_rationals(rng, (m, n))
            v = np.full((m, n), Rational(0), dtype=object) if real else _random_rationals(rng, (m, n))
            frame = Frame(u, v, mode="rational")
        if frame.rank() == target_rank:
            return frame
        logger.warning(f"Rank-deficient sample (attempt {attempt + 1}), resampling")

    raise FrameConstructionError(
        f"Could not sample a frame of rank {target_rank} in {MAX_RESAMPLE_ATTEMPTS} attempts"
    )


def transform_frame(frame: Frame, a_re, a_im=None) -> Frame:
    """
    The frame ``A * Phi`` for a complex ``M x M`` matrix ``A = a_re + i a_im``.

    Injectivity of the measurement map only depends on the row span of
    the frame matrix, so invertible A preserves it. Exact in rational mode.

    Raises:
        DimensionMismatchError: If A is not ``M x M``
    """
    a_re = _as_matrix(a_re, frame.mode)
    a_im = _as_matrix(np.zeros(a_re.shape) if a_im is None else a_im, frame.mode)
    if a_re.shape != (frame.m, frame.m) or a_im.shape != (frame.m, frame.m):
        raise DimensionMismatchError(f"A must be {frame.m}x{frame.m}, got {a_re.shape}")
    u = a_re @ frame.u - a_im @ frame.v
    v = a_im @ frame.u + a_re @ frame.v
    return Frame(u, v, mode=frame.mode)


def phase_columns(frame: Frame, phases_re, phases_im) -> Frame:
    """
    Multiply column n by the unit-modulus scalar ``phases_re[n] + i phases_im[n]``.

    Raises:
        DimensionMismatchError: If the phase vectors are not length N
        ValueError: If a phase is not of unit modulus
    """
    a = _as_matrix([phases_re], frame.mode)[0]
    b = _as_matrix([phases_im], frame.mode)[0]
    if a.shape != (frame.n,) or b.shape != (frame.n,):
        raise DimensionMismatchError(f"Expected {frame.n} phases, got {a.shape}")
    moduli = a * a + b * b
    if frame.mode == "rational":
        unit = all(mod == 1 for mod in moduli)
    else:
        unit = bool(np.allclose(moduli.astype(float), 1.0, atol=1e-12))
    if not unit:
        raise ValueError("Column phases must have unit modulus")
    u = a * frame.u - b * frame.v
    v = b * frame.u + a * frame.v
    return Frame(u, v, mode=frame.mode)


def rational_unit_phase(rng: np.random.Generator) -> Tuple[Rational, Rational]:
    """
    An exact unit-modulus rational ``a + ib`` from a Pythagorean triple.

    ``a = (p^2 - q^2)/(p^2 + q^2)``, ``b = 2pq/(p^2 + q^2)`` with random
    small p, q and random signs.
    """
    p, q = (int(k) for k in rng.integers(1, 10, size=2))
    s_a, s_b = (int(k) for k in rng.choice([-1, 1], size=2))
    norm = p * p + q * q
    return Rational(s_a * (p * p - q * q), norm), Rational(s_b * 2 * p * q, norm)


def random_invertible(m: int, rng: np.random.Generator, mode: ScalarMode = "float"):
    """
    A random invertible complex ``m x m`` matrix as ``(a_re, a_im)``.

    Rational mode draws small rationals and checks invertibility exactly.
    """
    for _ in range(MAX_RESAMPLE_ATTEMPTS):
        if mode == "rational":
            a_re, a_im = _random_rationals(rng, (m, m)), _random_rationals(rng, (m, m))
            block = np.block([[a_re, -a_im], [a_im, a_re]])
            if exact_rank(block.tolist()) == 2 * m:
                return a_re, a_im
        else:
            a_re, a_im = rng.standard_normal((m, m)), rng.standard_normal((m, m))
            if numerical_rank(a_re + 1j * a_im, RANK_REL_TOL) == m:
                return a_re, a_im
    raise FrameConstructionError(f"Could not sample an invertible {m}x{m} matrix")


def _json_scalar(value):
    if isinstance(value, Basic):
        return format_rational(value)
    return float(value)


def _complex_pairs(vector: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vector, dtype=complex)]


@dataclass(frozen=True, eq=False)
class Certificate:
    """
    A nonzero Hermitian Q of rank <= 2 with ``phi_n* Q phi_n = 0`` for all n,
    normalized canonically, with its residual diagnostics.
    """

    q: HermitianCoords
    linear_residual: float
    rank_residual: float
    frobenius_norm: float
    worst_row: int = 0

    @property
    def mode(self) -> ScalarMode:
        return self.q.mode

    def matrix(self) -> np.ndarray:
        """Dense complex float view of Q."""
        return hermitian_from_coords(self.q.to_float())

    def to_dict(self) -> dict:
        return {
            "mode": self.q.mode,
            "coords": self.q.to_list(),
            "linear_residual": float(self.linear_residual),
            "rank_residual": float(self.rank_residual),
            "frobenius_norm": float(self.frobenius_norm),
            "worst_row": int(self.worst_row),
        }


@dataclass(frozen=True, eq=False)
class WitnessPair:
    """Vectors x, y with ``xx* - yy* = Q`` and identical intensity measurements."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=complex)
        y = np.array(self.y, dtype=complex)
        if x.shape != y.shape or x.ndim != 1:
            raise DimensionMismatchError(f"Witness vectors differ in shape: {x.shape} vs {y.shape}")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def outer_difference(self) -> np.ndarray:
        return outer_difference(self.x, self.y)

    def measurement_gap(self, frame: Frame) -> float:
        """``||A(x) - A(y)||_inf``."""
        gap = intensity_measurements(frame, self.x) - intensity_measurements(frame, self.y)
        return float(np.max(np.abs(gap)))

    def to_dict(self, frame: Optional[Frame] = None) -> dict:
        payload = {
            "x": _complex_pairs(self.x),
            "y": _complex_pairs(self.y),
            "phase_distance": phase_distance(self.x, self.y),
        }
        if frame is not None:
            payload["measurements_x"] = [float(a) for a in intensity_measurements(frame, self.x)]
            payload["measurements_y"] = [float(a) for a in intensity_measurements(frame, self.y)]
        return payload


@dataclass(frozen=True)
class BudgetReport:
    """How much search was spent before giving up, and the best residuals seen."""

    restarts: int
    iterations: int
    best_linear_residual: float
    best_rank_residual: float
    reason: str
    kernel_dimension: int

    def to_dict(self) -> dict:
        return {
            "restarts": self.restarts,
            "iterations": self.iterations,
            "best_linear_residual": float(self.best_linear_residual),
            "best_rank_residual": float(self.best_rank_residual),
            "reason": self.reason,
            "kernel_dimension": self.kernel_dimension,
        }


def _details_to_json(details: Dict[str, object]) -> Dict[str, object]:
    out = {}
    for key, value in details.items():
        if isinstance(value, Basic):
            out[key] = format_rational(value)
        elif isinstance(value, (np.floating, np.integer)):
            out[key] = value.item()
        else:
            out[key] = value
    return out


@dataclass(frozen=True, eq=False)
class Injective:
    """The measurement map is injective."""

    tag: ClassVar[str] = "Injective"
    reason: str
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.tag, "reason": self.reason, **_details_to_json(self.details)}


@dataclass(frozen=True, eq=False)
class NonInjective:
    """A verified certificate and a colliding pair of vectors."""

    tag: ClassVar[str] = "NonInjective"
    certificate: Certificate
    witness: WitnessPair
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self, frame: Optional[Frame] = None) -> dict:
        return {
            "verdict": self.tag,
            "certificate": self.certificate.to_dict(),
            "witness": self.witness.to_dict(frame),
            **_details_to_json(self.details),
        }


@dataclass(frozen=True, eq=False)
class Indeterminate:
    """An exact hypersurface test vanished but no real certificate was built."""

    tag: ClassVar[str] = "Indeterminate"
    reason: str
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.tag, "reason": self.reason, **_details_to_json(self.details)}


@dataclass(frozen=True, eq=False)
class NotFound:
    """A budgeted search came back empty. Not a proof of injectivity."""

    tag: ClassVar[str] = "NotFound"
    budget: BudgetReport
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.tag, "budget": self.budget.to_dict(), **_details_to_json(self.details)}


Verdict = Union[Injective, NonInjective, Indeterminate, NotFound]


def verdict_to_dict(verdict: Verdict, frame: Optional[Frame] = None) -> dict:
    """JSON-ready payload of any verdict."""
    if isinstance(verdict, NonInjective):
        return verdict.to_dict(frame)
    return verdict.to_dict()
