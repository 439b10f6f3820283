"""Helper functions: frame file paths, rational scalars and matrix ranks."""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from sympy import Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .config import FRAME_FILE_EXTENSIONS, SUPPORTED_EXTENSIONS

# Configure logging
logger = logging.getLogger(__name__)


def detect_file_type(file_path: str | Path) -> Optional[str]:
    """
    Detect frame file format based on extension.

    Args:
        file_path: Path to the frame file

    Returns:
        Format name ('json' or 'csv') or None if unsupported

    Raises:
        FileNotFoundError: If file doesn't exist
        ValueError: If the path is not a file
    """
    path = Path(file_path)

    if not path.exists():
        raise FileNotFoundError(f"File not found: {file_path}")

    if not path.is_file():
        raise ValueError(f"Path is not a file: {file_path}")

    extension = path.suffix.lower()

    if extension not in FRAME_FILE_EXTENSIONS:
        logger.warning(f"Unsupported frame file extension: {extension}")
        return None

    return FRAME_FILE_EXTENSIONS[extension]


def is_supported_file(file_path: str | Path) -> bool:
    """True if the extension has a frame format reader; the file need not exist."""
    return Path(file_path).suffix.lower() in SUPPORTED_EXTENSIONS


def validate_file_path(file_path: str | Path) -> Path:
    """
    Validate and normalize file path.

    Args:
        file_path: Path to validate

    Returns:
        Normalized Path object

    Raises:
        FileNotFoundError: If file doesn't exist
        ValueError: If path is not a file
    """
    path = Path(file_path).resolve()

    if not path.exists():
        raise FileNotFoundError(f"File not found: {file_path}")

    if not path.is_file():
        raise ValueError(f"Path is not a file: {file_path}")

    return path


def get_file_info(file_path: str | Path) -> dict:
    """
    Name, detected frame format and size of an existing frame file.

    Raises:
        FileNotFoundError: If file doesn't exist
    """
    path = validate_file_path(file_path)
    return {
        "name": path.name,
        "format": detect_file_type(path),
        "size_bytes": path.stat().st_size,
        "absolute_path": str(path),
    }


def to_rational(value) -> Rational:
    """
    Convert a scalar to an exact sympy Rational.

    Floats are converted through their exact binary expansion, strings may
    be integers, decimals or ``"p/q"``.

    Args:
        value: int, float, str, Fraction or sympy Rational

    Returns:
        Exact Rational

    Raises:
        ValueError: If the value cannot be read as a rational
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, bool):
        raise ValueError(f"Not a rational scalar: {value!r}")
    if isinstance(value, (int, np.integer)):
        return Rational(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"Not a finite scalar: {value!r}")
        return Rational(float(value))
    if isinstance(value, str):
        token = value.strip()
        try:
            if "/" in token:
                num, den = token.split("/")
                result = Rational(int(num), int(den))
            else:
                result = Rational(token)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not a rational scalar: {value!r}") from e
        if not result.is_Rational:
            raise ValueError(f"Not a rational scalar: {value!r}")
        return result
    raise ValueError(f"Not a rational scalar: {value!r}")


def format_rational(value) -> str:
    """Format an exact scalar as ``"p/q"``."""
    r = to_rational(value)
    return f"{r.p}/{r.q}"


def _domain_matrix(rows: Sequence[Sequence]) -> DomainMatrix:
    """Build a dense DomainMatrix over QQ from rational rows."""
    rows = [list(row) for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    elements = [
        [QQ(to_rational(x).p, to_rational(x).q) for x in row] for row in rows
    ]
    return DomainMatrix(elements, (nrows, ncols), QQ)


def exact_rank(rows: Sequence[Sequence]) -> int:
    """
    Rank of a rational matrix by exact elimination.

    Args:
        rows: Matrix rows with rational-convertible entries

    Returns:
        Exact rank (0 for an empty matrix)
    """
    if len(rows) == 0 or len(rows[0]) == 0:
        return 0
    return int(_domain_matrix(rows).rank())


def exact_det(rows: Sequence[Sequence]) -> Rational:
    """
    Determinant of a square rational matrix by exact elimination.

    Args:
        rows: Square matrix rows with rational-convertible entries

    Returns:
        Exact determinant

    Raises:
        ValueError: If the matrix is not square
    """
    nrows = len(rows)
    if any(len(row) != nrows for row in rows):
        raise ValueError(f"Determinant needs a square matrix, got {nrows} rows")
    if nrows == 0:
        return Rational(1)
    return QQ.to_sympy(_domain_matrix(rows).det())


def numerical_rank(matrix: np.ndarray, rel_tol: float) -> int:
    """
    Numerical rank from singular values above ``rel_tol * sigma_max``.

    Args:
        matrix: Real or complex 2-D array
        rel_tol: Threshold relative to the largest singular value

    Returns:
        Number of singular values above the threshold
    """
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))
