"""Finite complement property of real frames."""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import MAX_FCP_VECTORS, RANK_REL_TOL
from .core import Frame
from .utils import exact_rank, numerical_rank

logger = logging.getLogger(__name__)


def spans(vectors: Sequence[Sequence], m: int, exact: bool = False) -> bool:
    """
    Whether real vectors span R^m.

    Args:
        vectors: Vectors of length m (may be empty)
        m: Ambient dimension
        exact: Use exact rational elimination instead of an SVD threshold

    Returns:
        True iff the vectors have rank m
    """
    if len(vectors) < m:
        return False
    rows = [list(v) for v in vectors]
    if exact:
        return exact_rank(rows) == m
    return numerical_rank(np.array(rows, dtype=float), RANK_REL_TOL) == m


@dataclass(frozen=True)
class FCPResult:
    """Outcome of the finite complement property check; ``subset`` is a violating S (0-based)."""

    holds: bool
    subset: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> dict:
        return {
            "finite_complement_property": self.holds,
            "violating_subset": list(self.subset) if self.subset is not None else None,
        }


def finite_complement_property(frame: Frame) -> FCPResult:
    """
    Check that for every index set S, the vectors in S or those in its
    complement span R^M.

    Only subsets with ``|S| <= N // 2`` are enumerated, each tested together
    with its complement.

    Args:
        frame: Real frame with at most 24 vectors

    Returns:
        FCPResult with a violating subset when the property fails

    Raises:
        ValueError: If the frame has nonzero imaginary parts or too many vectors

    Example:
        >>> finite_complement_property(Frame([[1, 0], [0, 1]], [[0, 0], [0, 0]]))
        FCPResult(holds=False, subset=(0,))
    """
    if not frame.is_real:
        raise ValueError("The finite complement property needs a real frame (V = 0)")
    if frame.n > MAX_FCP_VECTORS:
        raise ValueError(
            f"Exhaustive subset enumeration is limited to {MAX_FCP_VECTORS} vectors, got {frame.n}"
        )

    exact = frame.mode == "rational"
    columns = [frame.u[:, k] for k in range(frame.n)]
    indices = range(frame.n)
    for size in range(frame.n // 2 + 1):
        for subset in combinations(indices, size):
            chosen = set(subset)
            inside = [columns[k] for k in subset]
            outside = [columns[k] for k in indices if k not in chosen]
            if not spans(inside, frame.m, exact) and not spans(outside, frame.m, exact):
                logger.debug(f"Subset {subset} and its complement both fail to span")
                return FCPResult(False, subset)
    return FCPResult(True)
