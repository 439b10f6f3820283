"""
Main certifier with support for multiple backends.
"""

import logging

from ..config import DEFAULT_CERTIFIER_METHOD, EXACT_SHAPES
from ..core import Frame, Verdict
from ..exceptions import UnsupportedShapeError
from .base import BaseCertifier, CertifierMethod
from .exact_small import (
    M2N3KernelCertifier,
    M2N4DeterminantCertifier,
    M3N7PencilCertifier,
    M3N8DeterminantCertifier,
)
from .rank2search import ComplexSearchReport, SearchCertifier

logger = logging.getLogger(__name__)

# Registry of available certifiers
CERTIFIER_REGISTRY = {
    "det_m2n4": M2N4DeterminantCertifier,
    "det_m3n8": M3N8DeterminantCertifier,
    "kernel_m2n3": M2N3KernelCertifier,
    "pencil_m3n7": M3N7PencilCertifier,
    "search": SearchCertifier,
}


def resolve_method(m: int, n: int, method: str = DEFAULT_CERTIFIER_METHOD) -> str:
    """
    Concrete certifier name for a frame shape.

    'auto' picks the exact construction when one exists for (m, n) and the
    search otherwise; 'exact' requires one.

    Raises:
        UnsupportedShapeError: If 'exact' is requested for a shape without one
        ValueError: If the method is unknown
    """
    if method == "auto":
        return EXACT_SHAPES.get((m, n), "search")
    if method == "exact":
        if (m, n) not in EXACT_SHAPES:
            supported = ", ".join(str(shape) for shape in EXACT_SHAPES)
            raise UnsupportedShapeError(
                f"No exact test for m={m}, n={n}. Exact tests exist for: {supported}"
            )
        return EXACT_SHAPES[(m, n)]
    if method not in CERTIFIER_REGISTRY:
        available = ", ".join(CERTIFIER_REGISTRY.keys())
        raise ValueError(f"Unsupported certifier method: {method}. Choose from: auto, exact, {available}")
    return method


class FrameCertifier:
    """
    Injectivity certifier dispatching to exact constructions or the search.

    By default ('auto') frames of shape (2, 4), (3, 8), (2, 3) and (3, 7)
    use their exact construction and every other shape uses the
    alternating projection search. Users can also provide custom certifier
    classes that inherit from BaseCertifier.
    """

    def __init__(
        self,
        frame: Frame,
        method: CertifierMethod | str = DEFAULT_CERTIFIER_METHOD,
        certifier_class: type[BaseCertifier] | None = None,
        **kwargs,
    ):
        """
        Initialize the certifier for a frame.

        Args:
            frame: The frame to certify
            method: 'auto' (default), 'exact', or a registry key
            certifier_class: Optional custom class inheriting from
                BaseCertifier; takes precedence over method
            **kwargs: Options for the certifier (search options such as
                tol, restarts, seed, mode)

        Raises:
            ValueError: If method is unknown and no certifier_class is given
            TypeError: If certifier_class doesn't inherit from BaseCertifier
            UnsupportedShapeError: If the chosen certifier can't handle the frame

        Examples:
            >>> certifier = FrameCertifier(random_frame(2, 4, seed=0))
            >>> certifier.method
            'det_m2n4'

            >>> certifier = FrameCertifier(frame, method="search", restarts=10)
            >>> verdict = certifier.certify()
        """
        self.frame = frame
        self.kwargs = kwargs

        if certifier_class is not None:
            if not issubclass(certifier_class, BaseCertifier):
                raise TypeError(
                    f"certifier_class must inherit from BaseCertifier, got {certifier_class}"
                )
            self.method = getattr(certifier_class, "method", certifier_class.__name__)
            self.certifier_impl = certifier_class(**kwargs)
            logger.info(f"Using custom certifier: {certifier_class.__name__}")
        else:
            self.method = resolve_method(frame.m, frame.n, method)
            exact_kwargs = kwargs if self.method in ("search", "pencil_m3n7") else {}
            self.certifier_impl = CERTIFIER_REGISTRY[self.method](**exact_kwargs)
            logger.info(f"Initialized FrameCertifier with method: {self.method}")

        if not self.certifier_impl.supports(frame.m, frame.n):
            raise UnsupportedShapeError(
                f"Certifier '{self.method}' does not support m={frame.m}, n={frame.n}"
            )

    def certify(self) -> Verdict | ComplexSearchReport:
        """
        Run the certifier.

        Returns:
            Verdict (ComplexSearchReport for complex-mode searches)
        """
        verdict = self.certifier_impl.certify(self.frame)
        logger.info(f"Verdict for m={self.frame.m}, n={self.frame.n}: {verdict.tag}")
        return verdict


def certify_frame(
    frame: Frame,
    method: CertifierMethod | str = DEFAULT_CERTIFIER_METHOD,
    certifier_class: type[BaseCertifier] | None = None,
    **kwargs,
) -> Verdict | ComplexSearchReport:
    """
    Convenience function to certify a frame.

    Args:
        frame: The frame to certify
        method: 'auto' (default), 'exact', or a registry key
        certifier_class: Optional custom certifier class
        **kwargs: Options for the certifier

    Returns:
        Verdict

    Examples:
        >>> certify_frame(random_frame(2, 3, seed=1)).tag
        'NonInjective'

        >>> certify_frame(frame, method="search", mode="complex", restarts=5)
    """
    return FrameCertifier(frame, method=method, certifier_class=certifier_class, **kwargs).certify()
