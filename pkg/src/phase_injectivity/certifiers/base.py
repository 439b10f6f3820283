"""
Base certifier class and type definitions.
"""

import logging
from abc import ABC, abstractmethod
from typing import ClassVar, Literal

from ..core import Frame, Verdict
from ..exceptions import UnsupportedShapeError

logger = logging.getLogger(__name__)

CertifierMethod = Literal[
    "det_m2n4",
    "det_m3n8",
    "kernel_m2n3",
    "pencil_m3n7",
    "search",
]


class BaseCertifier(ABC):
    """
    Abstract base class for injectivity certifiers.

    All certifier implementations should inherit from this class.
    """

    method: ClassVar[str] = "custom"

    def __init__(self, **kwargs):
        """
        Initialize the certifier.

        Args:
            **kwargs: Certifier-specific options
        """
        self.kwargs = kwargs
        logger.debug(f"Initialized {self.__class__.__name__}")

    @abstractmethod
    def supports(self, m: int, n: int) -> bool:
        """
        Whether this certifier handles frames of shape (m, n).

        Returns:
            True if supported
        """
        pass

    @abstractmethod
    def certify(self, frame: Frame) -> Verdict:
        """
        Decide injectivity of the intensity map of a frame.

        Returns:
            Verdict

        Raises:
            UnsupportedShapeError: If the frame shape is not supported
        """
        pass

    def check_shape(self, frame: Frame) -> None:
        """Raise UnsupportedShapeError for frames this certifier cannot handle."""
        if not self.supports(frame.m, frame.n):
            raise UnsupportedShapeError(
                f"{self.__class__.__name__} does not support m={frame.m}, n={frame.n}"
            )
