"""
Base frame file format interface.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import ClassVar, Optional

from ..core import Frame
from ..exceptions import FrameFormatError
from ..utils import format_rational, to_rational


class BaseFrameFormat(ABC):
    """
    Abstract base class for frame file formats.

    All frame format implementations should inherit from this class.
    """

    extension: ClassVar[str] = ""

    def __init__(self, file_path: str | Path, **kwargs):
        """
        Initialize the frame format handler.

        Args:
            file_path: Path to the frame file
            **kwargs: Additional format-specific arguments
        """
        self.file_path = Path(file_path) if isinstance(file_path, str) else file_path
        self.kwargs = kwargs

    @abstractmethod
    def read(self) -> Frame:
        """
        Read a frame from the file.

        Returns:
            Frame

        Raises:
            FrameFormatError: If the file content is malformed
        """
        pass

    def write(self, frame: Frame, metadata: Optional[dict] = None) -> Path:
        """
        Write a frame to the file.

        Args:
            frame: Frame to write
            metadata: Extra key-value pairs stored alongside the vectors

        Returns:
            Path written
        """
        encoding = self.kwargs.get("encoding", "utf-8")
        self.file_path.write_text(self.dumps(frame, metadata), encoding=encoding)
        return self.file_path

    @staticmethod
    @abstractmethod
    def dumps(frame: Frame, metadata: Optional[dict] = None) -> str:
        """
        Serialize a frame to text, with optional metadata.

        Returns:
            File content
        """
        pass


def scalar_to_text(value, mode: str):
    """Rational scalars as ``"p/q"``, float scalars as numbers."""
    if mode == "rational":
        return format_rational(value)
    return float(value)


def parse_scalar(value, mode: str):
    """
    Read one frame entry.

    Raises:
        FrameFormatError: If the entry does not fit the mode
    """
    try:
        if mode == "rational":
            return to_rational(value)
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ValueError(f"Not a number: {value!r}")
        return float(value)
    except ValueError as e:
        raise FrameFormatError(f"Invalid {mode} entry {value!r}") from e
