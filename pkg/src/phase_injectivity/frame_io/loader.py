"""Frame file loading and saving with format detection."""

import logging
from pathlib import Path

from ..config import DEFAULT_ENCODING
from ..core import Frame
from ..exceptions import FrameFormatError
from ..utils import get_file_info, is_supported_file, validate_file_path
from .base import BaseFrameFormat
from .csv_format import CSVFrameFormat
from .json_format import JSONFrameFormat

logger = logging.getLogger(__name__)

# Registry of frame file formats
FRAME_FORMAT_REGISTRY: dict[str, type[BaseFrameFormat]] = {
    "json": JSONFrameFormat,
    "csv": CSVFrameFormat,
}


class FrameLoader:
    """Frame file loader that detects the format from the extension."""

    def __init__(self, file_path: str | Path, **kwargs):
        """
        Initialize the FrameLoader.

        Args:
            file_path: Path to the frame file
            **kwargs: Options for the format reader (encoding, mode for CSV)

        Raises:
            FileNotFoundError: If file doesn't exist
            FrameFormatError: If the extension is unsupported
        """
        self.file_path = validate_file_path(file_path)
        if not is_supported_file(self.file_path):
            raise FrameFormatError(
                f"Unsupported frame file type: {self.file_path.suffix}. File: {self.file_path}"
            )

        self.file_info = get_file_info(self.file_path)
        self.file_type = self.file_info["format"]
        self.kwargs = {"encoding": DEFAULT_ENCODING, **kwargs}

        logger.info(
            f"Initialized loader for {self.file_type} frame file: {self.file_path} "
            f"({self.file_info['size_bytes']} bytes)"
        )

    def load(self) -> Frame:
        """
        Read the frame.

        Returns:
            Frame

        Raises:
            FrameFormatError: If parsing fails
        """
        reader = FRAME_FORMAT_REGISTRY[self.file_type](self.file_path, **self.kwargs)
        try:
            frame = reader.read()
        except FrameFormatError:
            raise
        except (OSError, UnicodeDecodeError) as e:
            logger.error(f"Error reading frame file {self.file_path}: {e}")
            raise FrameFormatError(f"Failed to read frame file: {e}") from e
        logger.info(f"Loaded frame with m={frame.m}, n={frame.n} from {self.file_path}")
        return frame


def load_frame(file_path: str | Path, **kwargs) -> Frame:
    """
    Convenience function to load a frame from a file.

    Args:
        file_path: Path to a .json or .csv frame file
        **kwargs: Options for the format reader

    Returns:
        Frame

    Examples:
        >>> frame = load_frame("frame.json")
        >>> frame = load_frame("frame.csv", mode="rational")
    """
    return FrameLoader(file_path, **kwargs).load()


def _format_for(file_path: Path, fmt: str | None) -> type[BaseFrameFormat]:
    name = fmt or {cls.extension: key for key, cls in FRAME_FORMAT_REGISTRY.items()}.get(
        file_path.suffix.lower()
    )
    if name not in FRAME_FORMAT_REGISTRY:
        available = ", ".join(FRAME_FORMAT_REGISTRY.keys())
        raise FrameFormatError(f"Unsupported frame format for {file_path}. Choose from: {available}")
    return FRAME_FORMAT_REGISTRY[name]


def save_frame(
    frame: Frame, file_path: str | Path, fmt: str | None = None, metadata: dict | None = None
) -> Path:
    """
    Write a frame; the format follows the extension unless ``fmt`` is given.

    ``metadata`` (for example the sampling seed) is stored in the file and
    ignored when reading it back.

    Returns:
        Path written
    """
    path = Path(file_path)
    writer = _format_for(path, fmt)(path, encoding=DEFAULT_ENCODING)
    writer.write(frame, metadata)
    logger.info(f"Saved frame with m={frame.m}, n={frame.n} to {path}")
    return path


def dumps_frame(frame: Frame, fmt: str = "json", metadata: dict | None = None) -> str:
    """Serialize a frame as JSON (default) or CSV text."""
    if fmt not in FRAME_FORMAT_REGISTRY:
        raise FrameFormatError(f"Unsupported frame format: {fmt}")
    return FRAME_FORMAT_REGISTRY[fmt].dumps(frame, metadata)
