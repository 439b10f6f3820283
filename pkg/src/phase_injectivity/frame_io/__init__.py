"""
Frame file formats.

Provides:
- JSONFrameFormat: {"m", "n", "mode", "vectors"} objects
- CSVFrameFormat: one line of 2M values per frame vector
"""

from .base import BaseFrameFormat
from .csv_format import CSVFrameFormat
from .json_format import JSONFrameFormat
from .loader import FRAME_FORMAT_REGISTRY, FrameLoader, dumps_frame, load_frame, save_frame

__all__ = [
    "FrameLoader",
    "load_frame",
    "save_frame",
    "dumps_frame",
    "FRAME_FORMAT_REGISTRY",
    "BaseFrameFormat",
    "JSONFrameFormat",
    "CSVFrameFormat",
]
