"""
JSON frame format.

``{"m": M, "n": N, "mode": "float"|"rational", "vectors": [[[re, im], ...], ...]}``
with N entries of M pairs; rational entries are ``"p/q"`` strings. An optional
``"metadata"`` object (for example the generating seed) is written and ignored on read.
"""

import json
import logging
from typing import Optional

import numpy as np

from ..core import Frame
from ..exceptions import FrameFormatError
from .base import BaseFrameFormat, parse_scalar, scalar_to_text

logger = logging.getLogger(__name__)


class JSONFrameFormat(BaseFrameFormat):
    """JSON frame files."""

    extension = ".json"

    def read(self) -> Frame:
        """
        Read a JSON frame file.

        Raises:
            FrameFormatError: If the JSON is invalid or inconsistent
        """
        encoding = self.kwargs.get("encoding", "utf-8")
        try:
            payload = json.loads(self.file_path.read_text(encoding=encoding))
        except json.JSONDecodeError as e:
            logger.error(f"Invalid JSON in {self.file_path}: {e}")
            raise FrameFormatError(f"Invalid JSON in {self.file_path}: {e}") from e
        return self.from_payload(payload)

    @staticmethod
    def from_payload(payload: dict) -> Frame:
        """Build a frame from a parsed JSON object."""
        if not isinstance(payload, dict):
            raise FrameFormatError("Frame JSON must be an object")
        missing = [key for key in ("m", "n", "vectors") if key not in payload]
        if missing:
            raise FrameFormatError(f"Frame JSON is missing keys: {', '.join(missing)}")

        mode = payload.get("mode", "float")
        if mode not in ("float", "rational"):
            raise FrameFormatError(f"Unknown mode: {mode!r}")
        m, n, vectors = payload["m"], payload["n"], payload["vectors"]
        if any(isinstance(k, bool) or not isinstance(k, int) or k < 1 for k in (m, n)):
            raise FrameFormatError(f"m and n must be positive integers, got m={m!r}, n={n!r}")
        if not isinstance(vectors, list) or len(vectors) != n:
            raise FrameFormatError(f"Expected {n} vectors")

        u = np.empty((m, n), dtype=object)
        v = np.empty((m, n), dtype=object)
        for k, vector in enumerate(vectors):
            if not isinstance(vector, list) or len(vector) != m:
                raise FrameFormatError(f"Vector {k} must have {m} entries")
            for row, pair in enumerate(vector):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise FrameFormatError(f"Entry {row} of vector {k} must be a [re, im] pair")
                u[row, k] = parse_scalar(pair[0], mode)
                v[row, k] = parse_scalar(pair[1], mode)

        try:
            return Frame(u, v, mode=mode)
        except ValueError as e:
            raise FrameFormatError(f"Invalid frame: {e}") from e

    @staticmethod
    def to_payload(frame: Frame) -> dict:
        vectors = [
            [
                [scalar_to_text(frame.u[row, k], frame.mode), scalar_to_text(frame.v[row, k], frame.mode)]
                for row in range(frame.m)
            ]
            for k in range(frame.n)
        ]
        return {"m": frame.m, "n": frame.n, "mode": frame.mode, "vectors": vectors}

    @staticmethod
    def dumps(frame: Frame, metadata: Optional[dict] = None) -> str:
        payload = JSONFrameFormat.to_payload(frame)
        if metadata:
            payload["metadata"] = metadata
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
