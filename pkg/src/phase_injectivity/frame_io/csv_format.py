"""
CSV frame format.

One line per frame vector with 2M values ``re_1, im_1, ..., re_M, im_M``.
Files containing any ``p/q`` entry are read in rational mode. Lines starting
with ``#`` hold metadata such as ``# seed: 7`` and are skipped on read.
"""

import csv
import io
import logging
from typing import Optional

import numpy as np

from ..core import Frame
from ..exceptions import FrameFormatError
from .base import BaseFrameFormat, parse_scalar, scalar_to_text

logger = logging.getLogger(__name__)

COMMENT_PREFIX = "#"


class CSVFrameFormat(BaseFrameFormat):
    """CSV frame files."""

    extension = ".csv"

    def read(self) -> Frame:
        """
        Read a CSV frame file.

        Raises:
            FrameFormatError: If rows are ragged, odd-length or non-numeric
        """
        encoding = self.kwargs.get("encoding", "utf-8")
        text = self.file_path.read_text(encoding=encoding)
        rows = [
            [cell.strip() for cell in row]
            for row in csv.reader(io.StringIO(text))
            if row and any(cell.strip() for cell in row) and not row[0].lstrip().startswith(COMMENT_PREFIX)
        ]
        if not rows:
            raise FrameFormatError(f"No frame vectors in {self.file_path}")
        width = len(rows[0])
        if width % 2 or any(len(row) != width for row in rows):
            raise FrameFormatError("Every CSV row needs the same even number of values")

        mode = self.kwargs.get("mode") or ("rational" if any("/" in c for r in rows for c in r) else "float")
        m, n = width // 2, len(rows)
        u = np.empty((m, n), dtype=object)
        v = np.empty((m, n), dtype=object)
        for k, row in enumerate(rows):
            for i in range(m):
                u[i, k] = parse_scalar(row[2 * i], mode)
                v[i, k] = parse_scalar(row[2 * i + 1], mode)

        logger.debug(f"Read {n} vectors of dimension {m} from {self.file_path}")
        try:
            return Frame(u, v, mode=mode)
        except ValueError as e:
            raise FrameFormatError(f"Invalid frame: {e}") from e

    @staticmethod
    def dumps(frame: Frame, metadata: Optional[dict] = None) -> str:
        buffer = io.StringIO()
        for key, value in sorted((metadata or {}).items()):
            buffer.write(f"{COMMENT_PREFIX} {key}: {value}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        for k in range(frame.n):
            row = []
            for i in range(frame.m):
                row.append(scalar_to_text(frame.u[i, k], frame.mode))
                row.append(scalar_to_text(frame.v[i, k], frame.mode))
            writer.writerow(row)
        return buffer.getvalue()
