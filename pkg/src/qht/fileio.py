"""CSV and PGM ingestion/emission plus atomic writes and JSON reports.

CSV signals: UTF-8, '#' comment lines, one sample per line or "t,value".
PGM images: P2 (ASCII) or P5 (binary), maxval 255. The writer emits the
canonical header "P5\\n<w> <h>\\n255\\n", so write(read(img)) reproduces
canonical files byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import BadPgmHeader, EmptyInput, NonNumericRow

REPORT_SCHEMA_VERSION = 1


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text_atomic(path, text: str) -> None:
    _atomic_write(path, text.encode("utf-8"))


def write_bytes_atomic(path, data: bytes) -> None:
    _atomic_write(path, data)


def sha256_of_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def sha256_of_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def read_csv_signal(path) -> tuple[np.ndarray | None, np.ndarray]:
    """Parse a signal CSV; returns (t or None, values)."""
    times: list[float] = []
    values: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                if len(parts) == 1:
                    values.append(float(parts[0]))
                elif len(parts) == 2:
                    times.append(float(parts[0]))
                    values.append(float(parts[1]))
                else:
                    raise ValueError
            except ValueError:
                raise NonNumericRow(line_no, line) from None
    if not values:
        raise EmptyInput(f"{path}: no samples found")
    if times and len(times) != len(values):
        raise NonNumericRow(0, "mixed one- and two-column rows")
    t = np.asarray(times) if times else None
    return t, np.asarray(values, dtype=np.float64)


def format_float(x) -> str:
    """Shortest round-trip decimal form; keeps CSV/JSON output deterministic."""
    return repr(float(x))


def write_csv_columns(path, header: list[str], columns: list[np.ndarray]) -> None:
    """Write named columns as '# col1,col2,...' then comma-separated rows."""
    length = len(columns[0])
    lines = ["# " + ",".join(header)]
    for i in range(length):
        lines.append(",".join(format_float(col[i]) for col in columns))
    write_text_atomic(path, "\n".join(lines) + "\n")


def _read_pgm_tokens(data: bytes, count: int, start: int) -> tuple[list[int], int]:
    """Read whitespace/comment-separated integer tokens from a PGM header."""
    tokens: list[int] = []
    i = start
    while len(tokens) < count:
        if i >= len(data):
            raise BadPgmHeader("truncated header")
        ch = data[i : i + 1]
        if ch == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            try:
                tokens.append(int(data[i:j]))
            except ValueError:
                raise BadPgmHeader(f"non-numeric header token {data[i:j]!r}") from None
            i = j
    return tokens, i


def read_pgm(path) -> np.ndarray:
    """Read a P2/P5 PGM with maxval 255 into a uint8 array of shape (h, w)."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise BadPgmHeader(f"expected P2 or P5, got {magic!r}")
    (width, height, maxval), pos = _read_pgm_tokens(data, 3, 2)
    if width < 1 or height < 1:
        raise BadPgmHeader(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise BadPgmHeader(f"only maxval 255 is supported, got {maxval}")
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        raster = data[pos : pos + width * height]
        if len(raster) != width * height:
            raise BadPgmHeader("raster shorter than width*height")
        img = np.frombuffer(raster, dtype=np.uint8)
    else:
        text = data[pos:].split()
        if len(text) < width * height:
            raise BadPgmHeader("raster shorter than width*height")
        try:
            img = np.array([int(v) for v in text[: width * height]], dtype=np.int64)
        except ValueError:
            raise BadPgmHeader("non-numeric P2 raster value") from None
        if img.min() < 0 or img.max() > 255:
            raise BadPgmHeader("P2 raster value outside 0..255")
        img = img.astype(np.uint8)
    return img.reshape(height, width)


def pgm_bytes(img: np.ndarray, binary: bool = True) -> bytes:
    img = np.asarray(img, dtype=np.uint8)
    height, width = img.shape
    if binary:
        return f"P5\n{width} {height}\n255\n".encode("ascii") + img.tobytes()
    rows = "\n".join(" ".join(str(int(v)) for v in row) for row in img)
    return f"P2\n{width} {height}\n255\n{rows}\n".encode("ascii")


def write_pgm(path, img: np.ndarray, binary: bool = True) -> None:
    write_bytes_atomic(path, pgm_bytes(img, binary=binary))


def write_report(path, report: dict) -> None:
    report = dict(report)
    report.setdefault("schema_version", REPORT_SCHEMA_VERSION)
    write_text_atomic(path, json.dumps(report, indent=2, sort_keys=True) + "\n")
