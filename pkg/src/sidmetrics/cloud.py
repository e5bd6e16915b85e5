"""Embedding point clouds and their on-disk formats.

Two formats are supported: the EMB1 binary layout and plain CSV.

EMB1 layout (all integers little-endian)::

    magic   4 bytes  b"EMB1"
    version u16      = 1
    labellen u16     byte length of the UTF-8 label
    label   variable UTF-8
    N       u32      number of samples (rows)
    n       u32      embedding dimension (columns)
    flags   u32      bit 0 reserved, must be 0
    data    N*n float64, little-endian, row-major

CSV is one sample per line, comma-separated decimal floats, no header
unless the caller skips one explicitly.

Tags are an in-memory annotation only; EMB1 does not persist them.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, EmptyCloudError, FormatError

MAGIC = b"EMB1"
FORMAT_VERSION = 1

_HEADER_FIXED = struct.Struct("<4sHH")
_HEADER_DIMS = struct.Struct("<III")


@dataclass(frozen=True, eq=False)
class EmbeddingCloud:
    """A labeled set of ``count`` samples in R^``dim``, stored as float64 rows."""

    label: str
    data: np.ndarray
    tags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DataError(f"cloud data must be a 2-D matrix, got ndim={arr.ndim}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise EmptyCloudError(
                f"cloud needs at least one sample and one dimension, got shape {arr.shape}"
            )
        _check_finite(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "tags", frozenset(self.tags))

    @property
    def count(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def with_label(self, label: str) -> "EmbeddingCloud":
        return EmbeddingCloud(label, self.data, self.tags)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingCloud):
            return NotImplemented
        return (
            self.label == other.label
            and self.tags == other.tags
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self) -> str:
        return f"EmbeddingCloud({self.label!r}, count={self.count}, dim={self.dim})"


def _check_finite(arr: np.ndarray) -> None:
    if np.isfinite(arr).all():
        return
    bad = np.argwhere(~np.isfinite(arr))[0]
    raise DataError(
        f"non-finite value at row {bad[0]}, column {bad[1]}",
        row=int(bad[0]),
        col=int(bad[1]),
    )


def read_cloud(path: str | Path, skip_header: bool = False) -> EmbeddingCloud:
    """Read a cloud from ``path``, sniffing EMB1 by its magic bytes, else CSV."""
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] == MAGIC:
        return _parse_emb1(raw, default_label=path.stem)
    return _parse_csv(raw, default_label=path.stem, skip_header=skip_header)


def write_cloud(cloud: EmbeddingCloud, path: str | Path) -> None:
    """Write ``cloud`` in EMB1 form; ``read_cloud`` restores it bit-for-bit."""
    _check_finite(cloud.data)
    label_bytes = cloud.label.encode("utf-8")
    if len(label_bytes) > 0xFFFF:
        raise FormatError("label exceeds 65535 UTF-8 bytes", field="label")
    blob = b"".join(
        (
            _HEADER_FIXED.pack(MAGIC, FORMAT_VERSION, len(label_bytes)),
            label_bytes,
            _HEADER_DIMS.pack(cloud.count, cloud.dim, 0),
            np.ascontiguousarray(cloud.data, dtype="<f8").tobytes(),
        )
    )
    Path(path).write_bytes(blob)


def _parse_emb1(raw: bytes, default_label: str) -> EmbeddingCloud:
    if len(raw) < _HEADER_FIXED.size:
        raise FormatError("truncated EMB1 header", field="header")
    magic, version, label_len = _HEADER_FIXED.unpack_from(raw, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", field="magic")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}", field="version")
    offset = _HEADER_FIXED.size
    if len(raw) < offset + label_len + _HEADER_DIMS.size:
        raise FormatError("truncated EMB1 header", field="header")
    try:
        label = raw[offset : offset + label_len].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"label is not valid UTF-8: {exc}", field="label") from exc
    offset += label_len
    count, dim, flags = _HEADER_DIMS.unpack_from(raw, offset)
    offset += _HEADER_DIMS.size
    if count == 0 or dim == 0:
        raise EmptyCloudError(f"file declares an empty cloud (N={count}, n={dim})")
    if flags & 0x1:
        raise FormatError("reserved flag bit 0 is set", field="flags")
    expected = count * dim * 8
    actual = len(raw) - offset
    if actual != expected:
        raise FormatError(
            f"declared N={count}, n={dim} needs {expected} data bytes, found {actual}",
            field="data",
        )
    data = np.frombuffer(raw, dtype="<f8", count=count * dim, offset=offset)
    data = data.astype(np.float64).reshape(count, dim)
    return EmbeddingCloud(label or default_label, data)


def _parse_csv(raw: bytes, default_label: str, skip_header: bool) -> EmbeddingCloud:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"file is neither EMB1 nor UTF-8 text: {exc}", field="encoding") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if skip_header and lines:
        lines = lines[1:]
    if not lines:
        raise EmptyCloudError("CSV contains no data rows")
    rows = []
    width = None
    for i, line in enumerate(lines):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise FormatError(
                f"row {i} has {len(cells)} columns, expected {width}", field="row"
            )
        try:
            rows.append([float(cell) for cell in cells])
        except ValueError as exc:
            raise FormatError(f"row {i} is not numeric: {exc}", field="row") from exc
    return EmbeddingCloud(default_label, np.array(rows, dtype=np.float64))
