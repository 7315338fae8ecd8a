"""Load, validate, and persist embedding matrices.

Two interchange formats, both byte-deterministic:

binary  magic ``TACLEMB1`` (8 bytes), u64-LE sample count n, u64-LE
        dimension d, then n*d float32-LE values row-major, then n ids,
        each a u32-LE byte length followed by UTF-8 bytes.
jsonl   one record per line: {"id": str, "vec": [float, ...]} with an
        optional "label" key carried as opaque metadata.

Loading rejects anything that violates the matrix invariants (duplicate or
empty ids, non-finite values, inconsistent row lengths) with a typed error
naming the offending row; a file never yields a silently truncated matrix.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateId,
    IoFailure,
    MalformedHeader,
    NonFiniteValue,
)

MAGIC = b"TACLEMB1"

_HEADER = struct.Struct("<8sQQ")
_U32 = struct.Struct("<I")


@dataclass
class SampleRecord:
    """One embedding row: id, vector, and an optional opaque label."""

    id: str
    vec: np.ndarray
    label: str | None = None


@dataclass
class EmbeddingMatrix:
    """n x d float32 matrix with one unique non-empty id per row.

    ``data`` is row-major float32; row i belongs to ``ids[i]``. Labels are
    optional per-row metadata preserved only by the jsonl format.
    """

    data: np.ndarray
    ids: list[str]
    labels: list[str | None] = field(default_factory=list)

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if not self.labels:
            self.labels = [None] * len(self.ids)
        self.validate()

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def validate(self) -> None:
        if self.data.ndim != 2 or self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise MalformedHeader(
                f"matrix must be 2-D with n >= 1 and d >= 1, got shape {self.data.shape}"
            )
        if len(self.ids) != self.n or len(self.labels) != self.n:
            raise MalformedHeader(
                f"{len(self.ids)} ids for {self.n} rows"
            )
        seen: dict[str, int] = {}
        for row, sample_id in enumerate(self.ids):
            if not sample_id:
                raise MalformedHeader(f"row {row}: empty id")
            if sample_id in seen:
                raise DuplicateId(sample_id, seen[sample_id], row)
            seen[sample_id] = row
        finite_rows = np.isfinite(self.data).all(axis=1)
        if not finite_rows.all():
            row = int(np.flatnonzero(~finite_rows)[0])
            raise NonFiniteValue(row, self.ids[row])

    def row(self, i: int) -> SampleRecord:
        return SampleRecord(self.ids[i], self.data[i], self.labels[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingMatrix):
            return NotImplemented
        return (
            self.ids == other.ids
            and self.labels == other.labels
            and self.data.shape == other.data.shape
            and bool((self.data.view(np.uint32) == other.data.view(np.uint32)).all())
        )


def write_embeddings(matrix: EmbeddingMatrix, path, format: str = "binary") -> None:
    """Persist a validated matrix; binary output is byte-deterministic."""
    matrix.validate()
    try:
        if format == "binary":
            _write_binary(matrix, path)
        elif format == "jsonl":
            _write_jsonl(matrix, path)
        else:
            raise ValueError(f"unknown format {format!r}")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_embeddings(path, format: str = "binary") -> EmbeddingMatrix:
    """Parse and validate a matrix file; row order is preserved."""
    try:
        if format == "binary":
            return _load_binary(path)
        if format == "jsonl":
            return _load_jsonl(path)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    raise ValueError(f"unknown format {format!r}")


def _write_binary(matrix: EmbeddingMatrix, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, matrix.n, matrix.d))
        fh.write(matrix.data.astype("<f4", copy=False).tobytes(order="C"))
        for sample_id in matrix.ids:
            raw = sample_id.encode("utf-8")
            fh.write(_U32.pack(len(raw)))
            fh.write(raw)


def _load_binary(path) -> EmbeddingMatrix:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise MalformedHeader(f"{path}: file shorter than the {_HEADER.size}-byte header")
    magic, n, d = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise MalformedHeader(f"{path}: bad magic {magic!r}")
    if n < 1 or d < 1:
        raise MalformedHeader(f"{path}: header declares n={n}, d={d}")
    offset = _HEADER.size
    payload = n * d * 4
    if len(blob) < offset + payload:
        raise MalformedHeader(
            f"{path}: payload truncated, need {payload} bytes, have {len(blob) - offset}"
        )
    data = np.frombuffer(blob, dtype="<f4", count=n * d, offset=offset).reshape(n, d).copy()
    offset += payload
    ids = []
    for row in range(n):
        if len(blob) < offset + _U32.size:
            raise MalformedHeader(f"{path}: id block truncated at row {row}")
        (length,) = _U32.unpack_from(blob, offset)
        offset += _U32.size
        if len(blob) < offset + length:
            raise MalformedHeader(f"{path}: id bytes truncated at row {row}")
        try:
            ids.append(blob[offset : offset + length].decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise MalformedHeader(f"{path}: row {row} id is not UTF-8") from exc
        offset += length
    if offset != len(blob):
        raise MalformedHeader(f"{path}: {len(blob) - offset} trailing bytes")
    return EmbeddingMatrix(data, ids)


def _write_jsonl(matrix: EmbeddingMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, sample_id in enumerate(matrix.ids):
            record: dict = {"id": sample_id, "vec": [float(v) for v in matrix.data[i]]}
            if matrix.labels[i] is not None:
                record["label"] = matrix.labels[i]
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")


def _load_jsonl(path) -> EmbeddingMatrix:
    ids: list[str] = []
    labels: list[str | None] = []
    rows: list[list[float]] = []
    d: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for row, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedHeader(f"{path}: row {row} is not valid JSON") from exc
            if not isinstance(record, dict) or "id" not in record or "vec" not in record:
                raise MalformedHeader(f"{path}: row {row} lacks id/vec keys")
            sample_id = record["id"]
            vec = record["vec"]
            if not isinstance(sample_id, str):
                raise MalformedHeader(f"{path}: row {row} id is not a string")
            if not isinstance(vec, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in vec
            ):
                raise MalformedHeader(f"{path}: row {row} vec is not a number list")
            if d is None:
                d = len(vec)
            elif len(vec) != d:
                raise DimensionMismatch(row, sample_id, d, len(vec))
            ids.append(sample_id)
            labels.append(record.get("label"))
            rows.append(vec)
    if not rows:
        raise MalformedHeader(f"{path}: no records")
    data = np.array(rows, dtype=np.float32)
    return EmbeddingMatrix(data, ids, labels)
