"""Hashing-based text embeddings for the demo, no pretrained model needed.

Each token is hashed into one of d buckets with a hash-derived sign (the
classic hashing trick), giving a deterministic sparse projection of the
bag of words; vectors are scaled by token count. Texts sharing vocabulary
land near each other, which is all the clustering stage needs.
"""

from __future__ import annotations

import hashlib
import json

from .toy import ToySample


def embed_text(text: str, dim: int = 16) -> list[float]:
    vec = [0.0] * dim
    tokens = text.split()
    for token in tokens:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
        bucket = int.from_bytes(digest[:4], "little") % dim
        sign = 1.0 if digest[4] & 1 else -1.0
        vec[bucket] += sign
    scale = 1.0 / max(1, len(tokens))
    return [v * scale for v in vec]


def write_embedding_jsonl(samples: list[ToySample], path, dim: int = 16) -> None:
    """One {"id", "vec", "label"} record per sample, scheduler-compatible."""
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            record = {
                "id": sample.id,
                "vec": embed_text(sample.text, dim),
                "label": sample.label,
            }
            fh.write(json.dumps(record) + "\n")
