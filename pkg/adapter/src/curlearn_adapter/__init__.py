"""Reference trainer client for the curlearn scheduler protocol."""

from .demo import demo_run
from .embed import embed_text, write_embedding_jsonl
from .errors import (
    AdapterError,
    HandshakeMismatch,
    ProtocolViolation,
    SchedulerCrashed,
    SpawnFailure,
)
from .session import AdapterSession, Manifest, connect, default_scheduler_command
from .toy import BagOfWordsClassifier, ToySample, macro_f1, make_toy_dataset

__version__ = "0.1.0"

__all__ = [
    "AdapterError",
    "AdapterSession",
    "BagOfWordsClassifier",
    "HandshakeMismatch",
    "Manifest",
    "ProtocolViolation",
    "SchedulerCrashed",
    "SpawnFailure",
    "ToySample",
    "connect",
    "default_scheduler_command",
    "demo_run",
    "embed_text",
    "macro_f1",
    "make_toy_dataset",
    "write_embedding_jsonl",
]
