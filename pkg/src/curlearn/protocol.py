"""Line-delimited JSON protocol between an external trainer and the scheduler.

One message per line. The scheduler speaks first:

    {"type": "hello", "manifest_counts": {...}, "config": {...}}

then strictly alternates with the trainer:

    trainer  ->  {"type": "epoch_result", "epoch": 3, "macro_f1": 0.41}
    scheduler -> {"type": "decision", "action": "continue", ...}

A malformed or out-of-sequence request yields a single
{"type": "error", "message": ...} line and the session keeps going; the
state machine is untouched by rejected requests. The session ends with the
first "stop" decision (always the final message) or when stdin closes.
"""

from __future__ import annotations

import json
from typing import IO

from .errors import InvalidMetric
from .scheduler import Action, SchedulerConfig, SchedulerState, observe_epoch


def _emit(stream: IO[str], payload: dict) -> None:
    stream.write(json.dumps(payload))
    stream.write("\n")
    stream.flush()


def run_session(
    level_counts: dict[str, int],
    config: SchedulerConfig,
    instream: IO[str],
    outstream: IO[str],
    transition_log: IO[str] | None = None,
) -> SchedulerState:
    """Serve one scheduling session over text streams; returns final state."""
    state = SchedulerState.create(config, level_counts)
    _emit(
        outstream,
        {
            "type": "hello",
            "manifest_counts": dict(level_counts),
            "config": config.to_json_dict(),
        },
    )
    for line in instream:
        line = line.strip()
        if not line:
            continue
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            _emit(outstream, {"type": "error", "message": "line is not valid JSON"})
            continue
        if not isinstance(message, dict) or message.get("type") != "epoch_result":
            _emit(outstream, {"type": "error", "message": "expected an epoch_result message"})
            continue
        epoch = message.get("epoch")
        if epoch != state.epoch + 1:
            _emit(
                outstream,
                {"type": "error", "message": f"expected epoch {state.epoch + 1}, got {epoch!r}"},
            )
            continue
        before = len(state.transitions)
        try:
            decision = observe_epoch(state, config, message.get("macro_f1"))
        except InvalidMetric as exc:
            _emit(outstream, {"type": "error", "message": str(exc)})
            continue
        _emit(outstream, decision.to_json_dict())
        if transition_log is not None:
            for record in state.transitions[before:]:
                entry = {"event": "transition"}
                entry.update(record.to_json_dict())
                _emit(transition_log, entry)
            if decision.action is Action.STOP:
                _emit(
                    transition_log,
                    {
                        "event": "stop",
                        "epoch": state.epoch,
                        "reason": decision.stop_reason.value,
                    },
                )
        if decision.action is Action.STOP:
            break
    return state
