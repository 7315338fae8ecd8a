"""Client side of the scheduler's line-delimited JSON stdio protocol.

The adapter never imports the scheduler package: it spawns the CLI as a
subprocess, validates the hello handshake against its own copy of the
manifest, and then strictly alternates epoch_result requests with decision
responses until the scheduler says stop.
"""

from __future__ import annotations

import json
import subprocess
import sys
from dataclasses import dataclass, field

from .errors import HandshakeMismatch, ProtocolViolation, SchedulerCrashed, SpawnFailure

LEVEL_ORDER = ("easy", "medium", "hard")


def default_scheduler_command() -> list[str]:
    """Run the scheduler CLI through the current interpreter."""
    return [sys.executable, "-m", "curlearn.cli"]


@dataclass
class Manifest:
    """The slice of the manifest JSON the trainer needs."""

    level_counts: dict[str, int]
    ids_by_level: dict[str, list[str]]

    @classmethod
    def load(cls, path) -> "Manifest":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        ids_by_level: dict[str, list[str]] = {lvl: [] for lvl in LEVEL_ORDER}
        for sample in obj["samples"]:
            ids_by_level[sample["level"]].append(sample["id"])
        return cls(level_counts=dict(obj["level_counts"]), ids_by_level=ids_by_level)

    def pool(self, active_levels: list[str]) -> list[str]:
        """Sample ids allowed for training, manifest order within levels."""
        out: list[str] = []
        for lvl in active_levels:
            out.extend(self.ids_by_level[lvl])
        return out


@dataclass
class AdapterSession:
    """One live scheduler subprocess plus the trainer-side session state."""

    process: subprocess.Popen
    manifest: Manifest
    hello: dict
    active_levels: list[str] = field(default_factory=lambda: ["easy"])
    epoch: int = 0
    closed: bool = False
    trajectory: list[dict] = field(default_factory=list)

    def epoch_step(self, macro_f1: float) -> dict:
        """Report one epoch's macro-F1; returns the scheduler's decision."""
        if self.closed:
            raise ProtocolViolation("session already ended with a stop decision")
        self.epoch += 1
        self._send({"type": "epoch_result", "epoch": self.epoch, "macro_f1": macro_f1})
        decision = self._receive()
        if decision.get("type") == "error":
            raise ProtocolViolation(f"scheduler rejected the request: {decision.get('message')}")
        if decision.get("type") != "decision":
            raise ProtocolViolation(f"expected a decision, got {decision.get('type')!r}")
        self.active_levels = list(decision["active_levels"])
        self.trajectory.append(
            {
                "epoch": self.epoch,
                "macro_f1": macro_f1,
                "action": decision["action"],
                "stage": decision["stage"],
                "active_levels": ",".join(self.active_levels),
                "pool_size": sum(
                    self.manifest.level_counts[lvl] for lvl in self.active_levels
                ),
            }
        )
        if decision["action"] == "stop":
            self.closed = True
            self.process.wait(timeout=10)
        return decision

    def training_pool(self) -> list[str]:
        return self.manifest.pool(self.active_levels)

    def close(self) -> None:
        if self.process.poll() is None:
            self.process.terminate()
            try:
                self.process.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.process.kill()

    def _send(self, payload: dict) -> None:
        if self.process.poll() is not None:
            raise SchedulerCrashed(f"scheduler exited with code {self.process.returncode}")
        try:
            self.process.stdin.write(json.dumps(payload) + "\n")
            self.process.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise SchedulerCrashed("scheduler closed its stdin") from exc

    def _receive(self) -> dict:
        line = self.process.stdout.readline()
        if not line:
            stderr = self.process.stderr.read() if self.process.stderr else ""
            raise SchedulerCrashed(f"scheduler closed its stdout; stderr: {stderr.strip()}")
        try:
            return json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolViolation(f"scheduler sent a non-JSON line: {line!r}") from exc


def connect(
    scheduler_cmd: list[str] | None,
    manifest_path,
    config: dict | None = None,
) -> AdapterSession:
    """Spawn the scheduler and complete the hello handshake.

    ``config`` maps scheduler flag names (beta, window, patience, epochs,
    direction, ...) to values, appended as ``--name value`` CLI flags.
    """
    manifest = Manifest.load(manifest_path)
    command = list(scheduler_cmd or default_scheduler_command())
    command += ["schedule", "--manifest", str(manifest_path)]
    for name, value in (config or {}).items():
        flag = name.replace("_", "-")
        if isinstance(value, bool):  # the scheduler uses --flag / --no-flag switches
            command.append(f"--{flag}" if value else f"--no-{flag}")
        else:
            command += [f"--{flag}", str(value)]
    try:
        process = subprocess.Popen(
            command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
    except (FileNotFoundError, PermissionError) as exc:
        raise SpawnFailure(f"cannot start scheduler: {command[0]}: {exc}") from exc

    session = AdapterSession(process=process, manifest=manifest, hello={})
    try:
        hello = session._receive()
    except SchedulerCrashed:
        session.close()
        raise
    if hello.get("type") != "hello":
        session.close()
        raise ProtocolViolation(f"expected hello, got {hello.get('type')!r}")
    if hello.get("manifest_counts") != manifest.level_counts:
        session.close()
        raise HandshakeMismatch(
            f"scheduler counts {hello.get('manifest_counts')} != local {manifest.level_counts}"
        )
    session.hello = hello
    session.active_levels = _initial_levels(hello)
    return session


def _initial_levels(hello: dict) -> list[str]:
    counts = hello["manifest_counts"]
    direction = hello.get("config", {}).get("direction", "forward")
    order = LEVEL_ORDER if direction == "forward" else tuple(reversed(LEVEL_ORDER))
    for lvl in order:
        if counts.get(lvl, 0) > 0:
            return [lvl]
    return []
