"""Threshold-adaptive curriculum scheduler.

The scheduler watches the macro-F1 trajectory of an external training loop
through a bounded window of the most recent ``window_n`` values. Once the
window is full it computes

    average growth   gamma_bar   = mean of consecutive differences
    latest growth    gamma_delta = last difference

and declares the current stage *saturated* when
``gamma_delta < beta * gamma_bar``. Saturation at a non-final stage expands
the active training pool to the next difficulty level; at the final stage it
stops the run. Two additional stop conditions apply: a patience counter on
stage-best macro-F1 (final stage only) and the total epoch budget.

Stage ladder: the forward direction trains easy -> easy+medium -> full, the
reversed direction hard -> hard+medium -> full. Levels with zero samples are
skipped. Decisions are strictly sequential; the state object is single-owner.

Edge policies (both configurable):

* ``stagnation_as_saturation`` (default on) also treats a full window with
  ``gamma_bar <= 0`` as saturated, since the strict inequality can never
  fire on a fully flat trajectory (0 < 0) and a regressing model has equally
  stopped benefiting from its stage.
* ``reset_window_on_transition`` (default off, matching the literal update
  rule) clears the window when a stage transition happens, so post-advance
  decisions never mix trajectories from two stages.

When several stop conditions fire on the same epoch the logged reason
follows the precedence saturated > patience_exhausted > epoch_budget, and a
stage transition that would land on the very last budgeted epoch is dropped
in favor of the stop (there is no later epoch to train the expanded pool).
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .difficulty import DifficultyLevel
from .errors import (
    AlreadyTerminated,
    InvalidMetric,
    WindowNotFull,
    WindowTooShort,
)


class Direction(str, enum.Enum):
    FORWARD = "forward"
    REVERSED = "reversed"

    @property
    def level_order(self) -> tuple[DifficultyLevel, ...]:
        if self is Direction.FORWARD:
            return (DifficultyLevel.EASY, DifficultyLevel.MEDIUM, DifficultyLevel.HARD)
        return (DifficultyLevel.HARD, DifficultyLevel.MEDIUM, DifficultyLevel.EASY)


class Action(str, enum.Enum):
    CONTINUE = "continue"
    ADVANCE = "advance"
    STOP = "stop"


class StopReason(str, enum.Enum):
    SATURATED = "saturated"
    PATIENCE_EXHAUSTED = "patience_exhausted"
    EPOCH_BUDGET = "epoch_budget"


@dataclass
class SchedulerConfig:
    total_epochs: int
    window_n: int = 5
    beta: float = 0.7
    patience: int = 5
    direction: Direction = Direction.FORWARD
    reset_window_on_transition: bool = False
    stagnation_as_saturation: bool = True

    def validate(self) -> None:
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie strictly between 0 and 1")
        if self.window_n < 2:
            raise ValueError("window_n must be >= 2")
        if self.total_epochs < 1:
            raise ValueError("total_epochs must be >= 1")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")

    def to_json_dict(self) -> dict:
        return {
            "total_epochs": self.total_epochs,
            "window_n": self.window_n,
            "beta": self.beta,
            "patience": self.patience,
            "direction": self.direction.value,
            "reset_window_on_transition": self.reset_window_on_transition,
            "stagnation_as_saturation": self.stagnation_as_saturation,
        }


def average_growth_rate(window: Sequence[float]) -> float:
    """Mean of consecutive differences over a full window."""
    if len(window) < 2:
        raise WindowNotFull(f"need at least 2 values, have {len(window)}")
    total = 0.0
    for prev, cur in zip(window, window[1:]):
        total += cur - prev
    return total / (len(window) - 1)


def instantaneous_growth_rate(window: Sequence[float]) -> float:
    """Difference between the two most recent values."""
    if len(window) < 2:
        raise WindowTooShort(f"need at least 2 values, have {len(window)}")
    return window[-1] - window[-2]


def is_saturated(
    gamma_delta: float,
    gamma_bar: float,
    beta: float,
    stagnation_as_saturation: bool = True,
) -> bool:
    """Latest growth fell below beta times the windowed average growth.

    With the stagnation flag, a non-positive average growth rate counts as
    saturated outright.
    """
    if stagnation_as_saturation and gamma_bar <= 0.0:
        return True
    return gamma_delta < beta * gamma_bar


@dataclass
class GrowthTracker:
    """Bounded FIFO of the most recent macro-F1 values."""

    capacity: int
    values: deque = field(default_factory=deque)

    def push(self, value: float) -> None:
        self.values.append(value)
        while len(self.values) > self.capacity:
            self.values.popleft()

    @property
    def full(self) -> bool:
        return len(self.values) == self.capacity

    def clear(self) -> None:
        self.values.clear()

    def snapshot(self) -> list[float]:
        return list(self.values)


@dataclass
class TransitionRecord:
    epoch: int
    from_stage: str
    to_stage: str
    gamma_bar: float
    gamma_delta: float
    threshold: float

    def to_json_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "from_stage": self.from_stage,
            "to_stage": self.to_stage,
            "gamma_bar": self.gamma_bar,
            "gamma_delta": self.gamma_delta,
            "threshold": self.threshold,
        }


@dataclass
class SchedulerDecision:
    action: Action
    active_levels: tuple[DifficultyLevel, ...]
    stage: str
    gamma_bar: float | None
    gamma_delta: float | None
    threshold: float | None
    window_full: bool
    stop_reason: StopReason | None = None

    def to_json_dict(self) -> dict:
        return {
            "type": "decision",
            "action": self.action.value,
            "active_levels": [lvl.label for lvl in self.active_levels],
            "stage": self.stage,
            "gamma_bar": self.gamma_bar,
            "gamma_delta": self.gamma_delta,
            "threshold": self.threshold,
            "stop_reason": self.stop_reason.value if self.stop_reason else None,
        }


@dataclass
class SchedulerState:
    """Single-owner state machine; one observe_epoch call at a time."""

    ladder: list[tuple[DifficultyLevel, ...]]
    tracker: GrowthTracker
    stage_index: int = 0
    epoch: int = 0
    best_f1: float | None = None
    epochs_since_improvement: int = 0
    transitions: list[TransitionRecord] = field(default_factory=list)
    terminated: bool = False
    stop_reason: StopReason | None = None

    @classmethod
    def create(cls, config: SchedulerConfig, level_counts: dict[str, int]) -> "SchedulerState":
        """Build the stage ladder for a manifest's level populations.

        ``level_counts`` maps level labels to sample counts; levels with
        zero samples are dropped from the ladder.
        """
        config.validate()
        populated = [
            lvl
            for lvl in config.direction.level_order
            if level_counts.get(lvl.label, 0) > 0
        ]
        if not populated:
            raise ValueError("manifest has no populated difficulty levels")
        ladder = [tuple(populated[: i + 1]) for i in range(len(populated))]
        return cls(ladder=ladder, tracker=GrowthTracker(capacity=config.window_n))

    def stage_name(self, index: int | None = None) -> str:
        idx = self.stage_index if index is None else index
        if idx == len(self.ladder) - 1:
            return "full"
        return "_".join(lvl.label for lvl in self.ladder[idx])

    @property
    def active_levels(self) -> tuple[DifficultyLevel, ...]:
        return self.ladder[self.stage_index]

    @property
    def at_final_stage(self) -> bool:
        return self.stage_index == len(self.ladder) - 1


def observe_epoch(
    state: SchedulerState, config: SchedulerConfig, macro_f1: float
) -> SchedulerDecision:
    """Record one epoch's macro-F1 and decide continue / advance / stop.

    The returned ``active_levels`` describe the training pool for the *next*
    epoch. Saturation is only ever evaluated on a full window.
    """
    if state.terminated:
        raise AlreadyTerminated(f"run already stopped ({state.stop_reason.value})")
    if not isinstance(macro_f1, (int, float)) or isinstance(macro_f1, bool):
        raise InvalidMetric(f"macro_f1 must be a number, got {type(macro_f1).__name__}")
    macro_f1 = float(macro_f1)
    if math.isnan(macro_f1) or not 0.0 <= macro_f1 <= 1.0:
        raise InvalidMetric(f"macro_f1 must lie in [0, 1], got {macro_f1}")

    state.epoch += 1
    state.tracker.push(macro_f1)

    if state.best_f1 is None or macro_f1 > state.best_f1:
        state.best_f1 = macro_f1
        state.epochs_since_improvement = 0
    else:
        state.epochs_since_improvement += 1

    window_full = state.tracker.full
    gamma_bar = gamma_delta = threshold = None
    saturated = False
    if window_full:
        window = state.tracker.snapshot()
        gamma_bar = average_growth_rate(window)
        gamma_delta = instantaneous_growth_rate(window)
        threshold = config.beta * gamma_bar
        saturated = is_saturated(
            gamma_delta, gamma_bar, config.beta, config.stagnation_as_saturation
        )

    action = Action.CONTINUE
    reason: StopReason | None = None
    if saturated and state.at_final_stage:
        action, reason = Action.STOP, StopReason.SATURATED
    elif state.at_final_stage and state.epochs_since_improvement >= config.patience:
        action, reason = Action.STOP, StopReason.PATIENCE_EXHAUSTED
    elif state.epoch >= config.total_epochs:
        action, reason = Action.STOP, StopReason.EPOCH_BUDGET
    elif saturated:
        action = Action.ADVANCE

    if action is Action.ADVANCE:
        state.transitions.append(
            TransitionRecord(
                epoch=state.epoch,
                from_stage=state.stage_name(),
                to_stage=state.stage_name(state.stage_index + 1),
                gamma_bar=gamma_bar,
                gamma_delta=gamma_delta,
                threshold=threshold,
            )
        )
        state.stage_index += 1
        state.best_f1 = None
        state.epochs_since_improvement = 0
        if config.reset_window_on_transition:
            state.tracker.clear()
    elif action is Action.STOP:
        state.terminated = True
        state.stop_reason = reason

    return SchedulerDecision(
        action=action,
        active_levels=state.active_levels,
        stage=state.stage_name(),
        gamma_bar=gamma_bar,
        gamma_delta=gamma_delta,
        threshold=threshold,
        window_full=window_full,
        stop_reason=reason,
    )
