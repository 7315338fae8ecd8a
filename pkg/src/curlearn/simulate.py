"""Deterministic synthetic learner for end-to-end scheduler validation.

Stands in for a real training loop: each stage follows a saturating
exponential from the macro-F1 floor it inherited at the transition up
toward that stage's ceiling,

    F(t) = floor + (cap - floor) * (1 - exp(-rate * t)) + noise,

clamped to [0, 1], with optional Gaussian noise drawn from the shared
xorshift64* stream. Growth then saturation is exactly the shape the
scheduler's threshold test is built to detect, and with a fixed seed whole
runs (trajectory, transitions, stop) reproduce bitwise.

Ceilings are keyed by stage position: the first stage uses ``cap_easy``,
the final stage ``cap_full``, anything between ``cap_medium`` (a reversed
run mirrors the meaning: its first stage is the hard pool).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .difficulty import CurriculumManifest
from .rng import Xorshift64Star
from .scheduler import (
    Action,
    SchedulerConfig,
    SchedulerState,
    observe_epoch,
)


@dataclass
class SyntheticLearnerConfig:
    cap_easy: float = 0.5
    cap_medium: float = 0.65
    cap_full: float = 0.8
    rate: float = 0.7
    noise_sigma: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        caps = (self.cap_easy, self.cap_medium, self.cap_full)
        if not all(0.0 <= c <= 1.0 for c in caps):
            raise ValueError("caps must lie in [0, 1]")
        if not (self.cap_easy <= self.cap_medium <= self.cap_full):
            raise ValueError("caps must be weakly increasing by stage")
        if not self.rate > 0:
            raise ValueError("rate must be > 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")

    def cap_for_stage(self, stage_index: int, stage_count: int) -> float:
        if stage_index == stage_count - 1:
            return self.cap_full
        if stage_index == 0:
            return self.cap_easy
        return self.cap_medium


def step_learner(
    config: SyntheticLearnerConfig,
    stage_index: int,
    epochs_in_stage: int,
    rng: Xorshift64Star,
    stage_count: int = 3,
    floor: float = 0.0,
) -> float:
    """Synthetic macro-F1 after ``epochs_in_stage`` epochs of one stage.

    Noise is only drawn when ``noise_sigma > 0`` so noiseless configs leave
    the RNG stream untouched.
    """
    cap = config.cap_for_stage(stage_index, stage_count)
    value = floor + (cap - floor) * (1.0 - math.exp(-config.rate * epochs_in_stage))
    if config.noise_sigma > 0:
        value += config.noise_sigma * rng.gauss()
    return min(1.0, max(0.0, value))


@dataclass
class RunReport:
    transition_epochs: list[int]
    stop_epoch: int
    stop_reason: str
    trajectory: list[float]

    @property
    def final_f1(self) -> float:
        return self.trajectory[-1]

    def to_json_dict(self) -> dict:
        return {
            "transition_epochs": list(self.transition_epochs),
            "stop_epoch": self.stop_epoch,
            "stop_reason": self.stop_reason,
            "trajectory": list(self.trajectory),
            "final_f1": self.final_f1,
        }


def run_simulation(
    manifest: CurriculumManifest,
    scheduler_config: SchedulerConfig,
    learner_config: SyntheticLearnerConfig,
) -> RunReport:
    """Drive the scheduler with synthetic epochs until it stops.

    The scheduler's epoch budget guarantees termination, so the report
    always ends on a stop decision.
    """
    learner_config.validate()
    state = SchedulerState.create(scheduler_config, manifest.level_counts)
    rng = Xorshift64Star(learner_config.seed)
    stage_count = len(state.ladder)

    trajectory: list[float] = []
    transition_epochs: list[int] = []
    floor = 0.0
    epochs_in_stage = 0
    stop_reason = None
    stop_epoch = scheduler_config.total_epochs

    for epoch in range(1, scheduler_config.total_epochs + 1):
        epochs_in_stage += 1
        f1 = step_learner(
            learner_config,
            state.stage_index,
            epochs_in_stage,
            rng,
            stage_count=stage_count,
            floor=floor,
        )
        trajectory.append(f1)
        decision = observe_epoch(state, scheduler_config, f1)
        if decision.action is Action.ADVANCE:
            transition_epochs.append(epoch)
            floor = f1  # next stage grows from the F1 reached at handover
            epochs_in_stage = 0
        elif decision.action is Action.STOP:
            stop_epoch = epoch
            stop_reason = decision.stop_reason.value
            break

    assert stop_reason is not None, "scheduler must stop within its epoch budget"
    return RunReport(
        transition_epochs=transition_epochs,
        stop_epoch=stop_epoch,
        stop_reason=stop_reason,
        trajectory=trajectory,
    )


SWEEP_COLUMNS = ("beta", "k", "direction", "transition1", "transition2", "stop_epoch", "final_f1")


def sweep_beta(
    manifest: CurriculumManifest,
    scheduler_config: SchedulerConfig,
    learner_config: SyntheticLearnerConfig,
    betas: list[float],
) -> list[dict]:
    """One simulation per beta; rows ordered exactly like the input list."""
    rows = []
    for beta in betas:
        config = SchedulerConfig(
            total_epochs=scheduler_config.total_epochs,
            window_n=scheduler_config.window_n,
            beta=beta,
            patience=scheduler_config.patience,
            direction=scheduler_config.direction,
            reset_window_on_transition=scheduler_config.reset_window_on_transition,
            stagnation_as_saturation=scheduler_config.stagnation_as_saturation,
        )
        report = run_simulation(manifest, config, learner_config)
        transitions = report.transition_epochs
        rows.append(
            {
                "beta": beta,
                "k": manifest.provenance.get("k"),
                "direction": config.direction.value,
                "transition1": transitions[0] if len(transitions) > 0 else None,
                "transition2": transitions[1] if len(transitions) > 1 else None,
                "stop_epoch": report.stop_epoch,
                "final_f1": report.final_f1,
            }
        )
    return rows


def write_sweep_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow(
                ["" if row[col] is None else row[col] for col in SWEEP_COLUMNS]
            )
