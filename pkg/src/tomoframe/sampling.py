"""Deterministic finite-shot simulation of projector measurements.

Each measurement setting is an independent binary experiment on N copies:
the click probability is the projector expectation value. Counts come
from a counter-based generator keyed on (seed, setting index), so results
are bit-identical across runs, platforms, and execution orders, and
sweeps can be parallelized without coordination.
"""

import csv
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import DataError, DimensionError, RangeError
from .states import trace_distance


@dataclass(frozen=True)
class ShotPlan:
    """N shots per setting, a 64-bit seed, and the number of settings."""

    shots_per_setting: int
    seed: int
    settings: int

    def __post_init__(self):
        if self.shots_per_setting < 1:
            raise RangeError(f"shots per setting must be >= 1, got {self.shots_per_setting}")
        if self.settings < 1:
            raise RangeError(f"settings count must be >= 1, got {self.settings}")
        if not 0 <= self.seed < 2**64:
            raise RangeError(f"seed must fit in 64 bits, got {self.seed}")


@dataclass
class SampledFrequencies:
    counts: np.ndarray
    frequencies: np.ndarray
    plan: ShotPlan


def simulate_binary_outcomes(probabilities, plan):
    """Binomial counts for each setting under the plan's per-setting streams."""
    p = np.asarray(probabilities, dtype=float)
    if p.shape != (plan.settings,):
        raise DimensionError(f"{p.shape} probabilities for {plan.settings} settings")
    if p.min() < 0.0 or p.max() > 1.0:
        raise DataError(
            f"probabilities outside [0, 1]: min {p.min():.3e}, max {p.max():.3e}"
        )
    counts = np.empty(plan.settings, dtype=np.int64)
    for i in range(plan.settings):
        key = np.array([plan.seed, i], dtype=np.uint64)
        rng = np.random.Generator(np.random.Philox(key=key))
        counts[i] = rng.binomial(plan.shots_per_setting, p[i])
    return SampledFrequencies(
        counts=counts,
        frequencies=counts / plan.shots_per_setting,
        plan=plan,
    )


@dataclass
class SweepRow:
    shots: int
    mean_trace_distance: float
    std_trace_distance: float


@dataclass
class SweepResult:
    rows: List[SweepRow]
    slope: Optional[float]


def _trial_seed(seed, shot_index, trial):
    return int(np.random.SeedSequence(entropy=[seed, shot_index, trial]).generate_state(1)[0])


def error_scaling_sweep(
    reconstruct,
    rho,
    probabilities,
    shot_counts,
    trials,
    seed,
    sampler=simulate_binary_outcomes,
):
    """Reconstruction error versus shot count.

    ``reconstruct`` maps a frequency vector to a reconstructed matrix;
    ``probabilities`` are the exact outcome probabilities of ``rho`` under
    the quorum being studied. For each N the sweep runs ``trials``
    independent simulate-then-reconstruct cycles (seeded per (N, trial),
    reduced in that order) and reports mean and standard deviation of the
    trace distance to ``rho``, plus the least-squares slope of
    log(mean error) against log(N). Frequency estimation gives slope -1/2.
    """
    shot_counts = [int(n) for n in shot_counts]
    if any(b <= a for a, b in zip(shot_counts, shot_counts[1:])):
        raise DataError(f"shot counts must be strictly ascending, got {shot_counts}")
    if trials < 1:
        raise RangeError(f"trials must be >= 1, got {trials}")
    p = np.asarray(probabilities, dtype=float)
    rows = []
    for shot_index, n in enumerate(shot_counts):
        distances = np.empty(trials)
        for trial in range(trials):
            plan = ShotPlan(
                shots_per_setting=n,
                seed=_trial_seed(seed, shot_index, trial),
                settings=p.shape[0],
            )
            sampled = sampler(p, plan)
            distances[trial] = trace_distance(reconstruct(sampled.frequencies), rho)
        std = float(distances.std(ddof=1)) if trials > 1 else 0.0
        rows.append(
            SweepRow(
                shots=n,
                mean_trace_distance=float(distances.mean()),
                std_trace_distance=std,
            )
        )
    slope = None
    usable = [(r.shots, r.mean_trace_distance) for r in rows if r.mean_trace_distance > 0]
    if len(usable) >= 2:
        log_n = np.log([n for n, _ in usable])
        log_e = np.log([e for _, e in usable])
        slope = float(np.polyfit(log_n, log_e, 1)[0])
    return SweepResult(rows=rows, slope=slope)


def export_sweep_csv(result, path):
    """Write the sweep table with header (N, mean_trace_distance, std, slope)."""
    slope = "" if result.slope is None else repr(result.slope)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["N", "mean_trace_distance", "std", "slope"])
        for row in result.rows:
            writer.writerow(
                [
                    row.shots,
                    repr(row.mean_trace_distance),
                    repr(row.std_trace_distance),
                    slope,
                ]
            )
