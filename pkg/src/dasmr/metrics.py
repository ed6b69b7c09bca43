"""Batch evaluation metrics: success rate, average distance error, SPL,
and the sliding-window training monitor.

All aggregations are pure functions over immutable episode records.
"""

import json
import math
from collections import deque
from dataclasses import dataclass

from .simulator import Pose

OUTCOME_SUCCESS = "success"
OUTCOME_TRUNCATED_TIME = "truncated_time"
OUTCOME_TRUNCATED_BOUNDS = "truncated_bounds"

OUTCOMES = (OUTCOME_SUCCESS, OUTCOME_TRUNCATED_TIME, OUTCOME_TRUNCATED_BOUNDS)


@dataclass(frozen=True)
class EpisodeRecord:
    """Summary of one episode, sufficient for SR/AE/SPL."""

    goal: tuple
    start_pose: Pose
    outcome: str
    final_distance: float
    path_length: float
    steps: int

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")

    @property
    def success(self) -> bool:
        return self.outcome == OUTCOME_SUCCESS

    @property
    def straight_line(self) -> float:
        """Start-to-goal straight-line distance (the shortest-path length)."""
        return math.hypot(
            self.goal[0] - self.start_pose.x, self.goal[1] - self.start_pose.y
        )


@dataclass(frozen=True)
class MetricsReport:
    sr: float
    ae: float
    sigma: float
    spl: float
    n_episodes: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_episodes": self.n_episodes,
                "sr": self.sr,
                "ae": self.ae,
                "sigma": self.sigma,
                "spl": self.spl,
            },
            indent=2,
        )

    def to_table(self) -> str:
        """Aligned text table in the usual SR / AE(sigma) / SPL layout."""
        header = f"{'N':>5}  {'SR':>6}  {'AE(sigma)':>16}  {'SPL':>6}"
        row = (
            f"{self.n_episodes:>5d}  {self.sr:>6.2f}  "
            f"{self.ae:>8.3f} ({self.sigma:.3f})  {self.spl:>6.2f}"
        )
        return header + "\n" + row


def _require_records(records):
    records = list(records)
    if not records:
        raise ValueError("metrics require at least one episode record")
    return records


def success_rate(records) -> float:
    """Fraction of episodes that ended in success."""
    records = _require_records(records)
    return sum(1 for r in records if r.success) / len(records)


def avg_error(records):
    """Mean and population standard deviation of the final goal distance.

    Averaged over all episodes: failures contribute their (large) final
    distances, successes their sub-threshold ones.
    """
    records = _require_records(records)
    distances = [r.final_distance for r in records]
    mean = sum(distances) / len(distances)
    var = sum((d - mean) ** 2 for d in distances) / len(distances)
    return mean, math.sqrt(var)


def spl(records) -> float:
    """Success weighted by normalized inverse path length.

    (1/N) * sum_i S_i * l_i / max(p_i, l_i), with l_i the straight-line
    start-to-goal distance and p_i the traversed path length. A goal already
    at the start (l_i = 0) counts its success indicator in full.
    """
    records = _require_records(records)
    total = 0.0
    for r in records:
        if not r.success:
            continue
        straight = r.straight_line
        if straight == 0.0:
            total += 1.0
        else:
            total += straight / max(r.path_length, straight)
    return total / len(records)


def build_report(records) -> MetricsReport:
    records = _require_records(records)
    ae, sigma = avg_error(records)
    return MetricsReport(
        sr=success_rate(records),
        ae=ae,
        sigma=sigma,
        spl=spl(records),
        n_episodes=len(records),
    )


def sliding_monitor(episodes, window: int = 100, log_every: int = 10):
    """Yield (episode index, windowed mean reward, windowed SR) log points.

    `episodes` is an iterable of (episode_reward, success) pairs. A point is
    emitted every `log_every` episodes, averaging over at most the last
    `window` episodes (over everything seen so far during ramp-up).
    """
    if window < 1 or log_every < 1:
        raise ValueError("window and log_every must be >= 1")
    recent = deque(maxlen=window)
    for index, (reward, success) in enumerate(episodes, start=1):
        recent.append((float(reward), bool(success)))
        if index % log_every == 0:
            mean_reward = sum(r for r, _ in recent) / len(recent)
            sr = sum(1 for _, s in recent if s) / len(recent)
            yield index, mean_reward, sr
