import math

import numpy as np
import pytest

from dasmr.metrics import (
    OUTCOME_SUCCESS,
    OUTCOME_TRUNCATED_BOUNDS,
    OUTCOME_TRUNCATED_TIME,
    EpisodeRecord,
    avg_error,
    build_report,
    sliding_monitor,
    spl,
    success_rate,
)
from dasmr.simulator import Pose


def record(outcome=OUTCOME_SUCCESS, final=0.1, path=2.0, goal=(2.0, 0.0),
           start=Pose(), steps=100):
    return EpisodeRecord(
        goal=goal,
        start_pose=start,
        outcome=outcome,
        final_distance=final,
        path_length=path,
        steps=steps,
    )


def random_batch(rng, n):
    records = []
    for _ in range(n):
        goal = tuple(rng.uniform(-2, 2, 2))
        straight = math.hypot(*goal)
        outcome = rng.choice(
            [OUTCOME_SUCCESS, OUTCOME_TRUNCATED_TIME, OUTCOME_TRUNCATED_BOUNDS]
        )
        records.append(
            record(
                outcome=outcome,
                final=float(rng.uniform(0.0, 3.0)),
                path=straight + float(rng.uniform(0.0, 5.0)),
                goal=goal,
            )
        )
    return records


class TestSuccessRate:
    def test_all_and_none(self):
        assert success_rate([record()] * 5) == 1.0
        assert success_rate([record(OUTCOME_TRUNCATED_TIME)] * 5) == 0.0

    def test_17_of_20(self):
        batch = [record()] * 17 + [record(OUTCOME_TRUNCATED_TIME)] * 3
        assert success_rate(batch) == 0.85

    def test_empty_batch(self):
        with pytest.raises(ValueError):
            success_rate([])


class TestAvgError:
    def test_single(self):
        assert avg_error([record(final=0.12)]) == (0.12, 0.0)

    def test_two_point(self):
        ae, sigma = avg_error([record(final=0.1), record(final=0.2)])
        assert abs(ae - 0.15) < 1e-15
        assert abs(sigma - 0.05) < 1e-15

    def test_identical(self):
        assert avg_error([record(final=0.3)] * 7)[1] == 0.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        batch = random_batch(rng, 200)
        ae, sigma = avg_error(batch)
        distances = np.array([r.final_distance for r in batch])
        assert abs(ae - np.mean(distances)) <= 1e-12
        assert abs(sigma - np.std(distances)) <= 1e-12

    def test_includes_failures(self):
        batch = [record(final=0.1), record(OUTCOME_TRUNCATED_TIME, final=3.0)]
        ae, _ = avg_error(batch)
        assert ae == pytest.approx(1.55)


class TestSpl:
    def test_straight_drive(self):
        r = record(goal=(2.0, 0.0), path=2.0)
        assert spl([r]) == 1.0

    def test_failure(self):
        assert spl([record(OUTCOME_TRUNCATED_TIME)]) == 0.0

    def test_detour(self):
        assert spl([record(goal=(2.0, 0.0), path=4.0)]) == 0.5

    def test_goal_at_start(self):
        assert spl([record(goal=(0.0, 0.0), path=0.0)]) == 1.0

    def test_never_above_one_term_each(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            batch = random_batch(rng, int(rng.integers(1, 30)))
            assert spl(batch) <= success_rate(batch) + 1e-15

    def test_scale_invariance(self):
        rng = np.random.default_rng(2)
        batch = random_batch(rng, 50)
        scaled = [
            EpisodeRecord(
                goal=(10.0 * r.goal[0], 10.0 * r.goal[1]),
                start_pose=Pose(10.0 * r.start_pose.x, 10.0 * r.start_pose.y, 0.0),
                outcome=r.outcome,
                final_distance=10.0 * r.final_distance,
                path_length=10.0 * r.path_length,
                steps=r.steps,
            )
            for r in batch
        ]
        assert spl(scaled) == pytest.approx(spl(batch), abs=1e-12)


class TestReport:
    def test_build(self):
        batch = [record(final=0.1), record(OUTCOME_TRUNCATED_TIME, final=1.0)]
        report = build_report(batch)
        assert report.sr == 0.5
        assert report.n_episodes == 2
        assert "SR" in report.to_table()
        assert '"spl"' in report.to_json()


class TestSlidingMonitor:
    def test_identical_episodes(self):
        points = list(sliding_monitor([(-2.0, True)] * 100))
        assert len(points) == 10
        for index, mean_reward, sr in points:
            assert mean_reward == -2.0
            assert sr == 1.0

    def test_ramp_up_window(self):
        episodes = [(float(i), i % 2 == 0) for i in range(30)]
        points = list(sliding_monitor(episodes, window=100, log_every=10))
        assert [p[0] for p in points] == [10, 20, 30]
        assert points[2][1] == pytest.approx(np.mean(np.arange(30.0)))

    def test_window_caps_history(self):
        episodes = [(0.0, False)] * 100 + [(1.0, True)] * 100
        points = dict(
            (idx, (mr, sr))
            for idx, mr, sr in sliding_monitor(episodes, window=100, log_every=10)
        )
        assert points[200] == (1.0, 1.0)
        assert points[150] == (0.5, 0.5)

    def test_alternating_success(self):
        episodes = [(0.0, i % 2 == 0) for i in range(400)]
        for idx, _, sr in sliding_monitor(episodes):
            if idx >= 100:
                assert abs(sr - 0.5) <= 0.01

    def test_replay_stable(self):
        episodes = [(float(np.sin(i)), i % 3 == 0) for i in range(250)]
        assert list(sliding_monitor(episodes)) == list(sliding_monitor(episodes))

    def test_validation(self):
        with pytest.raises(ValueError):
            list(sliding_monitor([], window=0))


class TestEpisodeRecord:
    def test_outcome_validation(self):
        with pytest.raises(ValueError):
            record(outcome="nope")

    def test_straight_line(self):
        assert record(goal=(3.0, 4.0)).straight_line == 5.0
