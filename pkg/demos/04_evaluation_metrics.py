"""
Evaluation metrics over episode batches
=======================================

Rolls a batch of episodes with simple policies and reports the standard
navigation metrics: success rate (SR), average final distance error with
its standard deviation (AE, sigma), and success weighted by normalized
inverse path length (SPL). Also shows the sliding-window training monitor.
"""

import numpy as np

from dasmr import (
    DasmrEnv,
    EnvConfig,
    ForwardPolicy,
    RandomPolicy,
    RewardSpec,
    build_report,
    sliding_monitor,
)
from dasmr.trajectory import COLUMNS, run_episode

# Forward-only driving reaches goals ahead, never the ones behind: the
# metrics make that legible at a glance.
env = DasmrEnv(EnvConfig(seed=9527, max_episode_steps=300))
records = [run_episode(env, ForwardPolicy()).record for _ in range(40)]
print("forward-only policy, 40 sampled goals:")
print(build_report(records).to_table())

env = DasmrEnv(EnvConfig(seed=9527, max_episode_steps=300))
records = [run_episode(env, RandomPolicy(seed=1)).record for _ in range(40)]
print("\nrandom policy, same 40 goals:")
print(build_report(records).to_table())

# The sliding monitor averages episode reward and SR over the most recent
# 100 episodes, logging every 10: the usual live view during training.
env = DasmrEnv(EnvConfig(seed=3, max_episode_steps=200,
                         reward=RewardSpec("hs", c=2.0)))
reward_col = COLUMNS.index("reward")


def episode_stream(n):
    for _ in range(n):
        episode = run_episode(env, ForwardPolicy())
        total = sum(row[reward_col] for row in episode.rows)
        yield total, episode.header["outcome"] == "success"


print("\nsliding monitor (window=100, log every 10 episodes):")
print(f"{'episode':>8} {'mean reward':>12} {'SR':>6}")
for index, mean_reward, sr in sliding_monitor(episode_stream(60)):
    print(f"{index:>8} {mean_reward:>12.1f} {sr:>6.2f}")
