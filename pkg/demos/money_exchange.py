"""
Money exchange in a closed economy
==================================

Every agent with money gives one unit to a random other agent each tick.
Start from perfect equality and watch inequality build up.
"""

import numpy as np

from wealthabm import ScenarioConfig, run
from wealthabm.stats import fit_boltzmann_gibbs, fit_normal, histogram

# 500 agents, 100 units each, 9000 ticks
config = ScenarioConfig(n_agents=500, initial_money=100, max_ticks=9000)
result = run(config, seed=1, snapshot_ticks=(100, 1000, 9000))

# variance keeps growing; the mean never moves
for tick in (100, 1000, 9000):
    s = result.series[tick - 1]
    print(f"tick {tick:5d}  mean {s.mean:.1f}  variance {s.variance:8.1f}  "
          f"top10 {s.top10_total:6d}  bottom50 {s.bottom50_total:6d}  gap {s.gap:6d}")

# the first tick where the richest tenth holds at least as much as the bottom half
print("first critical tick:", result.first_critical_tick)

# compare the exponential and normal laws by KS distance
for tick in (100, 9000):
    balances = result.snapshots[tick]
    expo, norm = fit_boltzmann_gibbs(balances), fit_normal(balances)
    print(f"tick {tick}: T = {expo.temperature}, KS exponential {expo.ks_distance:.3f}, "
          f"KS normal {norm.ks_distance:.3f}")

# a coarse text histogram of the final balances
hist = histogram(result.final_balances, 25)
for lo, count in hist.bins:
    print(f"{lo:4d}-{lo + hist.bin_width - 1:<4d} {'#' * (count // 2)}")

print("zero balances at the end:", int(np.sum(result.final_balances == 0)))
