"""
One factor at a time
====================

Vary one input, hold the rest fixed, and replicate each design point.
"""

from wealthabm import ScenarioConfig
from wealthabm.sensitivity import OfatPlan, ofat_run

base = ScenarioConfig(n_agents=200, initial_money=100, max_ticks=3000)

# the fitted temperature is always the mean balance
plan = OfatPlan(base, "initial_money", (50, 100, 200), replicates=3, seed_base=1)
table = ofat_run(plan)
for row in table.rows:
    print(f"initial_money={row.value:4d}  T={row.stat('temperature')}  "
          f"variance={row.stat('variance'):9.1f}  "
          f"first critical={row.stat('first_critical_tick')}")

# a higher threshold declares the critical stage earlier
plan = OfatPlan(base, "critical_threshold", (0, 2000, 4000), replicates=3, seed_base=1)
for row in ofat_run(plan).rows:
    print(f"threshold={row.value:5d}  first critical={row.stat('first_critical_tick')}  "
          f"critical ticks={row.stat('return_periods'):.1f}")
