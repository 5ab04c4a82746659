"""
Exchange on networks
====================

Agents can be restricted to trade only with their neighbours on a graph.
Here the three generators are built and a short run is done on each.
"""

import numpy as np

from wealthabm import GraphSpec, ScenarioConfig, run
from wealthabm.environment import gen_random_graph, gen_scale_free, gen_small_world

rng = np.random.default_rng(7)

ring = gen_small_world(20, 4, 0.0, rng)
print("ring lattice neighbours of node 0:", ring.adjacency()[0])

er = gen_random_graph(200, 0.05, rng)
print("random graph edges:", er.n_edges, "(expected 995)")

sf = gen_scale_free(2000, 2, 2, rng)
print("scale-free max degree:", sf.degrees().max(), "median:", int(np.median(sf.degrees())))

# the same economy, well mixed and on each graph
base = ScenarioConfig(n_agents=200, initial_money=50, max_ticks=2000)
for env in (None,
            GraphSpec("random", p=0.05),
            GraphSpec("small-world", k=6, beta=0.1),
            GraphSpec("scale-free", m0=3, m=2)):
    result = run(base.replace(environment=env), seed=3)
    label = env.kind if env else "well-mixed"
    print(f"{label:12s} variance {result.final.variance:8.1f}  gap {result.final.gap}")
