"""
wealthabm
=========

Seed-reproducible agent-based simulations of a closed economy in which
agents swap single units of money at random, optionally with a charity
organization that redistributes money whenever the richest tenth comes to
hold as much as the poorest half.

>>> from wealthabm import ScenarioConfig, run
>>> result = run(ScenarioConfig(n_agents=500, initial_money=100, max_ticks=100), seed=1)
>>> result.final.mean
100.0
"""

from ._version import __version__
from .charity import (CharityStrategy, DecilePartition, apply_strategy, count_return_periods,
                      decile_select, detect_critical)
from .economy import CHARITY, TransferLedger, exchange_tick
from .engine import (BatchRow, BatchSummary, ReplicationManifest, RunResult, ScenarioConfig,
                     SimState, TickStats, init_run, run, run_batch, step, tick_stats)
from .environment import (GraphSpec, LatticeSpec, NetworkGraph, gen_random_graph,
                          gen_scale_free, gen_small_world, wrap_coordinate)
from .errors import (ConfigError, ReplicationError, ScenarioError, ScenarioSyntaxError,
                     ScenarioValueError, UnknownKeyError)
from .scenario import Scenario, load_scenario, parse_scenario
from .sensitivity import OfatPlan, OfatTable, ofat_expand, ofat_run
from .stats import (ExponentialFit, Histogram, NormalFit, decile_totals, fit_boltzmann_gibbs,
                    fit_normal, histogram, ks_distance, summarize)

__all__ = [
    "__version__",
    "CHARITY", "BatchRow", "BatchSummary", "CharityStrategy", "ConfigError", "DecilePartition",
    "ExponentialFit", "GraphSpec", "Histogram", "LatticeSpec", "NetworkGraph", "NormalFit",
    "OfatPlan", "OfatTable", "ReplicationError", "ReplicationManifest", "RunResult", "Scenario",
    "ScenarioConfig", "ScenarioError", "ScenarioSyntaxError", "ScenarioValueError", "SimState",
    "TickStats", "TransferLedger", "UnknownKeyError",
    "apply_strategy", "count_return_periods", "decile_select", "decile_totals",
    "detect_critical", "exchange_tick", "fit_boltzmann_gibbs", "fit_normal", "gen_random_graph",
    "gen_scale_free", "gen_small_world", "histogram", "init_run", "ks_distance",
    "load_scenario", "ofat_expand", "ofat_run", "parse_scenario", "run", "run_batch", "step",
    "summarize", "tick_stats", "wrap_coordinate",
]
