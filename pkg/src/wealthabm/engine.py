"""
Discrete-tick simulation engine.

A run is fully determined by a :class:`ScenarioConfig` and a 64-bit seed.
The seed feeds ``numpy.random.SeedSequence``; two independent PCG64 streams
are derived from it with spawn keys ``(0,)`` (initial balances and exchange
draws) and ``(1,)`` (exchange network construction). Bitwise replication is
guaranteed for a fixed numpy version; other implementations can match the
dynamics in distribution only.

Each tick:

1. every agent with money gives one unit to a random other agent;
2. the money gap is measured and, if at or below the critical threshold, the
   tick is recorded as a critical (return-period) tick and the configured
   charity strategy fires once;
3. statistics are taken after all transfers of the tick.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np

from ._version import __version__
from .charity import CharityStrategy, DecilePartition, apply_strategy
from .economy import TransferLedger, exchange_tick
from .environment import GraphSpec
from .errors import ConfigError

INIT_MODES = ("equal", "random-partition", "explicit-list")
SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class ScenarioConfig:
    n_agents: int
    initial_money: int
    max_ticks: int
    init_mode: str = "equal"
    initial_balances: Optional[tuple] = None
    critical_threshold: int = 0
    charity: Optional[CharityStrategy] = None
    environment: Optional[GraphSpec] = None
    stats_every: int = 1

    def __post_init__(self):
        for name in ("n_agents", "initial_money", "max_ticks", "critical_threshold", "stats_every"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        if self.n_agents < 10 or self.n_agents % 10:
            raise ConfigError(
                f"n_agents must be >= 10 and divisible by 10 so deciles are exact, got {self.n_agents}"
            )
        if self.initial_money < 1:
            raise ConfigError(f"initial_money must be >= 1, got {self.initial_money}")
        if self.max_ticks < 1:
            raise ConfigError(f"max_ticks must be >= 1, got {self.max_ticks}")
        if self.stats_every < 1:
            raise ConfigError(f"stats_every must be >= 1, got {self.stats_every}")
        if self.init_mode not in INIT_MODES:
            raise ConfigError(
                f"init_mode must be one of {', '.join(INIT_MODES)}, got {self.init_mode!r}"
            )
        if self.init_mode == "explicit-list":
            if self.initial_balances is None:
                raise ConfigError("init_mode explicit-list requires initial_balances")
            balances = tuple(int(b) for b in self.initial_balances)
            object.__setattr__(self, "initial_balances", balances)
            if len(balances) != self.n_agents:
                raise ConfigError(
                    f"initial_balances has {len(balances)} entries, expected n_agents={self.n_agents}"
                )
            if min(balances) < 0:
                raise ConfigError("initial_balances entries must be >= 0")
            if sum(balances) != self.n_agents * self.initial_money:
                raise ConfigError(
                    f"initial_balances must sum to n_agents * initial_money = "
                    f"{self.n_agents * self.initial_money}, got {sum(balances)}"
                )
        elif self.initial_balances is not None:
            raise ConfigError("initial_balances is only allowed with init_mode explicit-list")
        if self.environment is not None:
            self.environment.check(self.n_agents)

    @property
    def total_money(self) -> int:
        return self.n_agents * self.initial_money

    def replace(self, **changes) -> "ScenarioConfig":
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values.update(changes)
        return ScenarioConfig(**values)

    def to_dict(self) -> dict:
        d = {
            "n_agents": int(self.n_agents),
            "initial_money": int(self.initial_money),
            "init_mode": self.init_mode,
            "max_ticks": int(self.max_ticks),
            "critical_threshold": int(self.critical_threshold),
            "stats_every": int(self.stats_every),
            "charity": None,
            "environment": {"kind": "well-mixed", "params": {}},
        }
        if self.initial_balances is not None:
            d["initial_balances"] = list(self.initial_balances)
        if self.charity is not None:
            d["charity"] = {"strategy": self.charity.variant, "params": self.charity.params()}
        if self.environment is not None:
            d["environment"] = {"kind": self.environment.kind, "params": self.environment.params()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        charity = d.get("charity")
        env = d.get("environment") or {"kind": "well-mixed"}
        return cls(
            n_agents=d["n_agents"],
            initial_money=d["initial_money"],
            max_ticks=d["max_ticks"],
            init_mode=d.get("init_mode", "equal"),
            initial_balances=(tuple(d["initial_balances"])
                              if d.get("initial_balances") is not None else None),
            critical_threshold=d.get("critical_threshold", 0),
            charity=(CharityStrategy(charity["strategy"], **charity.get("params", {}))
                     if charity else None),
            environment=(GraphSpec(env["kind"], **env.get("params", {}))
                         if env["kind"] != "well-mixed" else None),
            stats_every=d.get("stats_every", 1),
        )

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class TickStats:
    tick: int
    mean: float
    variance: float
    top10_total: int
    bottom50_total: int
    gap: int
    critical: bool


@dataclass
class SimState:
    """Mutable state of a run in progress; owned by a single thread."""

    config: ScenarioConfig
    seed: int
    money: np.ndarray
    rng: np.random.Generator
    tick: int = 0
    graph: object = None
    csr: Optional[tuple] = None
    critical_ticks: list = field(default_factory=list)
    last_exchange: Optional[TransferLedger] = None
    last_charity: Optional[TransferLedger] = None


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _stream(seed: int, key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key,))))


def random_partition(total: int, parts: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random composition of ``total`` into ``parts`` nonnegative integers.

    Stars and bars: choose ``parts - 1`` bar slots among ``total + parts - 1``.
    """
    bars = np.sort(rng.choice(total + parts - 1, size=parts - 1, replace=False))
    edges = np.concatenate(([-1], bars, [total + parts - 1]))
    return np.diff(edges) - 1


def init_run(config: ScenarioConfig, seed: int) -> SimState:
    seed = _check_seed(seed)
    rng = _stream(seed, 0)
    n = config.n_agents
    if config.init_mode == "equal":
        money = np.full(n, config.initial_money, dtype=np.int64)
    elif config.init_mode == "random-partition":
        money = random_partition(config.total_money, n, rng).astype(np.int64)
    else:
        money = np.array(config.initial_balances, dtype=np.int64)
    state = SimState(config=config, seed=seed, money=money, rng=rng)
    if config.environment is not None:
        state.graph = config.environment.build(n, _stream(seed, 1))
        state.csr = state.graph.csr()
    return state


def tick_stats(state: SimState) -> TickStats:
    """Statistics of the current balances, labelled with the current tick."""
    return _stats(state.money, state.tick, state.config)


def _stats(money: np.ndarray, tick: int, config: ScenarioConfig, ordered=None) -> TickStats:
    n = money.size
    if ordered is None:
        ordered = np.sort(money)
    total = int(money.sum())
    sq = int(np.dot(money, money))
    bottom = int(ordered[: n // 2].sum())
    top = int(ordered[n - n // 10:].sum())
    gap = bottom - top
    return TickStats(
        tick=tick,
        mean=total / n,
        variance=(n * sq - total * total) / (n * n),
        top10_total=top,
        bottom50_total=bottom,
        gap=gap,
        critical=gap <= config.critical_threshold,
    )


def step(state: SimState) -> TickStats:
    config = state.config
    if state.tick >= config.max_ticks:
        raise RuntimeError(f"run already reached max_ticks={config.max_ticks}")
    money = state.money
    n = money.size
    state.last_exchange = exchange_tick(money, state.rng, state.csr)
    state.last_charity = None
    state.tick += 1

    order = np.argsort(money, kind="stable")
    ordered = money[order]
    gap = int(ordered[: n // 2].sum()) - int(ordered[n - n // 10:].sum())
    if gap <= config.critical_threshold:
        state.critical_ticks.append(state.tick)
        if config.charity is not None:
            partition = DecilePartition(tuple(order.reshape(10, n // 10)), money.copy())
            state.last_charity = apply_strategy(money, config.charity, partition)
            ordered = None

    stats = _stats(money, state.tick, config, ordered)
    assert stats.mean * n == config.total_money and money.min() >= 0, \
        f"conservation or nonnegativity violated at tick {state.tick}"
    return stats


@dataclass(frozen=True)
class RunResult:
    config: ScenarioConfig
    seed: int
    series: tuple
    final_balances: np.ndarray
    critical_ticks: tuple
    engine_version: str = __version__
    snapshots: dict = field(default_factory=dict, compare=False)

    @property
    def config_digest(self) -> str:
        return self.config.digest()

    @property
    def first_critical_tick(self) -> Optional[int]:
        return self.critical_ticks[0] if self.critical_ticks else None

    @property
    def return_period_count(self) -> int:
        return len(self.critical_ticks)

    @property
    def final(self) -> TickStats:
        return self.series[-1]

    def to_dict(self) -> dict:
        final = self.final
        return {
            "config_digest": self.config_digest,
            "seed": self.seed,
            "engine_version": self.engine_version,
            "max_ticks": self.config.max_ticks,
            "first_critical_tick": self.first_critical_tick,
            "return_period_count": self.return_period_count,
            "critical_ticks": list(self.critical_ticks),
            "terminal": {
                "tick": final.tick,
                "mean": final.mean,
                "variance": final.variance,
                "top10_total": final.top10_total,
                "bottom50_total": final.bottom50_total,
                "gap": final.gap,
                "critical": final.critical,
            },
            "final_balances": [int(b) for b in self.final_balances],
        }


def run(config: ScenarioConfig, seed: int, snapshot_ticks=()) -> RunResult:
    """Run ``config`` to ``max_ticks``.

    ``snapshot_ticks`` names ticks whose full balance vector is kept in
    ``RunResult.snapshots`` (tick 0 is the initial state).
    """
    state = init_run(config, seed)
    wanted = set(snapshot_ticks)
    snapshots = {}
    if 0 in wanted:
        snapshots[0] = state.money.copy()
    series = []
    every = config.stats_every
    for _ in range(config.max_ticks):
        stats = step(state)
        t = state.tick
        if t % every == 0 or t == config.max_ticks:
            series.append(stats)
        if t in wanted:
            snapshots[t] = state.money.copy()
    return RunResult(
        config=config,
        seed=state.seed,
        series=tuple(series),
        final_balances=state.money.copy(),
        critical_ticks=tuple(state.critical_ticks),
        snapshots=snapshots,
    )


BATCH_METRICS = ("mean", "variance", "top10_total", "bottom50_total", "diff",
                 "first_critical_tick", "return_periods")


@dataclass(frozen=True)
class BatchRow:
    run: int
    seed: int
    mean: float
    variance: float
    top10_total: int
    bottom50_total: int
    diff: int
    first_critical_tick: Optional[int]
    return_periods: int

    @classmethod
    def from_result(cls, index: int, result: RunResult) -> "BatchRow":
        final = result.final
        return cls(index, result.seed, final.mean, final.variance, final.top10_total,
                   final.bottom50_total, final.gap, result.first_critical_tick,
                   result.return_period_count)


@dataclass(frozen=True)
class BatchSummary:
    config: ScenarioConfig
    results: tuple
    rows: tuple
    aggregates: dict

    def row_for_seed(self, seed: int) -> BatchRow:
        return next(r for r in self.rows if r.seed == seed)


def aggregate(rows) -> dict:
    """Per-metric ``{"mean", "min", "max", "count"}`` over rows.

    Missing values (no critical tick) are skipped; ``math.fsum`` keeps the
    mean independent of row order.
    """
    out = {}
    for metric in BATCH_METRICS:
        values = [getattr(r, metric) for r in rows if getattr(r, metric) is not None]
        if values:
            out[metric] = {"mean": math.fsum(values) / len(values), "min": min(values),
                           "max": max(values), "count": len(values)}
        else:
            out[metric] = {"mean": None, "min": None, "max": None, "count": 0}
    return out


def run_batch(config: ScenarioConfig, seeds, jobs: int = 1, snapshot_ticks=()) -> BatchSummary:
    """Independent runs of ``config``, one per seed, optionally across processes."""
    seeds = [_check_seed(s) for s in seeds]
    if not seeds:
        raise ConfigError("batch needs at least one seed")
    if len(set(seeds)) != len(seeds):
        dupes = sorted({s for s in seeds if seeds.count(s) > 1})
        raise ConfigError(f"duplicate seeds in batch: {dupes}")
    worker = partial(run, config, snapshot_ticks=tuple(snapshot_ticks))
    if jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, seeds))
    else:
        results = [worker(s) for s in seeds]
    rows = tuple(BatchRow.from_result(i + 1, r) for i, r in enumerate(results))
    return BatchSummary(config, tuple(results), rows, aggregate(rows))


@dataclass(frozen=True)
class ReplicationManifest:
    """Everything needed to regenerate a run's output files."""

    config: ScenarioConfig
    seed: int
    engine_version: str
    digests: dict
    histogram_bin_width: int = 10

    def to_dict(self) -> dict:
        return {
            "engine_version": self.engine_version,
            "seed": self.seed,
            "config": self.config.to_dict(),
            "config_digest": self.config.digest(),
            "histogram_bin_width": self.histogram_bin_width,
            "outputs": dict(sorted(self.digests.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReplicationManifest":
        return cls(
            config=ScenarioConfig.from_dict(d["config"]),
            seed=_check_seed(d["seed"]),
            engine_version=d["engine_version"],
            digests=dict(d.get("outputs", {})),
            histogram_bin_width=d.get("histogram_bin_width", 10),
        )
