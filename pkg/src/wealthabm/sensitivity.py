"""One-factor-at-a-time (OFAT) parameter sweeps with replicated runs."""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import ScenarioConfig, _check_seed, run
from .errors import ConfigError
from .stats import fit_boltzmann_gibbs

_TOP_LEVEL = ("n_agents", "initial_money", "max_ticks", "init_mode",
              "critical_threshold", "stats_every")

OFAT_METRICS = ("variance", "first_critical_tick", "return_periods", "temperature")


def _nested(obj, prefix: str):
    if obj is None:
        return ()
    return tuple(f"{prefix}.{name}" for name in obj.params())


def sweepable_parameters(base: ScenarioConfig) -> tuple:
    """Parameter names ``ofat_expand`` accepts for this base config."""
    return _TOP_LEVEL + _nested(base.charity, "charity") + _nested(base.environment, "environment")


def with_parameter(base: ScenarioConfig, parameter: str, value) -> ScenarioConfig:
    """Copy of ``base`` with one (possibly dotted) parameter changed."""
    if parameter not in sweepable_parameters(base):
        raise ConfigError(
            f"unknown OFAT parameter {parameter!r}; choose from "
            f"{', '.join(sweepable_parameters(base))}"
        )
    if "." not in parameter:
        return base.replace(**{parameter: value})
    group, name = parameter.split(".", 1)
    if group == "charity":
        return base.replace(charity=dataclasses.replace(base.charity, **{name: value}))
    return base.replace(environment=dataclasses.replace(base.environment, **{name: value}))


@dataclass(frozen=True)
class OfatPlan:
    base: ScenarioConfig
    parameter: str
    values: tuple
    replicates: int = 1
    seed_base: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ConfigError("OFAT plan needs at least one value")
        if len(set(map(repr, self.values))) != len(self.values):
            raise ConfigError(f"OFAT values must be distinct, got {list(self.values)}")
        if self.replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {self.replicates}")
        _check_seed(self.seed_base)
        if self.parameter not in sweepable_parameters(self.base):
            raise ConfigError(
                f"unknown OFAT parameter {self.parameter!r}; choose from "
                f"{', '.join(sweepable_parameters(self.base))}"
            )


def replicate_seed(seed_base: int, value_index: int, replicate: int) -> int:
    """64-bit seed hashed from ``(seed_base, value_index, replicate)``.

    Depends on nothing else, so adding sweep values leaves existing seeds alone.
    """
    ss = np.random.SeedSequence(seed_base, spawn_key=(value_index, replicate))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def ofat_expand(plan: OfatPlan):
    """List of ``(config, seed)`` in value-major, replicate-minor order."""
    out = []
    for i, value in enumerate(plan.values):
        try:
            config = with_parameter(plan.base, plan.parameter, value)
        except ConfigError as exc:
            raise ConfigError(f"design point {plan.parameter}={value!r}: {exc}") from exc
        for j in range(plan.replicates):
            out.append((config, replicate_seed(plan.seed_base, i, j)))
    return out


@dataclass(frozen=True)
class OfatRow:
    value_index: int
    value: object
    replicates: int
    metrics: dict
    total_money: int

    def stat(self, metric: str, which: str = "mean"):
        return self.metrics[metric][which]


@dataclass(frozen=True)
class OfatTable:
    parameter: str
    rows: tuple

    def column(self, metric: str, which: str = "mean"):
        return [row.stat(metric, which) for row in self.rows]


def _summary(values):
    present = [v for v in values if v is not None]
    if not present:
        return {"mean": None, "min": None, "max": None, "count": 0}
    return {"mean": math.fsum(present) / len(present), "min": min(present),
            "max": max(present), "count": len(present)}


def _point_metrics(config_seed):
    config, seed = config_seed
    result = run(config, seed)
    return {
        "variance": result.final.variance,
        "first_critical_tick": result.first_critical_tick,
        "return_periods": result.return_period_count,
        "temperature": fit_boltzmann_gibbs(result.final_balances).temperature,
    }


def ofat_run(plan: OfatPlan, jobs: int = 1) -> OfatTable:
    """Run every design point and summarize each over its replicates."""
    design = ofat_expand(plan)
    if jobs > 1 and len(design) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            measured = list(pool.map(_point_metrics, design))
    else:
        measured = []
        for config, seed in design:
            try:
                measured.append(_point_metrics((config, seed)))
            except Exception as exc:
                raise RuntimeError(
                    f"design point {plan.parameter}={_value_at(plan, len(measured))!r} "
                    f"(seed {seed}) failed: {exc}"
                ) from exc
    rows = []
    for i, value in enumerate(plan.values):
        block = measured[i * plan.replicates:(i + 1) * plan.replicates]
        config = design[i * plan.replicates][0]
        rows.append(OfatRow(
            value_index=i,
            value=value,
            replicates=plan.replicates,
            metrics={m: _summary([b[m] for b in block]) for m in OFAT_METRICS},
            total_money=config.total_money,
        ))
    return OfatTable(plan.parameter, tuple(rows))


def _value_at(plan: OfatPlan, flat_index: int):
    return plan.values[flat_index // plan.replicates]


__all__ = [
    "OfatPlan", "OfatRow", "OfatTable", "OFAT_METRICS",
    "ofat_expand", "ofat_run", "replicate_seed", "sweepable_parameters", "with_parameter",
]
