"""Scenario files: YAML documents describing a run, a batch or a sweep base.

Example::

    n_agents: 500
    initial_money: 100
    max_ticks: 9000
    seeds: [1, 2, 3]
    charity:
      strategy: B
      params: {c_pct: 100, d_pct: 20}
    outputs:
      directory: out/strategy-b
      histogram_bin_width: 10

Omitted keys default to ``init_mode: equal``, ``critical_threshold: 0``,
``environment: {kind: well-mixed}``, ``outputs.stats_every: 1`` and
``outputs.histogram_bin_width: 10``. Unknown keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml

from .charity import CharityStrategy
from .engine import ScenarioConfig, _check_seed
from .environment import GraphSpec
from .errors import ConfigError, ScenarioSyntaxError, ScenarioValueError, UnknownKeyError

TOP_KEYS = ("n_agents", "initial_money", "init_mode", "initial_balances", "max_ticks",
            "critical_threshold", "seed", "seeds", "charity", "environment", "outputs")
REQUIRED = ("n_agents", "initial_money", "max_ticks")
CHARITY_KEYS = ("strategy", "params")
ENVIRONMENT_KEYS = ("kind", "params")
OUTPUT_KEYS = ("directory", "stats_every", "histogram_bin_width")
CHARITY_PARAMS = ("c_pct", "d_pct", "k_pct", "p_pct", "v_pct", "x_pct", "y_pct", "z_pct")
GRAPH_PARAMS = ("p", "k", "beta", "m0", "m")

DEFAULT_BIN_WIDTH = 10


@dataclass(frozen=True)
class Scenario:
    config: ScenarioConfig
    seeds: tuple = ()
    output_dir: Optional[str] = None
    histogram_bin_width: int = DEFAULT_BIN_WIDTH
    source: Optional[str] = None


def _key_lines(node, prefix=(), lines=None):
    """Map key paths like ``("charity", "params")`` to 1-based line numbers."""
    if lines is None:
        lines = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = prefix + (str(key_node.value),)
            lines[path] = key_node.start_mark.line + 1
            _key_lines(value_node, path, lines)
    return lines


class _Reader:
    def __init__(self, data, lines):
        self.data = data
        self.lines = lines

    def line(self, *path):
        while path:
            if path in self.lines:
                return self.lines[path]
            path = path[:-1]
        return None

    def fail(self, message, *path):
        raise ScenarioValueError(message, key=".".join(path) or None, line=self.line(*path))

    def mapping(self, value, allowed, *path):
        if not isinstance(value, dict):
            self.fail("expected a mapping", *path)
        for key in value:
            if key not in allowed:
                raise UnknownKeyError(
                    f"unknown key; expected one of {', '.join(allowed)}",
                    key=".".join(path + (str(key),)),
                    line=self.line(*path, str(key)),
                )
        return value

    def integer(self, value, *path):
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"expected an integer, got {value!r}", *path)
        return value

    def number(self, value, *path):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"expected a number, got {value!r}", *path)
        return value


def scenario_from_text(text: str, source: Optional[str] = None) -> Scenario:
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioSyntaxError(
            f"malformed scenario: {getattr(exc, 'problem', None) or exc}",
            line=mark.line + 1 if mark is not None else None,
        ) from exc
    return scenario_from_dict(data if data is not None else {}, _key_lines(root), source)


def scenario_from_dict(data, lines=None, source=None) -> Scenario:
    r = _Reader(data, lines or {})
    r.mapping(data, TOP_KEYS)
    for key in REQUIRED:
        if key not in data:
            r.fail(f"missing required key '{key}'")
    for key in ("n_agents", "initial_money", "max_ticks", "critical_threshold"):
        if key in data:
            r.integer(data[key], key)

    if "seed" in data and "seeds" in data:
        r.fail("give either 'seed' or 'seeds', not both", "seeds")
    seeds = []
    if "seed" in data:
        seeds = [data["seed"]]
    elif "seeds" in data:
        if not isinstance(data["seeds"], list) or not data["seeds"]:
            r.fail("'seeds' must be a nonempty list", "seeds")
        seeds = data["seeds"]
    key = "seed" if "seed" in data else "seeds"
    for s in seeds:
        r.integer(s, key)
        try:
            _check_seed(s)
        except ConfigError as exc:
            r.fail(str(exc), key)
    if len(set(seeds)) != len(seeds):
        r.fail("duplicate seeds", key)

    charity = None
    if data.get("charity") is not None:
        block = r.mapping(data["charity"], CHARITY_KEYS, "charity")
        if "strategy" not in block:
            r.fail("missing 'strategy'", "charity")
        params = r.mapping(block.get("params") or {}, CHARITY_PARAMS, "charity", "params")
        for name, value in params.items():
            r.number(value, "charity", "params", name)
        try:
            charity = CharityStrategy(str(block["strategy"]), **params)
        except ConfigError as exc:
            r.fail(str(exc), "charity", "params" if "params" in block else "strategy")

    environment = None
    if data.get("environment") is not None:
        block = r.mapping(data["environment"], ENVIRONMENT_KEYS, "environment")
        kind = block.get("kind", "well-mixed")
        params = r.mapping(block.get("params") or {}, GRAPH_PARAMS, "environment", "params")
        for name, value in params.items():
            r.number(value, "environment", "params", name)
        if kind != "well-mixed":
            try:
                environment = GraphSpec(str(kind), **params)
            except ConfigError as exc:
                r.fail(str(exc), "environment")
        elif params:
            r.fail("well-mixed environment takes no params", "environment", "params")

    outputs = r.mapping(data.get("outputs") or {}, OUTPUT_KEYS, "outputs")
    stats_every = r.integer(outputs.get("stats_every", 1), "outputs", "stats_every")
    bin_width = r.integer(outputs.get("histogram_bin_width", DEFAULT_BIN_WIDTH),
                          "outputs", "histogram_bin_width")
    if bin_width < 1:
        r.fail("histogram_bin_width must be >= 1", "outputs", "histogram_bin_width")
    directory = outputs.get("directory")

    balances = data.get("initial_balances")
    if balances is not None and not isinstance(balances, list):
        r.fail("initial_balances must be a list", "initial_balances")
    try:
        config = ScenarioConfig(
            n_agents=data["n_agents"],
            initial_money=data["initial_money"],
            max_ticks=data["max_ticks"],
            init_mode=data.get("init_mode", "equal"),
            initial_balances=tuple(balances) if balances is not None else None,
            critical_threshold=data.get("critical_threshold", 0),
            charity=charity,
            environment=environment,
            stats_every=stats_every,
        )
    except ConfigError as exc:
        message = str(exc)
        culprit = next((k for k in TOP_KEYS if message.startswith(k)), None)
        if culprit is None and message.startswith("stats_every"):
            r.fail(message, "outputs", "stats_every")
        if culprit is None and "init_mode" in message:
            culprit = "init_mode"
        if culprit is None and any(w in message for w in ("graph", "small-world", "scale-free")):
            culprit = "environment"
        r.fail(message, *((culprit,) if culprit else ()))
    return Scenario(config, tuple(seeds), directory, bin_width, source)


def load_scenario(path) -> Scenario:
    path = Path(path)
    return scenario_from_text(path.read_text(), source=str(path))


def parse_scenario(path) -> ScenarioConfig:
    """Read and validate a scenario file, returning its run configuration."""
    return load_scenario(path).config


def scenario_to_dict(scenario: Scenario) -> dict:
    """Inverse of :func:`scenario_from_dict` (seeds and outputs included)."""
    d = scenario.config.to_dict()
    stats_every = d.pop("stats_every")
    if d["charity"] is None:
        del d["charity"]
    if scenario.seeds:
        if len(scenario.seeds) == 1:
            d["seed"] = scenario.seeds[0]
        else:
            d["seeds"] = list(scenario.seeds)
    d["outputs"] = {"stats_every": stats_every,
                    "histogram_bin_width": scenario.histogram_bin_width}
    if scenario.output_dir is not None:
        d["outputs"]["directory"] = scenario.output_dir
    return d
