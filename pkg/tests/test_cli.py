import csv
import json
import textwrap

import pytest

from wealthabm import CharityStrategy, ScenarioConfig
from wealthabm.cli import main
from wealthabm.errors import (ScenarioSyntaxError, ScenarioValueError, UnknownKeyError)
from wealthabm.output import TIMESERIES_HEADER
from wealthabm.scenario import (load_scenario, parse_scenario, scenario_from_dict,
                                scenario_from_text, scenario_to_dict)


def write(tmp_path, text, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return path


class TestParseScenario:
    def test_minimal_file_gets_defaults(self, tmp_path):
        path = write(tmp_path, "{n_agents: 500, initial_money: 100, max_ticks: 9000, seed: 1}")
        scenario = load_scenario(path)
        assert scenario.config == ScenarioConfig(500, 100, 9000)
        assert scenario.seeds == (1,)
        assert scenario.histogram_bin_width == 10
        assert parse_scenario(path).critical_threshold == 0

    def test_full_file(self, tmp_path):
        path = write(tmp_path, """
            n_agents: 100
            initial_money: 50
            init_mode: random-partition
            max_ticks: 200
            critical_threshold: -5
            seeds: [3, 4]
            charity:
              strategy: C
              params: {k_pct: 100, p_pct: 60, v_pct: 40, x_pct: 100, y_pct: 60, z_pct: 40}
            environment:
              kind: scale-free
              params: {m0: 3, m: 2}
            outputs:
              directory: somewhere
              stats_every: 5
              histogram_bin_width: 25
        """)
        s = load_scenario(path)
        assert s.config.charity == CharityStrategy.c(100, 60, 40, 100, 60, 40)
        assert s.config.environment.kind == "scale-free"
        assert s.config.stats_every == 5 and s.histogram_bin_width == 25
        assert s.seeds == (3, 4) and s.output_dir == "somewhere"
        again = scenario_from_dict(scenario_to_dict(s))
        assert again.config == s.config and again.seeds == s.seeds

    def test_indivisible_population(self):
        with pytest.raises(ScenarioValueError, match="divisible by 10") as err:
            scenario_from_text("n_agents: 55\ninitial_money: 1\nmax_ticks: 5\n")
        assert err.value.key == "n_agents" and err.value.line == 1

    def test_missing_strategy_parameter(self):
        text = "n_agents: 10\ninitial_money: 1\nmax_ticks: 5\ncharity:\n  strategy: B\n  params: {c_pct: 100}\n"
        with pytest.raises(ScenarioValueError, match="d_pct") as err:
            scenario_from_text(text)
        assert err.value.line == 6

    def test_unknown_key(self):
        with pytest.raises(UnknownKeyError) as err:
            scenario_from_text("n_agents: 10\ninitial_money: 1\nmax_ticks: 5\ntemperature: 3\n")
        assert err.value.key == "temperature" and err.value.line == 4

    def test_unknown_nested_key(self):
        with pytest.raises(UnknownKeyError) as err:
            scenario_from_text("n_agents: 10\ninitial_money: 1\nmax_ticks: 5\noutputs:\n  colour: red\n")
        assert err.value.key == "outputs.colour" and err.value.line == 5

    def test_syntax_error(self):
        with pytest.raises(ScenarioSyntaxError) as err:
            scenario_from_text("n_agents: [10\ninitial_money: 1\n")
        assert err.value.line is not None

    def test_error_kinds_distinguishable(self):
        kinds = set()
        for text in ("a: [", "zzz: 1", "n_agents: 11\ninitial_money: 1\nmax_ticks: 1"):
            try:
                scenario_from_text(text)
            except Exception as exc:
                kinds.add(type(exc))
        assert kinds == {ScenarioSyntaxError, UnknownKeyError, ScenarioValueError}

    @pytest.mark.parametrize("text,key", [
        ("initial_money: 1\nmax_ticks: 5\n", None),
        ("n_agents: 10\ninitial_money: one\nmax_ticks: 5\n", "initial_money"),
        ("n_agents: 10\ninitial_money: 1\nmax_ticks: 5\nseed: 1\nseeds: [2]\n", "seeds"),
        ("n_agents: 10\ninitial_money: 1\nmax_ticks: 5\nseeds: [2, 2]\n", "seeds"),
        ("n_agents: 10\ninitial_money: 1\nmax_ticks: 5\nseed: -4\n", "seed"),
        ("n_agents: 10\ninitial_money: 1\nmax_ticks: 0\n", "max_ticks"),
        ("n_agents: 10\ninitial_money: 1\nmax_ticks: 5\nenvironment: {kind: random}\n", "environment"),
        ("n_agents: 10\ninitial_money: 1\nmax_ticks: 5\noutputs: {stats_every: 0}\n",
         "outputs.stats_every"),
    ])
    def test_invalid_values(self, text, key):
        with pytest.raises(ScenarioValueError) as err:
            scenario_from_text(text)
        assert err.value.key == key


SCENARIO = """
n_agents: 50
initial_money: 10
max_ticks: 600
seed: 7
outputs:
  histogram_bin_width: 5
"""


class TestCommands:
    def test_run_writes_outputs(self, tmp_path, capsys):
        path = write(tmp_path, SCENARIO)
        out = tmp_path / "run"
        assert main(["run", "--scenario", str(path), "--out", str(out)]) == 0
        assert {p.name for p in out.iterdir()} == {
            "timeseries.csv", "histogram.json", "manifest.json", "result.json"}
        lines = (out / "timeseries.csv").read_text().splitlines()
        assert lines[0] == ",".join(TIMESERIES_HEADER)
        assert len(lines) == 601
        assert lines[1].startswith("1,10.0,")
        hist = json.loads((out / "histogram.json").read_text())
        assert set(hist) == {"bin_width", "edges", "counts", "total", "tick"}
        assert hist["bin_width"] == 5 and hist["total"] == 50 and hist["tick"] == 600
        result = json.loads((out / "result.json").read_text())
        assert sum(result["final_balances"]) == 500 and result["seed"] == 7

    def test_run_twice_byte_identical(self, tmp_path):
        path = write(tmp_path, SCENARIO)
        for name in ("a", "b"):
            assert main(["run", "--scenario", str(path), "--out", str(tmp_path / name)]) == 0
        for f in ("timeseries.csv", "histogram.json", "result.json", "manifest.json"):
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()

    def test_manifest_replay(self, tmp_path):
        path = write(tmp_path, SCENARIO)
        out = tmp_path / "orig"
        main(["run", "--scenario", str(path), "--out", str(out), "--seed", "99",
              "--stats-every", "7"])
        replay = tmp_path / "replay"
        assert main(["run", "--manifest", str(out / "manifest.json"), "--out", str(replay)]) == 0
        for f in ("timeseries.csv", "histogram.json", "result.json"):
            assert (out / f).read_bytes() == (replay / f).read_bytes()

    def test_tampered_manifest_fails(self, tmp_path, capsys):
        path = write(tmp_path, SCENARIO)
        out = tmp_path / "orig"
        main(["run", "--scenario", str(path), "--out", str(out)])
        manifest = json.loads((out / "manifest.json").read_text())
        manifest["outputs"]["result.json"] = "0" * 64
        (out / "manifest.json").write_text(json.dumps(manifest))
        assert main(["run", "--manifest", str(out / "manifest.json")]) == 3
        assert "result.json" in capsys.readouterr().err

    def test_batch_summary(self, tmp_path):
        path = write(tmp_path, SCENARIO)
        out = tmp_path / "batch"
        assert main(["batch", "--scenario", str(path), "--seeds", "1,2,3", "--out", str(out),
                     "--jobs", "2"]) == 0
        with open(out / "batch_summary.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["seed"] for r in rows] == ["1", "2", "3"]
        assert list(rows[0]) == ["run", "seed", "mean", "variance", "top10_total",
                                 "bottom50_total", "diff", "first_critical_tick",
                                 "return_periods"]
        assert all((out / f"seed-{s}" / "manifest.json").exists() for s in (1, 2, 3))

    def test_ofat(self, tmp_path):
        path = write(tmp_path, SCENARIO)
        out = tmp_path / "ofat"
        assert main(["ofat", "--scenario", str(path), "--param", "initial_money",
                     "--values", "5,10,20", "--replicates", "2", "--out", str(out)]) == 0
        with open(out / "ofat_table.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["temperature_mean"] for r in rows] == ["5.0", "10.0", "20.0"]

    def test_report_orders_strategies(self, tmp_path, capsys):
        dirs = []
        for label, block in (("a", "charity: {strategy: A}"),
                             ("b", "charity: {strategy: B, params: {c_pct: 100, d_pct: 20}}")):
            path = write(tmp_path, SCENARIO.replace("seed: 7", "seeds: [1, 2]") + block + "\n",
                         name=f"{label}.yaml")
            main(["batch", "--scenario", str(path), "--out", str(tmp_path / label)])
            dirs.append(str(tmp_path / label))
        capsys.readouterr()
        assert main(["report", *dirs, "--out", str(tmp_path / "rep")]) == 0
        text = capsys.readouterr().out.splitlines()
        assert text[0].startswith("strategy,batch,runs,return_periods_mean")
        assert [line.split(",")[0] for line in text[1:]] == ["A", "B"]
        assert (tmp_path / "rep" / "report_runs.csv").exists()

    @pytest.mark.parametrize("argv", [
        ["run"],
        ["run", "--scenario", "MISSING_DIR/none.yaml"],
        ["batch", "--scenario", "S", "--seeds", "1,x"],
        ["frobnicate"],
    ])
    def test_exit_codes(self, tmp_path, argv, capsys):
        argv = [a.replace("S", str(write(tmp_path, SCENARIO))) if a == "S" else a for a in argv]
        code = main(argv)
        expected = 3 if "MISSING_DIR/none.yaml" in argv else 2
        assert code == expected

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = write(tmp_path, "n_agents: 55\ninitial_money: 1\nmax_ticks: 5\nseed: 1\n")
        assert main(["run", "--scenario", str(path)]) == 2
        assert "divisible by 10" in capsys.readouterr().err

    def test_multiple_seeds_need_batch(self, tmp_path):
        path = write(tmp_path, SCENARIO.replace("seed: 7", "seeds: [1, 2]"))
        assert main(["run", "--scenario", str(path), "--out", str(tmp_path / "x")]) == 2
