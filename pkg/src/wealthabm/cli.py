"""Command line entry point: ``wealthabm {run,batch,ofat,report}``.

Exit status is 0 on success, 2 for configuration problems (bad scenario,
bad flags) and 3 for runtime failures (I/O errors, replication mismatch).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import yaml

from . import __version__
from .engine import run, run_batch
from .errors import ConfigError, ReplicationError
from .output import (RUN_FILES, csv_text, fmt, read_batch, read_manifest, sha256_file,
                     write_batch, write_ofat, write_run, write_text)
from .scenario import load_scenario
from .sensitivity import OfatPlan, ofat_run

log = logging.getLogger("wealthabm")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _seed_list(text: str):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _value_list(text: str):
    return [yaml.safe_load(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wealthabm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wealthabm {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seeds_flag):
        p.add_argument("--scenario", help="scenario YAML file")
        p.add_argument("--out", help="output directory (overrides outputs.directory)")
        p.add_argument("--stats-every", type=int, help="record statistics every n ticks")
        if seeds_flag == "seed":
            p.add_argument("--seed", type=int, help="run seed (64-bit unsigned)")
        else:
            p.add_argument("--seeds", type=_seed_list, help="comma-separated run seeds")

    p = sub.add_parser("run", help="single run")
    common(p, "seed")
    p.add_argument("--manifest", help="replay a manifest.json and verify its digests")

    p = sub.add_parser("batch", help="one run per seed plus a summary table")
    common(p, "seeds")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("ofat", help="one-factor-at-a-time sweep")
    common(p, "seed")
    p.add_argument("--param", required=True, help="parameter, e.g. initial_money or charity.d_pct")
    p.add_argument("--values", type=_value_list, required=True, help="comma-separated values")
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("report", help="compare strategy batch directories")
    p.add_argument("batches", nargs="+", help="directories written by 'batch'")
    p.add_argument("--out", help="directory for report.csv and report_runs.csv")
    return parser


def _load(args):
    if not args.scenario:
        raise ConfigError("--scenario is required")
    scenario = load_scenario(args.scenario)
    config = scenario.config
    if args.stats_every is not None:
        config = config.replace(stats_every=args.stats_every)
    out = Path(args.out or scenario.output_dir or "out")
    return scenario, config, out


def cmd_run(args) -> int:
    if args.manifest:
        return _replay(args)
    scenario, config, out = _load(args)
    if args.seed is not None:
        seed = args.seed
    elif len(scenario.seeds) == 1:
        seed = scenario.seeds[0]
    elif scenario.seeds:
        raise ConfigError("scenario lists several seeds; use 'batch' or pass --seed")
    else:
        raise ConfigError("no seed given: set 'seed' in the scenario or pass --seed")
    result = run(config, seed)
    write_run(out, result, scenario.histogram_bin_width)
    print(f"seed {result.seed}: first critical tick {fmt(result.first_critical_tick) or '-'}, "
          f"return periods {result.return_period_count}, final variance {result.final.variance!r}")
    print(f"wrote {out}")
    return EXIT_OK


def _replay(args) -> int:
    manifest_path = Path(args.manifest)
    manifest = read_manifest(manifest_path)
    out = Path(args.out) if args.out else manifest_path.parent / "replay"
    if manifest.engine_version != __version__:
        log.warning("manifest written by engine %s, replaying with %s",
                    manifest.engine_version, __version__)
    result = run(manifest.config, manifest.seed)
    write_run(out, result, manifest.histogram_bin_width)
    mismatched = [name for name in RUN_FILES
                  if manifest.digests.get(name) != sha256_file(out / name)]
    if mismatched:
        raise ReplicationError(f"replayed outputs differ from manifest: {', '.join(mismatched)}")
    print(f"replayed seed {manifest.seed} into {out}: all digests match")
    return EXIT_OK


def cmd_batch(args) -> int:
    scenario, config, out = _load(args)
    seeds = args.seeds or list(scenario.seeds)
    if not seeds:
        raise ConfigError("no seeds given: set 'seeds' in the scenario or pass --seeds")
    summary = run_batch(config, seeds, jobs=args.jobs)
    write_batch(out, summary, seeds, scenario.histogram_bin_width)
    print(csv_text(("run", "seed", "variance", "diff", "first_critical_tick", "return_periods"),
                   ((r.run, r.seed, r.variance, r.diff, r.first_critical_tick, r.return_periods)
                    for r in summary.rows)), end="")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_ofat(args) -> int:
    scenario, config, out = _load(args)
    seed_base = args.seed if args.seed is not None else (scenario.seeds[0] if scenario.seeds else 0)
    plan = OfatPlan(config, args.param, tuple(args.values), args.replicates, seed_base)
    table = ofat_run(plan, jobs=args.jobs)
    path = write_ofat(out, table, plan)
    print(path.read_text(), end="")
    return EXIT_OK


def _mean(values):
    return math.fsum(values) / len(values) if values else None


def cmd_report(args) -> int:
    summary_rows, run_rows = [], []
    for directory in args.batches:
        label, rows = read_batch(directory)
        periods = [int(r["return_periods"]) for r in rows]
        variances = [float(r["variance"]) for r in rows]
        summary_rows.append((label, str(directory), len(rows), _mean(periods), min(periods),
                             max(periods), _mean(variances), min(variances), max(variances)))
        run_rows += [(label, int(r["run"]), int(r["seed"]), int(r["return_periods"]),
                      float(r["variance"])) for r in rows]
    header = ("strategy", "batch", "runs", "return_periods_mean", "return_periods_min",
              "return_periods_max", "variance_mean", "variance_min", "variance_max")
    text = csv_text(header, summary_rows)
    print(text, end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_text(out / "report.csv", text)
        write_text(out / "report_runs.csv", csv_text(
            ("strategy", "run", "seed", "return_periods", "variance"), run_rows))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "batch": cmd_batch, "ofat": cmd_ofat, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"wealthabm: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ReplicationError, OSError, RuntimeError, KeyError, ValueError) as exc:
        print(f"wealthabm: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
