"""Command-line front end.

    driftmeter generate    --out DIR [--seed S] ...
    driftmeter simulate    --out DIR --players 140 --rounds 10 ...
    driftmeter measure     --input CSV --out DIR --mode first --indices rand,vi,auc
    driftmeter transitions --input CSV --out DIR [--tau 0.5] [--no-aging]

Every run writes ``manifest.json`` next to its outputs; ``--from-manifest``
replays it.  Exit codes: 0 ok, 1 validation error, 2 I/O error,
3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .clustering import INITS, KMeansConfig
from .dataset import ingest_csv, write_csv
from .drift import DriftConfig, measure, parse_indices
from .errors import ComputationError, DriftMeterError, InvalidConfig, InvalidThreshold, ValidationError
from .game import BELIEF_UPDATE, DEFAULT_MIX, simulate_trace
from .monic import AgingPolicy, track
from .synthgen import SynthConfig, generate

log = logging.getLogger("driftmeter")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_COMPUTE = 0, 1, 2, 3
SEED_ENV = "DRIFTMETER_SEED"
DEFAULT_FEATURES = ("contribution", "belief")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _write_json(path: Path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _resolve_seed(seed):
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise InvalidConfig(f"{SEED_ENV}={env!r} is not an integer") from None
    return 0


def _read_header(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return next(csv.reader(fh), [])


def _resolve_columns(args):
    """Fill in id/time/feature columns from the input header when not given."""
    header = _read_header(args.input)
    id_col = args.id_col or ("subject_id" if "subject_id" in header else "id")
    time_col = args.time_col or ("period" if "period" in header else "t")
    if args.features:
        features = [f.strip() for f in args.features.split(",") if f.strip()]
    elif all(f in header for f in DEFAULT_FEATURES):
        features = list(DEFAULT_FEATURES)
    else:
        features = [c for c in header if c not in (id_col, time_col)]
    return id_col, time_col, features


def _kmeans_config(cfg) -> KMeansConfig:
    return KMeansConfig(k=cfg["k"], max_iterations=cfg["max_iter"], tolerance=cfg["tol"],
                        seed=cfg["seed"], init=cfg["init"], standardize=cfg["standardize"])


def _parse_mix(text):
    if not text:
        return dict(DEFAULT_MIX)
    mix = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        name = name.strip()
        try:
            mix[name] = float(value)
        except ValueError:
            raise InvalidConfig(f"bad --mix entry {part!r}; expected name=proportion") from None
    return mix


# -- subcommands: each takes a fully resolved config dict --------------------

def run_generate(cfg, out: Path):
    sc = SynthConfig(n_items=cfg["items"], n_time_points=cfg["time_points"],
                     cluster_distance=cfg["distance"], jitter_sigma=cfg["jitter"],
                     max_jumps=cfg["max_jumps"], seed=cfg["seed"],
                     repeat_jumpers=not cfg["no_repeat_jumpers"])
    ds, trace = generate(sc)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(ds, out / "dataset.csv", "id", "t")
    rows = [(item, t, int(trace.labels[a, b]))
            for a, item in enumerate(ds.item_ids) for b, t in enumerate(ds.time_points)]
    _write_rows(out / "ground_truth.csv", ["id", "t", "true_label"], rows)
    _write_rows(out / "jumps.csv", ["t", "jumps"],
                [(t, j) for t, j in zip(ds.time_points[1:], trace.jump_counts)])
    return ["dataset.csv", "ground_truth.csv", "jumps.csv"]


def run_simulate(cfg, out: Path):
    ds = simulate_trace(cfg["players"], cfg["rounds"], cfg["mix"], cfg["drift_rate"], cfg["seed"],
                        cfg["decay"], cfg["belief_update"]).dataset
    out.mkdir(parents=True, exist_ok=True)
    write_csv(ds, out / "game.csv", "subject_id", "period")
    return ["game.csv"]


def run_measure(cfg, out: Path):
    ds = ingest_csv(cfg["input"], cfg["id_col"], cfg["time_col"], cfg["features"])
    dc = DriftConfig(mode=cfg["mode"], indices=tuple(cfg["indices"]), kmeans=_kmeans_config(cfg))
    series = measure(ds, dc)
    out.mkdir(parents=True, exist_ok=True)
    if cfg["format"] == "json":
        _write_json(out / "series.json", series.to_dict())
        return ["series.json"]
    path = out / "series.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["reference_t", "comparison_t", "index", "value"])
        for n, (ref, cmp_) in enumerate(series.comparisons):
            for name in dc.indices:
                w.writerow([ref, cmp_, name, _fmt(series.values[name][n])])
        w.writerow([])
        w.writerow(["index", "slope", "intercept"])
        for name in dc.indices:
            w.writerow([name, _fmt(series.slopes[name]), _fmt(series.intercepts.get(name))])
    return ["series.csv"]


def run_transitions(cfg, out: Path):
    ds = ingest_csv(cfg["input"], cfg["id_col"], cfg["time_col"], cfg["features"])
    policy = AgingPolicy.no_aging() if cfg["no_aging"] else AgingPolicy(previous_weight=cfg["previous_weight"])
    report = track(ds, _kmeans_config(cfg), policy, cfg["tau"])
    out.mkdir(parents=True, exist_ok=True)
    if cfg["format"] == "json":
        _write_json(out / "transitions.json", report.to_dict())
        return ["transitions.json"]
    _write_rows(out / "transitions.csv", ["t", "survived", "appeared", "disappeared"], report.rows())
    return ["transitions.csv"]


RUNNERS = {
    "generate": run_generate,
    "simulate": run_simulate,
    "measure": run_measure,
    "transitions": run_transitions,
}


def _resolve(args) -> dict:
    """Materialise every setting so the manifest alone reproduces the run."""
    cfg = {"seed": _resolve_seed(args.seed), "format": args.format}
    cmd = args.command
    if cmd == "generate":
        cfg.update(items=args.items, time_points=args.time_points, distance=args.distance,
                   jitter=args.jitter, max_jumps=args.max_jumps,
                   no_repeat_jumpers=args.no_repeat_jumpers)
    elif cmd == "simulate":
        cfg.update(players=args.players, rounds=args.rounds, drift_rate=args.drift_rate,
                   mix=_parse_mix(args.mix), decay=args.decay, belief_update=BELIEF_UPDATE)
    else:
        if not args.input:
            raise InvalidConfig(f"{cmd} needs --input")
        id_col, time_col, features = _resolve_columns(args)
        cfg.update(input=str(args.input), id_col=id_col, time_col=time_col, features=features,
                   k=args.k, max_iter=args.max_iter, tol=args.tol, init=args.init,
                   standardize=args.standardize)
        if cmd == "measure":
            cfg.update(mode={"first": "first_vs_rest"}.get(args.mode, args.mode),
                       indices=list(parse_indices(args.indices)))
        else:
            if not 0 < args.tau <= 1:
                raise InvalidThreshold(f"--tau must lie in (0, 1], got {args.tau}")
            cfg.update(tau=args.tau, no_aging=args.no_aging, previous_weight=args.previous_weight)
    return cfg


def _manifest(cmd, cfg, out, outputs) -> dict:
    return {
        "tool": "driftmeter",
        "version": __version__,
        "subcommand": cmd,
        "seed": cfg["seed"],
        "config": cfg,
        "out": str(out),
        "outputs": outputs,
    }


def _load_manifest(path, cmd):
    with open(path, encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(manifest, dict) or manifest.get("subcommand") != cmd:
        raise InvalidConfig(f"{path} is not a {cmd!r} manifest")
    try:
        return manifest["config"], Path(manifest["out"])
    except KeyError as exc:
        raise InvalidConfig(f"{path}: manifest lacks {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="driftmeter", description="Measure cluster-membership drift over time points.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def shared(sp):
        sp.add_argument("--out", type=Path, help="output directory")
        sp.add_argument("--seed", type=int, help=f"random seed (falls back to ${SEED_ENV}, then 0)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--from-manifest", type=Path, help="replay a previous run's manifest.json")
        sp.add_argument("--input", type=Path)
        sp.add_argument("--id-col")
        sp.add_argument("--time-col")
        sp.add_argument("--features", help="comma-separated feature columns")

    def clustering(sp):
        sp.add_argument("--k", type=int, default=4)
        sp.add_argument("--max-iter", type=int, default=300)
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--init", choices=INITS, default="kmeanspp")
        sp.add_argument("--standardize", action="store_true")

    g = sub.add_parser("generate", help="write the four-quadrant synthetic drift benchmark")
    shared(g)
    g.add_argument("--items", type=int, default=500)
    g.add_argument("--time-points", type=int, default=20)
    g.add_argument("--distance", type=float, default=5.0)
    g.add_argument("--jitter", type=float, default=0.5)
    g.add_argument("--max-jumps", type=int, default=20)
    g.add_argument("--no-repeat-jumpers", action="store_true",
                   help="each item jumps at most once over the whole run")

    s = sub.add_parser("simulate", help="write a simulated public goods game panel")
    shared(s)
    s.add_argument("--players", type=int, default=140)
    s.add_argument("--rounds", type=int, default=10)
    s.add_argument("--drift-rate", type=float, default=0.0)
    s.add_argument("--mix", help="e.g. " + ",".join(f"{k}={v}" for k, v in DEFAULT_MIX.items()))
    s.add_argument("--decay", type=float, default=0.0, help="tokens of end-game decline per round")

    m = sub.add_parser("measure", help="cluster each time point and emit index series and slopes")
    shared(m)
    clustering(m)
    m.add_argument("--mode", choices=("first", "first_vs_rest", "consecutive"), default="first")
    m.add_argument("--indices", default="jaccard,rand,fm,vi,scaled_vi,auc")

    t = sub.add_parser("transitions", help="survived/appeared/disappeared clusters per consecutive pair")
    shared(t)
    clustering(t)
    t.add_argument("--tau", type=float, default=0.5)
    t.add_argument("--no-aging", action="store_true")
    t.add_argument("--previous-weight", type=float, default=0.5)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cmd = args.command
    try:
        if args.from_manifest:
            cfg, out = _load_manifest(args.from_manifest, cmd)
            out = args.out or out
        else:
            cfg = _resolve(args)
            if args.out is None:
                raise InvalidConfig(f"{cmd} needs --out")
            out = args.out
        try:
            outputs = RUNNERS[cmd](cfg, out)
        except (KeyError, TypeError) as exc:
            if not args.from_manifest:
                raise
            raise InvalidConfig(f"manifest config is incomplete or malformed: {exc}") from None
        _write_json(out / "manifest.json", _manifest(cmd, cfg, out, outputs))
        log.info("wrote %s to %s", ", ".join(outputs), out)
    except ValidationError as exc:
        print(f"driftmeter {cmd}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"driftmeter {cmd}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ComputationError, DriftMeterError) as exc:
        print(f"driftmeter {cmd}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
