"""Command-line front end.

Exit codes: 0 success, 1 bound violation, 2 usage or parse error,
3 engine error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import suites
from .cats import SlowCat
from .engine import GameConfig, GameError, play_game
from .graph import GraphError
from .mice import ExhaustiveEvader, search_escape
from .specs import SpecError, cat_from_spec, graph_from_spec, mouse_from_spec

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("RELLOC_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RELLOC_SEED={raw!r} is not an integer") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _game_config(args, cat, g) -> GameConfig:
    slowness = args.slowness
    if slowness is None:
        # the slow strategy only runs against a mouse of the matching speed
        slowness = 4 * max(2, cat.delta or g.max_degree) if isinstance(cat, SlowCat) else 1
    target = args.target
    if target is None:
        cat.reset(g, GameConfig(slowness=slowness))
        target = cat.guaranteed_distance if cat.guaranteed_distance is not None else 0
    return GameConfig(horizon=args.horizon, slowness=slowness, target_distance=target, seed=args.seed)


# -- play -------------------------------------------------------------------------


def cmd_play(args) -> int:
    g = graph_from_spec(args.graph)
    cat = cat_from_spec(args.cat, args.seed)
    mouse = mouse_from_spec(args.mouse, args.seed)
    cfg = _game_config(args, cat, g)
    trace = play_game(g, cat, mouse, cfg)
    if args.trace:
        _write(args.trace, trace.to_jsonl(g))
    summary = json.dumps(trace.summary(), indent=2, sort_keys=True) + "\n"
    _write(args.summary, summary)
    if args.cert_out:
        Path(args.cert_out).write_text(json.dumps(trace.positions) + "\n")
    if isinstance(mouse, ExhaustiveEvader) and mouse.result is not None:
        res = mouse.result
        verdict = "escape" if res.escaped else f"no escape (caught in round {res.caught})"
        print(f"exhaustive search: {verdict} after {res.nodes} moves", file=sys.stderr)
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


def _suite_params(args) -> dict:
    name = args.suite
    p: dict = {"seed": args.seed}
    if name == "oracle":
        if args.max_n is not None:
            p["max_n"] = args.max_n
        if args.random_cases is not None:
            p["random_cases"] = args.random_cases
    elif name == "tree":
        if args.dmax is not None:
            p["deltas"] = tuple(range(2, args.dmax + 1))
        if args.trials is not None:
            p["trials"] = args.trials
        if args.max_n is not None:
            p["max_n"] = args.max_n
        if args.exhaustive_n is not None:
            p["exhaustive_n"] = args.exhaustive_n
    elif name == "grid":
        if args.sizes:
            p["sizes"] = tuple(args.sizes)
        if args.trials is not None:
            p["random_mice"] = args.trials
    elif name == "path":
        if args.random_sizes is not None:
            p["random_sizes"] = args.random_sizes
        if args.trials is not None:
            p["random_mice"] = args.trials
        if args.max_n is not None:
            p["max_n"] = args.max_n
    elif name == "slow":
        if args.trials is not None:
            p["trials"] = args.trials
        if args.max_n is not None:
            p["max_n"] = args.max_n
        if args.dmax is not None:
            p["max_delta"] = args.dmax
    elif name == "splitting":
        if args.trials is not None:
            p["trials"] = args.trials
        if args.max_n is not None:
            p["max_n"] = args.max_n
    return p


def cmd_verify(args) -> int:
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    report = suites.run_suite(args.suite, jobs=args.jobs, **_suite_params(args))
    if args.report:
        Path(args.report).write_text(report.to_csv(timings=args.timings))
    for c in report.failures:
        where = f" round {c.round}" if c.round is not None else ""
        print(f"VIOLATION {c.case} seed={c.seed}{where}: {c.bound}: {c.detail}", file=sys.stderr)
    print(report.summary_line())
    return EXIT_OK if report.passed else EXIT_VIOLATION


# -- sweep ------------------------------------------------------------------------

SWEEP_COLUMNS = ["size", "trial", "seed", "first_success", "final_radius", "rounds", "status", "escape_distance"]


def _sweep_row(job: tuple) -> dict:
    graph_tpl, cat_spec, mouse_spec, size, trial, seed, horizon, slowness, target = job
    row = {"size": size, "trial": trial, "seed": seed}
    ns = argparse.Namespace(horizon=horizon, slowness=slowness, target=target, seed=seed)
    try:
        g = graph_from_spec(graph_tpl.format(n=size))
        cat = cat_from_spec(cat_spec, seed)
        mouse = mouse_from_spec(mouse_spec, seed)
        cfg = _game_config(ns, cat, g)
        trace = play_game(g, cat, mouse, cfg)
        row.update(
            first_success="" if trace.first_success is None else trace.first_success,
            final_radius=trace.final_radius,
            rounds=trace.rounds,
            status="ok",
        )
        if isinstance(mouse, ExhaustiveEvader):
            row["escape_distance"] = best_escape_distance(g, cat_spec, seed, cfg, mouse.horizon)
    except (SpecError, GraphError, GameError, ValueError) as exc:
        row["status"] = f"error: {exc}"
    return row


def best_escape_distance(g, cat_spec: str, seed: int, cfg: GameConfig, horizon: int) -> int:
    """Largest d such that some trajectory keeps ``rad(M_i) > d`` through the horizon
    (-1 if even ``d = 0`` cannot be escaped)."""
    best = -1
    d = 0
    while True:
        res = search_escape(g, cat_from_spec(cat_spec, seed), cfg, horizon, d)
        if not res.escaped:
            return best
        best = d
        d += 1


def parse_sizes(text: str) -> list[int]:
    """``8,16,32`` or ``a:b`` (inclusive) or ``a:b:step`` or ``a:b:x2`` (doubling)."""
    try:
        if ":" not in text:
            sizes = [int(t) for t in text.split(",") if t.strip()]
        else:
            parts = text.split(":")
            lo, hi = int(parts[0]), int(parts[1])
            step = parts[2] if len(parts) > 2 else "1"
            sizes = []
            v = lo
            while v <= hi:
                sizes.append(v)
                v = v * int(step[1:]) if step.startswith("x") else v + int(step)
                if sizes and v <= sizes[-1]:
                    raise UsageError(f"size range {text!r} does not increase")
    except ValueError:
        raise UsageError(f"cannot parse size list {text!r}") from None
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise UsageError(f"size list {text!r} must be nonempty and increasing")
    return sizes


def cmd_sweep(args) -> int:
    if "{n}" not in args.graph:
        raise UsageError("sweep --graph must contain the placeholder {n}, e.g. grid:n={n}")
    sizes = parse_sizes(args.sizes)
    jobs = [
        (args.graph, args.cat, args.mouse, n, t, args.seed + t, args.horizon, args.slowness, args.target)
        for n in sizes
        for t in range(args.trials)
    ]
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    failed = False
    try:
        w = csv.DictWriter(out, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        if args.jobs > 1:
            pool = ProcessPoolExecutor(max_workers=args.jobs)
            rows = pool.map(_sweep_row, jobs)
        else:
            pool = None
            rows = map(_sweep_row, jobs)
        for row in rows:
            w.writerow(row)
            out.flush()
            failed |= row["status"] != "ok"
        if pool is not None:
            pool.shutdown()
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_ENGINE if failed else EXIT_OK


# -- parser -----------------------------------------------------------------------


def _add_game_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cat", default="tree", help="cat spec, e.g. tree, grid, path, slow, random:seed=1")
    p.add_argument("--mouse", default="greedy", help="mouse spec, e.g. greedy, random:seed=2, stationary:v=1")
    p.add_argument("--horizon", type=int, default=64)
    p.add_argument("--slowness", type=int, default=None, help="default 1 (4Δ for the slow cat)")
    p.add_argument("--target", type=int, default=None, help="success distance (default: the cat's guarantee)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relloc", description="Relative-distance localization games.")
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="run one game")
    play.add_argument("--graph", help="graph spec, e.g. path:n=9, grid:n=16")
    _add_game_flags(play)
    play.add_argument("--seed", type=int, default=None)
    play.add_argument("--trace", help="write the JSONL trace here ('-' for stdout)")
    play.add_argument("--summary", help="write the JSON summary here (default stdout)")
    play.add_argument("--cert-out", help="write the mouse trajectory as a JSON array")
    play.set_defaults(func=cmd_play)

    for name in ("verify", "oracle"):
        v = sub.add_parser(name, help="run a verification suite" if name == "verify" else "verify --suite oracle")
        if name == "verify":
            v.add_argument("--suite", choices=suites.SUITES)
        else:
            v.set_defaults(suite="oracle")
        v.add_argument("--max-n", type=int, default=None)
        v.add_argument("--trials", type=int, default=None)
        v.add_argument("--dmax", type=int, default=None)
        v.add_argument("--sizes", type=lambda s: parse_sizes(s), default=None)
        v.add_argument("--random-sizes", type=int, default=None)
        v.add_argument("--random-cases", type=int, default=None)
        v.add_argument("--exhaustive-n", type=int, default=None)
        v.add_argument("--seed", type=int, default=None)
        v.add_argument("--jobs", type=int, default=1)
        v.add_argument("--report", help="CSV report path")
        v.add_argument("--timings", action="store_true", help="add a wall-clock column to the report")
        v.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="one CSV row per (size, trial)")
    sw.add_argument("--graph", help="graph spec with {n}, e.g. grid:n={n}")
    sw.add_argument("--sizes", help="8,16,32 | 4:20 | 4:20:2 | 8:512:x2")
    _add_game_flags(sw)
    sw.add_argument("--trials", type=int, default=1)
    sw.add_argument("--seed", type=int, default=None)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--out", help="CSV path (default stdout)")
    sw.set_defaults(func=cmd_sweep)
    for p in sub.choices.values():
        p.add_argument("--config", help="JSON file of flag defaults; command-line flags win")
    return parser, sub


REQUIRED = {"play": ("graph",), "verify": ("suite",), "sweep": ("graph", "sizes")}


def _load_config(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def main(argv: list[str] | None = None) -> int:
    parser, sub = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        command = next((a for a in argv if a in sub.choices), None)
        if known.config and command is not None:
            sub.choices[command].set_defaults(**_load_config(known.config))
        args = parser.parse_args(argv)
        missing = [f"--{k}" for k in REQUIRED.get(args.command, ()) if getattr(args, k) is None]
        if missing:
            raise UsageError(f"{args.command} needs {', '.join(missing)}")
        if args.seed is None:
            args.seed = _default_seed()
        if isinstance(getattr(args, "sizes", None), str) and args.command != "sweep":
            args.sizes = parse_sizes(args.sizes)
        elif isinstance(getattr(args, "sizes", None), list) and args.command == "sweep":
            args.sizes = ",".join(str(v) for v in args.sizes)
        return args.func(args)
    except (UsageError, SpecError, GraphError, ValueError) as exc:
        print(f"relloc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GameError as exc:
        where = f" (round {exc.round})" if exc.round is not None else ""
        print(f"relloc: engine error{where}: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
