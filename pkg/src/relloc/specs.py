"""Parsing of the ``kind:key=value,...`` spec strings used on the command line."""

from __future__ import annotations

import json
from pathlib import Path

from .cats import GridCat, PathCat, RandomCat, SlowCat, TreeCat
from .engine import CatStrategy, MouseStrategy
from .generators import (
    gen_grid,
    gen_path,
    gen_random_connected,
    gen_random_tree,
    gen_subdivided_star,
    read_edge_list,
)
from .graph import Graph
from .mice import ExhaustiveEvader, GreedyEvader, RandomMouse, ReplayMouse, StationaryMouse


class SpecError(ValueError):
    pass


def parse_spec(spec: str) -> tuple[str, dict[str, str]]:
    kind, _, rest = spec.strip().partition(":")
    params: dict[str, str] = {}
    if rest and kind not in ("file", "cert"):
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key:
                raise SpecError(f"malformed parameter {item!r} in {spec!r}")
            params[key.strip()] = value.strip()
    elif rest:
        params["path"] = rest
    return kind, params


def _int(params: dict[str, str], key: str, spec: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise SpecError(f"{spec!r} needs {key}=<int>")
        return default
    try:
        return int(params[key], 0)
    except ValueError:
        raise SpecError(f"{key}={params[key]!r} in {spec!r} is not an integer") from None


def _check_keys(params: dict[str, str], allowed: set[str], spec: str) -> None:
    extra = set(params) - allowed
    if extra:
        raise SpecError(f"unknown parameter(s) {sorted(extra)} in {spec!r}")


def graph_from_spec(spec: str) -> Graph:
    kind, p = parse_spec(spec)
    if kind == "path":
        _check_keys(p, {"n"}, spec)
        return gen_path(_int(p, "n", spec))
    if kind == "grid":
        _check_keys(p, {"n", "m"}, spec)
        n = _int(p, "n", spec)
        return gen_grid(n, _int(p, "m", spec, n))
    if kind == "substar":
        _check_keys(p, {"k"}, spec)
        return gen_subdivided_star(_int(p, "k", spec))
    if kind == "tree":
        _check_keys(p, {"n", "dmax", "seed"}, spec)
        return gen_random_tree(_int(p, "n", spec), _int(p, "dmax", spec), _int(p, "seed", spec))
    if kind == "gnp":
        _check_keys(p, {"n", "p", "dmax", "seed"}, spec)
        try:
            prob = float(p.get("p", "0.1"))
        except ValueError:
            raise SpecError(f"p={p['p']!r} is not a number") from None
        return gen_random_connected(
            _int(p, "n", spec), prob, _int(p, "dmax", spec), _int(p, "seed", spec)
        )
    if kind == "file":
        if "path" not in p:
            raise SpecError("file spec needs a path: file:<PATH>")
        return read_edge_list(p["path"])
    raise SpecError(f"unknown graph family {kind!r}")


def cat_from_spec(spec: str, seed: int = 0) -> CatStrategy:
    kind, p = parse_spec(spec)
    if kind == "tree":
        _check_keys(p, {"delta"}, spec)
        return TreeCat(_int(p, "delta", spec) if "delta" in p else None)
    if kind == "grid":
        _check_keys(p, set(), spec)
        return GridCat()
    if kind == "path":
        _check_keys(p, set(), spec)
        return PathCat()
    if kind == "slow":
        _check_keys(p, {"delta", "r"}, spec)
        return SlowCat(
            _int(p, "delta", spec) if "delta" in p else None,
            _int(p, "r", spec) if "r" in p else None,
        )
    if kind == "random":
        _check_keys(p, {"seed"}, spec)
        return RandomCat(_int(p, "seed", spec, seed))
    raise SpecError(f"unknown cat strategy {kind!r}")


def mouse_from_spec(spec: str, seed: int = 0) -> MouseStrategy:
    kind, p = parse_spec(spec)
    if kind == "stationary":
        _check_keys(p, {"v"}, spec)
        return StationaryMouse(_int(p, "v", spec))
    if kind == "random":
        _check_keys(p, {"seed"}, spec)
        return RandomMouse(_int(p, "seed", spec, seed))
    if kind == "greedy":
        _check_keys(p, set(), spec)
        return GreedyEvader()
    if kind == "exhaustive":
        _check_keys(p, {"T", "d"}, spec)
        return ExhaustiveEvader(_int(p, "T", spec), _int(p, "d", spec))
    if kind == "cert":
        if "path" not in p:
            raise SpecError("cert spec needs a path: cert:<PATH>")
        try:
            trajectory = json.loads(Path(p["path"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read certificate {p['path']}: {exc}") from None
        if not isinstance(trajectory, list) or not all(isinstance(v, int) for v in trajectory):
            raise SpecError(f"{p['path']}: certificate must be a JSON array of vertices")
        return ReplayMouse(trajectory, name=spec)
    raise SpecError(f"unknown mouse strategy {kind!r}")
