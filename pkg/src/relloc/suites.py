"""Verification suites: each case plays games or checks sets and reports the
first bound it finds violated.

Every case is a module-level function of plain arguments, so a suite can be
fanned out over a process pool; results are always reported in case order.
"""

from __future__ import annotations

import csv
import io
import random
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .cats import GridCat, PathCat, SlowCat, TreeCat
from .engine import (
    CandidateSet,
    GameConfig,
    GameError,
    brute_force_candidates,
    play_game,
    update_candidates,
    verify_trace,
)
from .generators import (
    connected_graphs,
    gen_grid,
    gen_path,
    gen_random_connected,
    gen_random_tree,
    trees,
)
from .graph import Graph, find_splitting_edge
from .mice import GreedyEvader, RandomMouse, search_escape, worst_case_done

SUITES = ("oracle", "tree", "grid", "path", "slow", "splitting")


class BoundViolation(AssertionError):
    """A checked bound failed; ``bound`` names it, ``round`` locates it."""

    def __init__(self, bound: str, detail: str, round: int | None = None) -> None:
        self.bound = bound
        self.detail = detail
        self.round = round
        where = f" (round {round})" if round is not None else ""
        super().__init__(f"{bound}: {detail}{where}")


@dataclass
class CaseResult:
    suite: str
    case: str
    seed: int
    ok: bool
    bound: str = ""
    round: int | None = None
    detail: str = ""
    games: int = 0
    seconds: float = 0.0


@dataclass
class SuiteReport:
    suite: str
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.ok]

    @property
    def games(self) -> int:
        return sum(c.games for c in self.cases)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.suite}: {len(self.cases) - len(self.failures)}/{len(self.cases)} "
            f"cases, {self.games} games"
        )

    def to_csv(self, timings: bool = False) -> str:
        # wall-clock is opt-in so that reports are byte-identical run to run
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["suite", "case", "seed", "status", "bound", "round", "detail", "games"]
        w.writerow(header + (["seconds"] if timings else []))
        for c in self.cases:
            row = [
                c.suite,
                c.case,
                c.seed,
                "pass" if c.ok else "fail",
                c.bound,
                "" if c.round is None else c.round,
                c.detail,
                c.games,
            ]
            w.writerow(row + ([f"{c.seconds:.4f}"] if timings else []))
        return buf.getvalue()


@dataclass(frozen=True)
class Case:
    suite: str
    name: str
    seed: int
    func: Callable[..., int]  # returns the number of games played
    args: tuple


def _run_case(case: Case) -> CaseResult:
    t0 = time.perf_counter()
    res = CaseResult(case.suite, case.name, case.seed, True)
    try:
        res.games = case.func(*case.args)
    except BoundViolation as exc:
        res.ok, res.bound, res.round, res.detail = False, exc.bound, exc.round, exc.detail
    except GameError as exc:
        res.ok, res.bound, res.round, res.detail = False, "soundness", exc.round, str(exc)
    res.seconds = time.perf_counter() - t0
    return res


def run_cases(suite: str, cases: list[Case], jobs: int = 1) -> SuiteReport:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case, cases, chunksize=4))
    else:
        results = [_run_case(c) for c in cases]
    return SuiteReport(suite, results)


def _check(cond: bool, bound: str, detail: str, round: int | None = None) -> None:
    if not cond:
        raise BoundViolation(bound, detail, round)


def _play_checked(g: Graph, cat, mouse, cfg: GameConfig, keep_sets: bool = False):
    trace = play_game(g, cat, mouse, cfg, keep_sets=keep_sets)
    check = verify_trace(trace, g)
    _check(check.ok, "trace replay", f"{g.name} vs {mouse.name}: {check.reason}", check.round)
    return trace


def _ceil_half(k: int) -> int:
    return (k + 1) // 2


# -- oracle ---------------------------------------------------------------------


def _oracle_graph(g: Graph, probe_seqs: list[tuple[int, ...]], slowness: int, max_bits: int) -> int:
    # walk the tree of bit strings, extending the DP one round per level and
    # comparing every node with trajectory enumeration
    for probes in probe_seqs:
        cfg = GameConfig(slowness=slowness)
        stack = [((), CandidateSet.full(g, 1))]
        while stack:
            bits, cands = stack.pop()
            got = frozenset(cands.members)
            want = brute_force_candidates(g, probes[: len(bits) + 1], bits, slowness)
            _check(
                got == want,
                "DP equals enumeration",
                f"{g.name} k={slowness} probes={probes[: len(bits) + 1]} bits={bits}: "
                f"DP {sorted(got)} vs {sorted(want)}",
                len(bits) + 1,
            )
            if len(bits) >= max_bits or len(bits) + 1 >= len(probes):
                continue
            i = len(bits) + 2
            for b in (1, 0):
                nxt = update_candidates(g, cands, probes[i - 2], probes[i - 1], b, cfg.may_move(i))
                stack.append((bits + (b,), nxt))
    return 0


def _probe_sequences(g: Graph, length: int, rng: random.Random, count: int) -> list[tuple[int, ...]]:
    n = g.n
    seqs = [
        tuple((j % n) + 1 for j in range(length)),
        tuple(1 if j % 2 == 0 else n for j in range(length)),
    ]
    while len(seqs) < count:
        seqs.append(tuple(rng.randint(1, n) for _ in range(length)))
    return seqs


def _oracle_catalogue_case(n: int, index: int, seed: int, max_len: int) -> int:
    g = connected_graphs(n)[index]
    rng = random.Random(seed)
    seqs = _probe_sequences(g, max_len, rng, 5)
    for k in (1, 2, 3):
        _oracle_graph(g, seqs, k, max_len - 1)
    return 0


def _oracle_random_case(seed: int, max_n: int, max_len: int) -> int:
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    g = gen_random_connected(n, rng.choice((0.0, 0.2, 0.5)), rng.randint(2, 4), seed)
    k = rng.choice((1, 1, 2, 3))
    probes = tuple(rng.randint(1, n) for _ in range(max_len))
    _oracle_graph(g, [probes], k, max_len - 1)
    return 0


def suite_oracle(
    max_n: int = 5, random_cases: int = 1000, random_max_n: int = 8, max_len: int = 6, seed: int = 0
) -> list[Case]:
    cases = []
    for n in range(1, max_n + 1):
        for idx, g in enumerate(connected_graphs(n)):
            s = seed + 1000 * n + idx
            cases.append(Case("oracle", g.name, s, _oracle_catalogue_case, (n, idx, s, max_len)))
    for t in range(random_cases):
        s = seed + 10**6 + t
        cases.append(Case("oracle", f"random#{t}", s, _oracle_random_case, (s, random_max_n, max_len)))
    return cases


# -- tree -----------------------------------------------------------------------


def check_tree_game(g: Graph, delta: int, mouse) -> int:
    cat = TreeCat(delta)
    trace = _play_checked(g, cat, mouse, GameConfig(horizon=10**6), keep_sets=True)
    bound = 4 * delta - 6
    limit = cat.round_bound()
    _check(trace.claim is not None, "tree cat stops", f"{g.name}: no Done claim")
    _check(trace.claim.radius == bound, "claimed distance 4Δ-6", f"claimed {trace.claim.radius}")
    _check(
        trace.done_round <= limit,
        "tree round bound",
        f"{g.name}: Done in round {trace.done_round} > {limit}",
        trace.done_round,
    )
    view = cat.view
    for start, r in cat.iterations:
        if start == 1:
            continue
        prev = trace.sets[start - 2]
        outside = [v for v in prev.members if not view.subtree_contains(r, v)]
        _check(not outside, "M inside T_r", f"{g.name}: {outside[:5]} outside T_{r}", start)
    return 1


def _tree_random_case(delta: int, seed: int, max_n: int) -> int:
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    g = gen_random_tree(n, delta, seed)
    return check_tree_game(g, delta, GreedyEvader()) + check_tree_game(g, delta, RandomMouse(seed))


def check_tree_exhaustive(g: Graph, delta: int) -> int:
    cat = TreeCat(delta)
    cat.reset(g, GameConfig())
    limit = cat.round_bound()
    cfg = GameConfig(horizon=max(limit, 1), target_distance=cat.bound)
    worst = worst_case_done(g, TreeCat(delta), cfg, horizon=limit + 1)
    _check(
        worst.done_round is not None and worst.done_round <= limit,
        "tree round bound (all trajectories)",
        f"{g.name}: latest Done {worst.done_round} > {limit} via {worst.trajectory}",
    )
    if limit >= 1:
        esc = search_escape(g, TreeCat(delta), cfg, limit, cat.bound)
        _check(
            not esc.escaped,
            "no escape within the round bound",
            f"{g.name}: escape {esc.trajectory}",
        )
    return 1


def _tree_catalogue_case(n: int, index: int, delta: int) -> int:
    return check_tree_exhaustive(trees(n, delta)[index], delta)


def suite_tree(
    deltas: tuple[int, ...] = (2, 3, 4, 5),
    trials: int = 50,
    max_n: int = 200,
    exhaustive_n: int = 9,
    seed: int = 0,
) -> list[Case]:
    cases = []
    for delta in deltas:
        for t in range(trials):
            s = seed + 1000 * delta + t
            cases.append(Case("tree", f"delta={delta}#{t}", s, _tree_random_case, (delta, s, max_n)))
    if exhaustive_n >= 9:
        cases.append(Case("tree", "path:n=9 exhaustive", 0, check_tree_exhaustive, (gen_path(9), 2)))
    for n in range(1, exhaustive_n + 1):
        for idx in range(len(trees(n, 3))):
            cases.append(Case("tree", f"trees:n={n},#{idx} exhaustive", 0, _tree_catalogue_case, (n, idx, 3)))
    return cases


# -- grid -----------------------------------------------------------------------


def check_grid_game(n: int, mouse) -> int:
    g = gen_grid(n, n)
    cat = GridCat()
    limit = GridCat.round_bound(n)
    trace = _play_checked(g, cat, mouse, GameConfig(horizon=limit + 30, target_distance=8))
    _check(
        trace.first_success is not None and trace.first_success <= limit,
        "grid round bound",
        f"n={n} vs {mouse.name}: rad <= 8 first in round {trace.first_success}, bound {limit}",
    )
    positions = trace.positions
    for blk in cat.blocks:
        a, b = blk.before, blk.after
        end = blk.start + 2
        # the box is the bounding box of M, which must hold the mouse
        mx, my = g.coords(positions[end - 1])
        _check(
            b.x <= mx <= b.x + b.dx and b.y <= my <= b.y + b.dy,
            "box containment",
            f"n={n}: mouse ({mx},{my}) outside box {b}",
            end,
        )
        hx, hy = (3, 4) if a.swapped else (4, 3)
        _check(
            b.dx <= _ceil_half(a.dx) + hx,
            "x-extent halving",
            f"n={n} vs {mouse.name}: {a.dx} -> {b.dx}",
            end,
        )
        _check(
            b.dy <= _ceil_half(a.dy) + hy,
            "y-extent halving",
            f"n={n} vs {mouse.name}: {a.dy} -> {b.dy}",
            end,
        )
    return 1


def _grid_case(n: int, mouse_kind: str, seed: int) -> int:
    mouse = GreedyEvader() if mouse_kind == "greedy" else RandomMouse(seed)
    return check_grid_game(n, mouse)


def suite_grid(sizes: tuple[int, ...] = (8, 16, 32, 64, 128, 256, 512), random_mice: int = 20, seed: int = 0) -> list[Case]:
    cases = []
    for n in sizes:
        cases.append(Case("grid", f"n={n} greedy", seed, _grid_case, (n, "greedy", seed)))
        for t in range(random_mice):
            s = seed + t
            cases.append(Case("grid", f"n={n} random#{t}", s, _grid_case, (n, "random", s)))
    return cases


# -- path -----------------------------------------------------------------------


def check_path_game(n: int, mouse) -> int:
    g = gen_path(n)
    cat = PathCat()
    limit = PathCat.round_bound(n)
    trace = _play_checked(g, cat, mouse, GameConfig(horizon=limit + 20, target_distance=2))
    _check(
        trace.first_success is not None and trace.first_success <= limit,
        "path round bound",
        f"n={n} vs {mouse.name}: rad <= 2 first in round {trace.first_success}, bound {limit}",
    )
    _check(trace.final_radius <= 2, "path final radius", f"n={n}: final radius {trace.final_radius}")
    for blk in cat.blocks:
        (_, w), (_, w2) = blk.before, blk.after
        _check(
            w2 <= max(_ceil_half(w) + 2, 4),
            "path width recurrence",
            f"n={n} vs {mouse.name}: width {w} -> {w2}",
            blk.start,
        )
    return 1


def _path_case(n: int, mouse_kind: str, seed: int) -> int:
    mouse = GreedyEvader() if mouse_kind == "greedy" else RandomMouse(seed)
    return check_path_game(n, mouse)


def path_sizes(random_sizes: int = 20, seed: int = 0, max_n: int = 4097) -> list[int]:
    sizes = {4}
    k = 2
    while 2**k + 1 <= max_n:
        sizes.add(2**k + 1)
        k += 1
    rng = random.Random(seed)
    extra = set()
    while len(extra) < random_sizes:
        v = rng.randint(4, max_n)
        if v not in sizes:
            extra.add(v)
    return sorted(sizes | extra)


def suite_path(random_sizes: int = 20, random_mice: int = 3, seed: int = 0, max_n: int = 4097) -> list[Case]:
    cases = []
    for n in path_sizes(random_sizes, seed, max_n):
        cases.append(Case("path", f"n={n} greedy", seed, _path_case, (n, "greedy", seed)))
        for t in range(random_mice):
            s = seed + t
            cases.append(Case("path", f"n={n} random#{t}", s, _path_case, (n, "random", s)))
    return cases


# -- slow -----------------------------------------------------------------------


def check_slow_game(g: Graph, mouse) -> int:
    delta = max(2, g.max_degree)
    cat = SlowCat(delta)
    k = 4 * delta
    trace = _play_checked(
        g, cat, mouse, GameConfig(horizon=k * (g.n + 2), slowness=k), keep_sets=True
    )
    _check(trace.claim is not None, "slow cat stops", f"{g.name} vs {mouse.name}: no Done")
    _check(trace.claim.radius == 0, "claimed distance 0", f"claimed {trace.claim.radius}")
    positions = trace.positions
    final = trace.sets[-1].members if trace.sets else tuple(g.vertices)
    _check(
        final == (trace.claim.center,) and positions[-1] == trace.claim.center,
        "M = {v} = {m}",
        f"{g.name}: M={final[:5]}, center {trace.claim.center}, mouse {positions[-1]}",
        trace.done_round,
    )
    blocks = cat.blocks
    d0 = g.dist(blocks[0].anchor, positions[blocks[0].start - 1])
    for b1, b2 in zip(blocks, blocks[1:]):
        before = g.dist(b1.anchor, positions[b1.start - 1])
        after = g.dist(b2.anchor, positions[b2.start - 1])
        _check(
            after < before,
            "anchor distance decreases per block",
            f"{g.name} vs {mouse.name}: {before} -> {after}",
            b2.start,
        )
    _check(
        len(blocks) <= d0 + 1,
        "block count <= initial distance + 1",
        f"{g.name}: {len(blocks)} blocks, initial distance {d0}",
    )
    return 1


def _slow_case(seed: int, max_n: int, max_delta: int) -> int:
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    dmax = rng.randint(2, max_delta)
    g = gen_random_connected(n, rng.choice((0.0, 0.02, 0.05, 0.1)), dmax, seed)
    check_slow_game(g, GreedyEvader())
    check_slow_game(g, RandomMouse(seed))
    return 2


def suite_slow(trials: int = 50, max_n: int = 100, max_delta: int = 5, seed: int = 0) -> list[Case]:
    return [
        Case("slow", f"graph#{t}", seed + t, _slow_case, (seed + t, max_n, max_delta))
        for t in range(trials)
    ]


# -- splitting edge -------------------------------------------------------------


def _bfs(g: Graph, s: int) -> list[int]:
    dist = [-1] * (g.n + 1)
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _splitting_case(seed: int, max_n: int) -> int:
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    g = gen_random_connected(n, rng.choice((0.0, 0.05, 0.2)), rng.randint(2, 5), seed)
    members = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
    res = find_splitting_edge(g, members)
    delta = g.max_degree
    need = len(members) - 1
    _check(res.v in g.neighbors(res.u), "splitting edge is an edge", f"{res.u}-{res.v}")
    dists = {v: _bfs(g, v) for v in g.vertices}
    cu = sum(1 for m in members if dists[res.u][m] < dists[res.v][m])
    cv = sum(1 for m in members if dists[res.u][m] > dists[res.v][m])
    _check((cu, cv) == (res.toward_u, res.toward_v), "side counts", f"{(cu, cv)} vs {res}")
    _check(cu * delta >= need and cv * delta >= need, "sides >= (|M|-1)/Δ", f"{g.name}: {res}, |M|={len(members)}")
    best = max(
        min(
            sum(1 for m in members if dists[u][m] < dists[v][m]),
            sum(1 for m in members if dists[u][m] > dists[v][m]),
        )
        for u, v in g.edges()
    ) if g.n > 1 else 0
    _check(res.min_side == best, "splitting edge maximal", f"{g.name}: min side {res.min_side} < {best}")
    return 0


def suite_splitting(trials: int = 200, max_n: int = 40, seed: int = 0) -> list[Case]:
    return [
        Case("splitting", f"trial#{t}", seed + t, _splitting_case, (seed + t, max_n))
        for t in range(trials)
    ]


# -- dispatcher -----------------------------------------------------------------


def build_suite(name: str, **params) -> list[Case]:
    builders = {
        "oracle": suite_oracle,
        "tree": suite_tree,
        "grid": suite_grid,
        "path": suite_path,
        "slow": suite_slow,
        "splitting": suite_splitting,
    }
    if name not in builders:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return builders[name](**params)


def run_suite(name: str, jobs: int = 1, **params) -> SuiteReport:
    return run_cases(name, build_suite(name, **params), jobs=jobs)
