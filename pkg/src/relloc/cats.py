"""Cat strategies as incremental, deterministic state machines.

Each strategy sees one :class:`~relloc.engine.CatObservation` per round and
answers with the next probe or a :class:`~relloc.engine.Done` claim.  Paired
probes are scheduled together and the bit of the second probe is read back
on the following call.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .engine import CatObservation, CatStrategy, Done, GameConfig, Probe, update_candidates
from .graph import Graph, GraphError, RootedTree, rooted_view, tree_center


def _ceil_half(k: int) -> int:
    return (k + 1) // 2


def _resolve_delta(g: Graph, delta: int | None) -> int:
    if delta is None:
        delta = max(2, g.max_degree)
    if delta < 2:
        raise GraphError(f"maximum degree parameter must be >= 2, got {delta}")
    if delta < g.max_degree:
        raise GraphError(f"{g.name} has a vertex of degree {g.max_degree} > {delta}")
    return delta


@dataclass(frozen=True)
class Fact:
    """``u -(round)-> v``: at ``round`` the mouse was on v's side of edge uv."""

    u: int
    round: int
    v: int


class TreeCat(CatStrategy):
    """Sibling elimination and descent on a tree rooted at its center.

    Guarantees ``dist(r, m) <= 4Δ - 6`` for every candidate ``m`` when it
    stops, after at most ``2 · max(0, h - (4Δ - 6)) · (2Δ - 2)`` rounds.
    """

    name = "tree"

    def __init__(self, delta: int | None = None) -> None:
        self.delta = delta

    def reset(self, graph: Graph, config: GameConfig) -> None:
        if not graph.is_tree:
            raise GraphError(f"tree strategy needs a tree, got {graph.name}")
        self.delta = _resolve_delta(graph, self.delta)
        self.bound = 4 * self.delta - 6
        self.guaranteed_distance = self.bound
        self.root = tree_center(graph)
        self.view: RootedTree = rooted_view(graph, self.root)
        self.r = self.root
        self.r_plus: int | None = None
        self.X: list[int] = []
        self.Y: list[int] = []
        self.phase = "outer"
        self.facts: list[Fact] = []
        # (first round of the iteration, local root) per outer iteration
        self.iterations: list[tuple[int, int]] = []
        self._emit: deque[int] = deque()
        self._pending: tuple | None = None
        self._done: Done | None = None

    def decide(self, obs: CatObservation) -> Probe | Done:
        if self._done is not None:
            return self._done
        if self._emit:
            return Probe(self._emit.popleft())
        if self._pending is not None:
            self._absorb(obs.last_bit, obs.round - 1)
        return self._advance(obs.round)

    def _schedule(self, first: int, second: int, tag: tuple) -> Probe:
        self._emit.append(second)
        self._pending = tag
        return Probe(first)

    def _absorb(self, bit: int, rnd: int) -> None:
        tag, self._pending = self._pending, None
        if tag[0] == "sibling":
            _, u, v = tag
            loser = u if bit == 1 else v
            self.X.remove(loser)
            self.facts.append(Fact(loser, rnd, self.r))
        else:
            _, u = tag
            if bit == 1:
                self.Y.remove(u)
                self.facts.append(Fact(u, rnd, self.r_plus))
            else:
                self.facts.append(Fact(self.r, rnd, self.r_plus))
                self.r = self.r_plus
                self.phase = "outer"

    def _advance(self, rnd: int) -> Probe | Done:
        view = self.view
        while True:
            if self.phase == "outer":
                if view.height[self.r] <= self.bound:
                    return self._finish()
                self.iterations.append((rnd, self.r))
                self.X = list(view.children[self.r])
                self.phase = "siblings"
            if self.phase == "siblings":
                if len(self.X) >= 2:
                    u, v = self.X[0], self.X[1]
                    return self._schedule(u, v, ("sibling", u, v))
                self.r_plus = self.X[0]
                self.Y = list(view.children[self.r_plus])
                self.phase = "children"
            if self.phase == "children":
                if self.Y:
                    u = self.Y[0]
                    return self._schedule(u, self.r, ("child", u))
                return self._finish()

    def _finish(self) -> Done:
        self.phase = "finished"
        self._done = Done(self.r, self.bound)
        return self._done

    def round_bound(self) -> int:
        """Closing count ``2 · max(0, h - (4Δ-6)) · ((Δ-1) + (Δ-1))``."""
        h = self.view.height[self.root]
        return 2 * max(0, h - self.bound) * (2 * self.delta - 2)


@dataclass(frozen=True)
class BoxState:
    """``[x, x+dx] × [y, y+dy]``; ``swapped`` marks a block with exchanged axes."""

    x: int
    y: int
    dx: int
    dy: int
    swapped: bool = False

    @property
    def radius_bound(self) -> int:
        return _ceil_half(self.dx) + _ceil_half(self.dy)

    @property
    def center(self) -> tuple[int, int]:
        return self.x + self.dx // 2, self.y + self.dy // 2


@dataclass(frozen=True)
class GridBlock:
    start: int  # first round of the block
    before: BoxState
    after: BoxState


def _offset(extent: int) -> int:
    # extent/2 - 1 when even, (extent - 1)/2 when odd
    return _ceil_half(extent) - 1


class GridCat(CatStrategy):
    """Three-probe halving blocks on ``P_n □ P_m`` down to distance 8.

    After each block the box is the exact bounding box of the knowledge set.
    """

    name = "grid"
    guaranteed_distance = 8

    def reset(self, graph: Graph, config: GameConfig) -> None:
        if graph.grid_shape is None:
            raise GraphError(f"grid strategy needs a grid graph, got {graph.name}")
        self.graph = graph
        cols, rows = graph.grid_shape
        self.box = BoxState(1, 1, cols - 1, rows - 1)
        self.blocks: list[GridBlock] = []
        self._emit: deque[int] = deque()
        self._block_start = 1
        self._done: Done | None = None

    def _probe(self, x: int, y: int) -> int:
        cols, rows = self.graph.grid_shape
        return self.graph.vertex_at(min(max(x, 1), cols), min(max(y, 1), rows))

    def decide(self, obs: CatObservation) -> Probe | Done:
        if self._done is not None:
            return self._done
        if self._emit:
            return Probe(self._emit.popleft())
        if obs.round > 1:
            x, y, dx, dy = obs.candidates.bounding_box()
            after = BoxState(x, y, dx, dy)
            self.blocks.append(GridBlock(self._block_start, self.box, after))
            self.box = after
        box = self.box
        if box.radius_bound <= 8:
            self._done = Done(self.graph.vertex_at(*box.center), 8)
            return self._done
        swapped = (box.dx, box.dy) == (9, 7)
        self.box = BoxState(box.x, box.y, box.dx, box.dy, swapped)
        ax, ay = box.x + _offset(box.dx), box.y + _offset(box.dy)
        if swapped:
            probes = [(ax, ay), (ax, ay + 2), (ax + 2, ay + 2)]
        else:
            probes = [(ax, ay), (ax + 2, ay), (ax + 2, ay + 2)]
        self._block_start = obs.round
        self._emit.extend(self._probe(px, py) for px, py in probes[1:])
        return Probe(self._probe(*probes[0]))

    @staticmethod
    def round_bound(n: int) -> int:
        return 3 * ((n - 1).bit_length() + 10)


def path_order(g: Graph) -> list[int]:
    """Vertices of a path graph from its smaller-id end (index 0 unused)."""
    if not g.is_tree or g.max_degree > 2:
        raise GraphError(f"path strategy needs a path, got {g.name}")
    if g.n == 1:
        return [0, 1]
    start = min(v for v in g.vertices if g.degree(v) == 1)
    order = [0, start]
    prev, cur = 0, start
    while len(order) <= g.n:
        nxt = [w for w in g.neighbors(cur) if w != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


@dataclass(frozen=True)
class PathBlock:
    start: int
    before: tuple[int, int]  # (lo, width) in path positions
    after: tuple[int, int]


class PathCat(CatStrategy):
    """Two-probe halving blocks on a path, down to distance 2."""

    name = "path"
    guaranteed_distance = 2

    def reset(self, graph: Graph, config: GameConfig) -> None:
        self.graph = graph
        self.order = path_order(graph)
        self.pos = [0] * (graph.n + 1)
        for p, v in enumerate(self.order[1:], start=1):
            self.pos[v] = p
        self.interval = (1, graph.n - 1)
        self.blocks: list[PathBlock] = []
        self._emit: deque[int] = deque()
        self._block_start = 1
        self._done: Done | None = None

    def _at(self, p: int) -> int:
        return self.order[min(max(p, 1), self.graph.n)]

    def decide(self, obs: CatObservation) -> Probe | Done:
        if self._done is not None:
            return self._done
        if self._emit:
            return Probe(self._emit.popleft())
        if obs.round > 1:
            ps = [self.pos[v] for v in obs.candidates.members]
            after = (min(ps), max(ps) - min(ps))
            self.blocks.append(PathBlock(self._block_start, self.interval, after))
            self.interval = after
        lo, w = self.interval
        if w <= 4:
            self._done = Done(self._at(lo + w // 2), 2)
            return self._done
        self._block_start = obs.round
        if w <= self.FINISH_WIDTH and obs.probes:
            finisher = self._finishing_probe(obs)
            if finisher is not None:
                return Probe(finisher)
        a = lo + _offset(w)
        self._emit.append(self._at(a + 2))
        return Probe(self._at(a))

    #: widths at which a single finishing probe is attempted
    FINISH_WIDTH = 8

    def _finishing_probe(self, obs: CatObservation) -> int | None:
        # halving stalls at width 5 (ceil(5/2) + 2 = 5); one probe compared
        # against the previous one can still force width <= 4 under both bits
        lo, w = self.interval
        prev = obs.probes[-1]
        may_move = obs.config.may_move(obs.round)
        for p in range(max(lo - 4, 1), min(lo + w + 4, self.graph.n) + 1):
            c = self.order[p]
            worst = 0
            for bit in (0, 1):
                nxt = update_candidates(self.graph, obs.candidates, prev, c, bit, may_move)
                if nxt:
                    ps = [self.pos[v] for v in nxt.members]
                    worst = max(worst, max(ps) - min(ps))
            if worst <= 4:
                return c
        return None

    @staticmethod
    def round_bound(n: int) -> int:
        return 2 * ((n - 1).bit_length() + 6)


@dataclass(frozen=True)
class SlowBlock:
    start: int
    anchor: int


class SlowCat(CatStrategy):
    """Exact localization of a ``4Δ``-slow mouse by neighbour comparisons.

    Each block of ``4Δ`` rounds alternates the anchor ``r`` with its
    neighbours, then a closer neighbour ``u`` with its other neighbours; a
    closer second-level vertex becomes the next anchor.
    """

    name = "slow"
    guaranteed_distance = 0

    def __init__(self, delta: int | None = None, start: int | None = None) -> None:
        self.delta = delta
        self.start = start

    def reset(self, graph: Graph, config: GameConfig) -> None:
        self.delta = _resolve_delta(graph, self.delta)
        self.block_len = 4 * self.delta
        if config.slowness != self.block_len:
            raise ValueError(
                f"slow strategy with Δ={self.delta} needs slowness {self.block_len}, "
                f"game has {config.slowness}"
            )
        self.graph = graph
        self.anchor = 1 if self.start is None else self.start
        graph.check_vertex(self.anchor)
        self.blocks: list[SlowBlock] = []
        self._plan: deque[tuple[int, object]] = deque()
        self._tag: object = None
        self._phase = "idle"
        self._used = 0
        self._closer: int | None = None
        self._pivot: int | None = None
        self._next_anchor: int | None = None
        self._done: Done | None = None

    def decide(self, obs: CatObservation) -> Probe | Done:
        if self._done is not None:
            return self._done
        if self._tag is not None:
            if obs.last_bit == 0 and self._closer is None:
                self._closer = self._tag
            self._tag = None
        while not self._plan:
            result = self._transition(obs.round)
            if result is not None:
                return result
        vertex, self._tag = self._plan.popleft()
        self._used += 1
        return Probe(vertex)

    @staticmethod
    def _alternate(hub: int, others: list[int]) -> list[tuple[int, object]]:
        # hub, o1, hub, o2, ..., hub; the bit after each "hub" re-probe says
        # whether the preceding o_j was strictly closer
        plan: list[tuple[int, object]] = [(hub, None)]
        for o in others:
            plan += [(o, None), (hub, o)]
        return plan

    def _transition(self, rnd: int) -> Done | None:
        g = self.graph
        if self._phase in ("idle", "pad"):
            if self._phase == "pad":
                self.anchor = self._next_anchor
            assert (rnd - 1) % self.block_len == 0, rnd
            self.blocks.append(SlowBlock(rnd, self.anchor))
            self._used = 0
            self._closer = None
            self._plan.extend(self._alternate(self.anchor, list(g.neighbors(self.anchor))))
            self._phase = "anchor"
            return None
        if self._phase == "anchor":
            if self._closer is None:
                self._done = Done(self.anchor, 0)
                return self._done
            self._pivot, self._closer = self._closer, None
            others = [w for w in g.neighbors(self._pivot) if w != self.anchor]
            self._plan.extend(self._alternate(self._pivot, others))
            self._phase = "pivot"
            return None
        if self._phase == "pivot":
            if self._closer is None:
                self._done = Done(self._pivot, 0)
                return self._done
            self._next_anchor = self._closer
            self._plan.extend([(self._pivot, None)] * (self.block_len - self._used))
            self._phase = "pad"
            return None
        raise AssertionError(self._phase)


class RandomCat(CatStrategy):
    """Uniform random probes from a seeded generator; never declares Done."""

    def __init__(self, seed: int = 0) -> None:
        self.seed = seed
        self.name = f"random:seed={seed}"

    def reset(self, graph: Graph, config: GameConfig) -> None:
        self.n = graph.n
        self.rng = random.Random(self.seed)

    def decide(self, obs: CatObservation) -> Probe:
        return Probe(self.rng.randint(1, self.n))


def tree_cat(delta: int | None = None) -> TreeCat:
    return TreeCat(delta)


def grid_cat() -> GridCat:
    return GridCat()


def path_cat() -> PathCat:
    return PathCat()


def slow_cat(delta: int | None = None, start: int | None = None) -> SlowCat:
    return SlowCat(delta, start)


def random_cat(seed: int = 0) -> RandomCat:
    return RandomCat(seed)
