"""Immutable graphs, the shortest-path distance oracle and set geometry.

Vertices are the integers ``1..n``.  Internally every per-vertex array has
length ``n + 1`` and slot 0 is a sentinel that never belongs to a vertex set.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels


class GraphError(ValueError):
    """Raised for malformed or unsupported graph input."""


class Graph:
    """A finite, simple, undirected, connected graph.

    Build instances with :func:`build_graph` or one of the generators in
    :mod:`relloc.generators`; the constructor trusts its input.
    """

    __slots__ = (
        "n",
        "_adj",
        "grid_shape",
        "name",
        "indptr",
        "indices",
        "closed_nbrs",
        "_tables",
        "_lock",
        "_coords",
        "__weakref__",
    )

    def __init__(
        self,
        n: int,
        adjacency: Sequence[Sequence[int]],
        grid_shape: tuple[int, int] | None = None,
        name: str | None = None,
    ) -> None:
        self.n = n
        self._adj = tuple(tuple(sorted(nb)) for nb in adjacency)
        self.grid_shape = grid_shape
        self.name = name or f"graph(n={n})"
        deg = [len(a) for a in self._adj]
        indptr = np.zeros(n + 2, dtype=np.int32)
        np.cumsum(deg, out=indptr[1:])
        self.indptr = indptr
        self.indices = np.fromiter(
            (w for nb in self._adj for w in nb), dtype=np.int32, count=int(indptr[-1])
        )
        width = 1 + max(deg[1:], default=0)
        closed = np.zeros((n + 1, width), dtype=np.int32)
        for v in range(1, n + 1):
            row = (v,) + self._adj[v]
            closed[v, : len(row)] = row
        self.closed_nbrs = closed
        self._tables: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()
        self._coords: tuple[np.ndarray, np.ndarray] | None = None
        for arr in (self.indptr, self.indices, self.closed_nbrs):
            arr.setflags(write=False)

    # immutable: copies share the instance (strategies are deep-copied a lot)
    def __copy__(self) -> Graph:
        return self

    def __deepcopy__(self, memo) -> Graph:
        return self

    def __reduce__(self):
        return (Graph, (self.n, self._adj, self.grid_shape, self.name))

    def __repr__(self) -> str:
        return f"<Graph {self.name} n={self.n} m={self.num_edges}>"

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        return tuple(sorted((v,) + self._adj[v]))

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def num_edges(self) -> int:
        return int(self.indptr[-1]) // 2

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj[1:]), default=0)

    @property
    def is_tree(self) -> bool:
        return self.num_edges == self.n - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u in self.vertices for w in self._adj[u] if u < w]

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, (int, np.integer)) or not 1 <= v <= self.n:
            raise GraphError(f"vertex {v!r} out of range [1, {self.n}]")

    # -- grid helpers -------------------------------------------------------

    def coords(self, v: int) -> tuple[int, int]:
        """``(x, y)`` of a grid vertex, inverting ``v = (y-1)*cols + x``."""
        if self.grid_shape is None:
            raise GraphError(f"{self.name} is not a grid")
        cols = self.grid_shape[0]
        return (v - 1) % cols + 1, (v - 1) // cols + 1

    def vertex_at(self, x: int, y: int) -> int:
        if self.grid_shape is None:
            raise GraphError(f"{self.name} is not a grid")
        cols, rows = self.grid_shape
        if not (1 <= x <= cols and 1 <= y <= rows):
            raise GraphError(f"({x}, {y}) outside the {cols}x{rows} grid")
        return (y - 1) * cols + x

    def coord_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self.grid_shape is None:
            raise GraphError(f"{self.name} is not a grid")
        if self._coords is None:
            cols = self.grid_shape[0]
            v = np.arange(self.n + 1, dtype=np.int32)
            xs = (v - 1) % cols + 1
            ys = (v - 1) // cols + 1
            xs[0] = ys[0] = 0
            xs.setflags(write=False)
            ys.setflags(write=False)
            self._coords = (xs, ys)
        return self._coords

    # -- distance oracle ----------------------------------------------------

    def dist_table(self, source: int, cache: bool = True) -> np.ndarray:
        """Distances from ``source`` to every vertex (slot 0 holds -1)."""
        table = self._tables.get(source)
        if table is not None:
            return table
        if self.grid_shape is not None:
            xs, ys = self.coord_arrays()
            sx, sy = self.coords(source)
            table = (np.abs(xs - sx) + np.abs(ys - sy)).astype(np.int32)
            table[0] = -1
        else:
            table = kernels.bfs_distances(self.indptr, self.indices, source)
        table.setflags(write=False)
        if cache:
            with self._lock:
                table = self._tables.setdefault(source, table)
        return table

    def dist(self, u: int, v: int) -> int:
        self.check_vertex(u)
        self.check_vertex(v)
        if self.grid_shape is not None:
            (ux, uy), (vx, vy) = self.coords(u), self.coords(v)
            return abs(ux - vx) + abs(uy - vy)
        return int(self.dist_table(u)[v])

    def materialize_all(self) -> None:
        """Eagerly fill the distance cache, e.g. before sharing across threads."""
        for v in self.vertices:
            self.dist_table(v)


def build_graph(
    edges: Iterable[tuple[int, int]],
    n: int,
    grid_shape: tuple[int, int] | None = None,
    name: str | None = None,
) -> Graph:
    """Validate an edge list and build a :class:`Graph`.

    Duplicate edges (in either orientation) are dropped; loops, out-of-range
    endpoints and disconnected input raise :class:`GraphError`.
    """
    if n < 1:
        raise GraphError(f"need at least one vertex, got n={n}")
    adj: list[set[int]] = [set() for _ in range(n + 1)]
    for u, v in edges:
        u, v = int(u), int(v)
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside [1, {n}]")
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        adj[u].add(v)
        adj[v].add(u)
    seen = bytearray(n + 1)
    seen[1] = 1
    stack = [1]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = 1
                stack.append(w)
    missing = n - sum(seen)
    if missing:
        raise GraphError(f"graph is disconnected ({missing} vertices unreachable from 1)")
    return Graph(n, [sorted(a) for a in adj], grid_shape=grid_shape, name=name)


# -- vertex sets --------------------------------------------------------------


def as_mask(g: Graph, members) -> np.ndarray:
    """Boolean membership array of length ``n + 1`` for a vertex collection."""
    mask = getattr(members, "mask", None)
    if mask is not None:
        return mask
    if isinstance(members, np.ndarray) and members.dtype == np.bool_:
        if members.shape != (g.n + 1,):
            raise GraphError("membership mask has the wrong length")
        return members
    out = np.zeros(g.n + 1, dtype=np.bool_)
    for v in members:
        g.check_vertex(v)
        out[v] = True
    return out


@dataclass(frozen=True)
class SetRadiusResult:
    radius: int
    center: int


def radius_of_set(g: Graph, members) -> SetRadiusResult:
    """Exact ``min_u max_{m in M} dist(u, m)`` over *all* vertices ``u``.

    The returned center is the smallest vertex id achieving the minimum.
    """
    mask = as_mask(g, members)
    ids = np.flatnonzero(mask)
    if ids.size == 0:
        raise GraphError("radius of an empty vertex set")
    if ids.size == 1:
        return SetRadiusResult(0, int(ids[0]))
    if g.grid_shape is not None:
        return _grid_radius(g, mask)
    if g.is_tree:
        ecc = _tree_set_eccentricity(g, ids)
    else:
        ecc = kernels.masked_eccentricity([g.dist_table(int(m)) for m in ids])
    ecc = ecc[1:]
    center = int(np.argmin(ecc))
    return SetRadiusResult(int(ecc[center]), center + 1)


def set_eccentricity(g: Graph, members, u: int) -> int:
    """``max_{m in M} dist(u, m)``."""
    mask = as_mask(g, members)
    return int(g.dist_table(u)[mask].max())


def _tree_set_eccentricity(g: Graph, ids: np.ndarray) -> np.ndarray:
    # tree metrics: the farthest member from any vertex is an end of a
    # diametral pair of the set, found by a double sweep
    first = g.dist_table(int(ids[0]), cache=False)
    a = int(ids[np.argmax(first[ids])])
    da = g.dist_table(a, cache=False)
    b = int(ids[np.argmax(da[ids])])
    db = g.dist_table(b, cache=False)
    return np.maximum(da, db)


def _grid_radius(g: Graph, mask: np.ndarray) -> SetRadiusResult:
    # L1 ball radius via the rotated coordinates s = x + y, t = x - y
    cols, rows = g.grid_shape
    xs, ys = g.coord_arrays()
    mx, my = xs[mask], ys[mask]
    s, t = mx + my, mx - my
    smax, smin, tmax, tmin = int(s.max()), int(s.min()), int(t.max()), int(t.min())
    r = max((smax - smin + 1) // 2, (tmax - tmin + 1) // 2)
    while True:
        for y in range(1, rows + 1):
            lo = max(smax - r - y, tmax - r + y, 1)
            hi = min(smin + r - y, tmin + r + y, cols)
            if lo <= hi:
                return SetRadiusResult(r, (y - 1) * cols + lo)
        r += 1


# -- trees --------------------------------------------------------------------


def _require_tree(g: Graph) -> None:
    if not g.is_tree:
        raise GraphError(f"{g.name} is not a tree ({g.num_edges} edges, {g.n} vertices)")


def tree_center(g: Graph) -> int:
    """A minimum-eccentricity vertex of a tree (smaller id on a tie)."""
    _require_tree(g)
    return radius_of_set(g, np.r_[False, np.ones(g.n, dtype=np.bool_)]).center


@dataclass(frozen=True)
class RootedTree:
    """A tree hung from ``root``; ``height[v]`` is the depth of the subtree at v."""

    root: int
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    level: tuple[int, ...]
    height: tuple[int, ...]

    def subtree_contains(self, r: int, v: int) -> bool:
        """Is ``v`` in the subtree rooted at ``r``?"""
        while v and self.level[v] > self.level[r]:
            v = self.parent[v]
        return v == r


def rooted_view(g: Graph, root: int) -> RootedTree:
    _require_tree(g)
    g.check_vertex(root)
    n = g.n
    parent = [0] * (n + 1)
    level = [0] * (n + 1)
    order = [root]
    seen = bytearray(n + 1)
    seen[root] = 1
    for u in order:
        for w in g.neighbors(u):
            if not seen[w]:
                seen[w] = 1
                parent[w] = u
                level[w] = level[u] + 1
                order.append(w)
    children: list[list[int]] = [[] for _ in range(n + 1)]
    for v in order[1:]:
        children[parent[v]].append(v)
    height = [0] * (n + 1)
    for v in reversed(order[1:]):
        p = parent[v]
        height[p] = max(height[p], height[v] + 1)
    return RootedTree(
        root=root,
        parent=tuple(parent),
        children=tuple(tuple(sorted(c)) for c in children),
        level=tuple(level),
        height=tuple(height),
    )


# -- splitting edges ----------------------------------------------------------


@dataclass(frozen=True)
class SplitResult:
    u: int
    v: int
    toward_u: int  # |{m : dist(u, m) < dist(v, m)}|
    toward_v: int  # |{m : dist(u, m) > dist(v, m)}|

    @property
    def min_side(self) -> int:
        return min(self.toward_u, self.toward_v)


def find_splitting_edge(g: Graph, members) -> SplitResult:
    """Edge maximising the smaller strict side of the distance split of M.

    Every graph of maximum degree Δ has an edge whose two sides both hold at
    least ``(|M| - 1) / Δ`` members; that bound is asserted on the result.
    """
    mask = as_mask(g, members)
    ids = np.flatnonzero(mask)
    if ids.size == 0:
        raise GraphError("splitting an empty vertex set")
    edges = g.edges()
    if not edges:
        raise GraphError(f"{g.name} has no edges")
    best: SplitResult | None = None
    for u, v in edges:
        du = g.dist_table(u)[ids]
        dv = g.dist_table(v)[ids]
        res = SplitResult(u, v, int(np.count_nonzero(du < dv)), int(np.count_nonzero(du > dv)))
        if best is None or res.min_side > best.min_side:
            best = res
    assert best.min_side * g.max_degree >= ids.size - 1, (best, ids.size)
    return best
