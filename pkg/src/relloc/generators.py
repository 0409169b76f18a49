"""Deterministic graph families.

Stochastic generators draw from :class:`random.Random` seeded with the given
integer, so a ``(arguments, seed)`` pair always yields the same graph.
"""

from __future__ import annotations

import random
from pathlib import Path

from .graph import Graph, GraphError, build_graph


def gen_path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return build_graph(((v, v + 1) for v in range(1, n)), n, name=f"path:n={n}")


def gen_grid(n: int, m: int) -> Graph:
    """``P_n [] P_m`` with ``n`` columns (x) and ``m`` rows (y).

    Vertex ``(x, y)`` is numbered ``(y - 1) * n + x``.
    """
    if n < 1 or m < 1:
        raise GraphError("grid needs n, m >= 1")
    edges = []
    for y in range(1, m + 1):
        for x in range(1, n + 1):
            v = (y - 1) * n + x
            if x < n:
                edges.append((v, v + 1))
            if y < m:
                edges.append((v, v + n))
    return build_graph(edges, n * m, grid_shape=(n, m), name=f"grid:n={n},m={m}")


def gen_subdivided_star(k: int) -> Graph:
    """K_{1,k} with every edge subdivided k - 1 times (hub is vertex 1).

    Leg ``j`` consists of vertices ``2 + (j-1)k, ..., 1 + jk`` in order of
    increasing distance from the hub.
    """
    if k < 2:
        raise GraphError("subdivided star needs k >= 2")
    edges = []
    for j in range(k):
        prev = 1
        for t in range(k):
            v = 2 + j * k + t
            edges.append((prev, v))
            prev = v
    return build_graph(edges, 1 + k * k, name=f"substar:k={k}")


def _random_tree_edges(n: int, max_degree: int, rng: random.Random) -> list[tuple[int, int]]:
    if n >= 3 and max_degree < 2:
        raise GraphError("max_degree < 2 cannot connect 3 or more vertices")
    if n == 2 and max_degree < 1:
        raise GraphError("max_degree must be positive")
    deg = [0] * (n + 1)
    open_vertices = [1]
    edges = []
    for v in range(2, n + 1):
        u = rng.choice(open_vertices)
        edges.append((u, v))
        deg[u] += 1
        deg[v] = 1
        if deg[u] == max_degree:
            open_vertices.remove(u)
        if max_degree > 1:
            open_vertices.append(v)
    return edges


def gen_random_tree(n: int, max_degree: int, seed: int) -> Graph:
    """Random tree: vertex v attaches to a uniform earlier vertex with spare degree."""
    if n < 1:
        raise GraphError("tree needs n >= 1")
    rng = random.Random(seed)
    edges = _random_tree_edges(n, max_degree, rng)
    return build_graph(edges, n, name=f"tree:n={n},dmax={max_degree},seed={seed}")


def gen_random_connected(n: int, p: float, max_degree: int, seed: int) -> Graph:
    """Random spanning tree plus independent extra edges of probability ``p``.

    Extra edges are considered in lexicographic order and skipped when an
    endpoint is already saturated.
    """
    if n < 1:
        raise GraphError("graph needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability {p} outside [0, 1]")
    rng = random.Random(seed)
    edges = _random_tree_edges(n, max_degree, rng)
    present = {frozenset(e) for e in edges}
    deg = [0] * (n + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() >= p:
                continue
            if frozenset((u, v)) in present or deg[u] >= max_degree or deg[v] >= max_degree:
                continue
            edges.append((u, v))
            present.add(frozenset((u, v)))
            deg[u] += 1
            deg[v] += 1
    return build_graph(edges, n, name=f"gnp:n={n},p={p},dmax={max_degree},seed={seed}")


def read_edge_list(path: str | Path) -> Graph:
    """Read the ``n m`` / ``u v`` edge-list format."""
    lines = Path(path).read_text().split("\n")
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise GraphError(f"{path}: first line must be 'n m'")
    n, m = (int(t) for t in rows[0])
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"{path}: header announces {m} edges, found {len(body)}")
    edges = []
    for k, row in enumerate(body, start=2):
        if len(row) != 2:
            raise GraphError(f"{path}:{k}: expected 'u v'")
        edges.append((int(row[0]), int(row[1])))
    return build_graph(edges, n, name=f"file:{path}")


def write_edge_list(g: Graph, path: str | Path) -> None:
    edges = g.edges()
    text = f"{g.n} {len(edges)}\n" + "".join(f"{u} {v}\n" for u, v in edges)
    Path(path).write_text(text)


# -- small exhaustive catalogues ------------------------------------------------


def connected_graphs(n: int) -> list[Graph]:
    """All connected graphs on ``n <= 6`` vertices, one per isomorphism class."""
    from itertools import combinations, permutations

    if not 1 <= n <= 6:
        raise GraphError("catalogue limited to 1 <= n <= 6")
    pairs = list(combinations(range(n), 2))
    index = {p: k for k, p in enumerate(pairs)}
    perms = list(permutations(range(n)))
    seen: set[int] = set()
    out = []
    for code in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if code >> k & 1]
        canon = min(
            sum(1 << index[tuple(sorted((pi[u], pi[v])))] for u, v in edges) for pi in perms
        )
        if canon in seen:
            continue
        seen.add(canon)
        try:
            out.append(build_graph([(u + 1, v + 1) for u, v in edges], n, name=f"catalogue:n={n},code={canon}"))
        except GraphError:
            continue
    return out


def _tree_code(adj: list[list[int]], n: int) -> str:
    # canonical string of an unrooted tree: AHU encoding from its center(s)
    def encode(v: int, parent: int) -> str:
        return "(" + "".join(sorted(encode(w, v) for w in adj[v] if w != parent)) + ")"

    degree = [len(adj[v]) for v in range(n)]
    leaves = [v for v in range(n) if degree[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for leaf in leaves:
            for w in adj[leaf]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        leaves = nxt
    return min(encode(c, -1) for c in leaves)


def trees(n: int, max_degree: int | None = None) -> list[Graph]:
    """All trees on ``n <= 12`` vertices up to isomorphism (optionally degree-capped)."""
    if not 1 <= n <= 12:
        raise GraphError("tree catalogue limited to 1 <= n <= 12")
    level: dict[str, list[tuple[int, int]]] = {"()": []}
    for size in range(2, n + 1):
        nxt: dict[str, list[tuple[int, int]]] = {}
        for edges in level.values():
            for attach in range(size - 1):
                cand = edges + [(attach, size - 1)]
                adj: list[list[int]] = [[] for _ in range(size)]
                for u, v in cand:
                    adj[u].append(v)
                    adj[v].append(u)
                if max_degree is not None and max(len(a) for a in adj) > max_degree:
                    continue
                nxt.setdefault(_tree_code(adj, size), cand)
        level = nxt
    return [
        build_graph([(u + 1, v + 1) for u, v in edges], n, name=f"trees:n={n},#{k}")
        for k, edges in enumerate(level[c] for c in sorted(level))
    ]
