"""Mouse strategies, from a sitting duck to an exhaustive evader.

The adversaries exploit that the cat is deterministic: the mouse knows the
strategy, hence the probe ``c_i`` it is about to face.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .engine import (
    CandidateSet,
    CatStrategy,
    Done,
    GameConfig,
    MouseObservation,
    MouseStrategy,
    Referee,
    update_candidates,
)
from .graph import Graph, radius_of_set


class StationaryMouse(MouseStrategy):
    def __init__(self, v: int) -> None:
        self.v = v
        self.name = f"stationary:v={v}"

    def reset(self, graph: Graph, config: GameConfig) -> None:
        graph.check_vertex(self.v)

    def move(self, obs: MouseObservation) -> int:
        return self.v


class RandomMouse(MouseStrategy):
    """Uniform start, then uniform steps in ``N[m]`` whenever moving is allowed."""

    def __init__(self, seed: int = 0) -> None:
        self.seed = seed
        self.name = f"random:seed={seed}"

    def reset(self, graph: Graph, config: GameConfig) -> None:
        self.rng = random.Random(self.seed)

    def move(self, obs: MouseObservation) -> int:
        if obs.position is None:
            return self.rng.randint(1, obs.graph.n)
        if not obs.may_move:
            return obs.position
        return self.rng.choice(obs.graph.closed_neighborhood(obs.position))


class ReplayMouse(MouseStrategy):
    """Plays a fixed trajectory (a certificate) and then stays put."""

    def __init__(self, trajectory: Sequence[int], name: str = "replay") -> None:
        if not trajectory:
            raise ValueError("empty trajectory")
        self.trajectory = [int(v) for v in trajectory]
        self.name = name

    def move(self, obs: MouseObservation) -> int:
        i = obs.round
        return self.trajectory[i - 1] if i <= len(self.trajectory) else self.trajectory[-1]


class GreedyEvader(MouseStrategy):
    """One-step lookahead maximising the radius of the next knowledge set.

    The next set depends on the move only through the bit it produces, so
    both outcomes are evaluated once; ties prefer the larger set, then the
    smaller vertex.  ``predictions`` keeps the set each move aimed for.
    """

    name = "greedy"

    def reset(self, graph: Graph, config: GameConfig) -> None:
        self.predictions: list[CandidateSet] = []

    def move(self, obs: MouseObservation) -> int:
        g = obs.graph
        c = obs.cat_next_probe
        dist_c = g.dist_table(c)
        if obs.position is None:
            return self._first_move(obs)
        moves = obs.legal_moves()
        options = {}
        for v in moves:
            bit = int(dist_c[v] <= obs.last_distance)
            options.setdefault(bit, v)
        best = None
        for bit, v in options.items():
            nxt = update_candidates(g, obs.candidates, obs.probes[-1], c, bit, obs.may_move)
            score = (radius_of_set(g, nxt).radius, len(nxt), -v)
            if best is None or score > best[0]:
                best = (score, v, nxt)
        self.predictions.append(best[2])
        return best[1]

    def _first_move(self, obs: MouseObservation) -> int:
        # nothing is learnt in round 1; place the mouse so that round 2 can
        # realise the better bit against (c_1, c_2)
        g = obs.graph
        c1 = obs.cat_next_probe
        factory_cat = obs.cat_factory()
        ref = Referee(g, factory_cat, obs.config)
        ref.cat_decision()
        ref.play_round(1)  # any position; only c_2 is needed
        decision = ref.cat_decision()
        self.predictions.append(CandidateSet.full(g, 1))
        if isinstance(decision, Done):
            return 1
        c2 = decision.vertex
        full = CandidateSet.full(g, 1)
        may_move = obs.config.may_move(2)
        best = None
        for bit in (1, 0):
            nxt = update_candidates(g, full, c1, c2, bit, may_move)
            if not nxt:
                continue
            score = (radius_of_set(g, nxt).radius, len(nxt))
            if best is None or score > best[0]:
                best = (score, bit)
        bit = best[1]
        d1 = g.dist_table(c1)
        d2 = g.dist_table(c2)
        for u in g.vertices:
            steps = g.closed_neighborhood(u) if may_move else (u,)
            if any(int(d2[v] <= d1[u]) == bit for v in steps):
                return u
        raise AssertionError("unreachable: a nonempty set has a predecessor")


# -- exhaustive search ----------------------------------------------------------


@dataclass
class EscapeResult:
    """Outcome of the exhaustive evader.

    ``escaped`` means ``trajectory`` keeps ``rad(M_i) > d`` through round
    ``T``; otherwise ``trajectory`` is the longest-surviving line found and
    ``caught`` the round in which it fails.
    """

    escaped: bool
    trajectory: list[int]
    caught: int | None
    nodes: int = 0
    horizon: int = 0
    target: int = 0
    notes: list[str] = field(default_factory=list)


def search_escape(
    g: Graph, cat: CatStrategy, config: GameConfig, horizon: int, target: int
) -> EscapeResult:
    """Depth-first search over all mouse trajectories against a fixed cat.

    Moves are tried in ascending vertex order; the first escaping line is the
    certificate.  Failed states are memoised on (bit history, position),
    which determines the rest of the game for a deterministic cat.
    """
    if g.n > 10 or horizon > 12:
        raise ValueError(f"exhaustive guard: n={g.n} (max 10), T={horizon} (max 12)")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    root = Referee(g, cat.clone(), config)
    nodes = 0
    failed: dict[tuple, tuple[int, list[int]]] = {}

    def caught_now(ref: Referee) -> bool:
        return ref.records[-1].m_radius <= target

    def dfs(ref: Referee) -> tuple[bool, int, list[int]]:
        # returns (escaped, round caught (or T+1), continuation)
        nonlocal nodes
        decision = ref.cat_decision()
        if isinstance(decision, Done):
            ref.accept_claim(decision)
            return True, horizon + 1, []
        key = (tuple(ref.bits), ref.positions[-1] if ref.positions else 0)
        if key in failed:
            caught, cont = failed[key]
            return False, caught, cont
        best = (0, [])
        for m in ref.legal_moves():
            nodes += 1
            child = ref.clone()
            child.play_round(m)
            if caught_now(child):
                cand = (child.round, [m])
            elif child.round >= horizon:
                return True, horizon + 1, [m]
            else:
                ok, caught, cont = dfs(child)
                if ok:
                    return True, horizon + 1, [m] + cont
                cand = (caught, [m] + cont)
            if cand[0] > best[0]:
                best = cand
        failed[key] = best
        return False, best[0], best[1]

    decision = root.cat_decision()
    if isinstance(decision, Done):
        root.accept_claim(decision)
        rad = radius_of_set(g, root.candidates).radius
        escaped = rad > target
        return EscapeResult(escaped, [1], None if escaped else 1, 0, horizon, target)
    escaped, caught, line = dfs(root)
    return EscapeResult(
        escaped, line, None if escaped else caught, nodes, horizon, target
    )


@dataclass
class WorstCase:
    """Latest ``Done`` round over every mouse trajectory (``None``: some line
    reaches the horizon undecided) and the number of explored moves."""

    done_round: int | None
    trajectory: list[int]
    nodes: int


def worst_case_done(
    g: Graph, cat: CatStrategy, config: GameConfig, horizon: int, max_nodes: int = 2_000_000
) -> WorstCase:
    """Play every mouse trajectory against ``cat`` and report the latest stop.

    Every ``Done`` claim met on the way is validated by the referee, so a
    false claim on any line raises :class:`~relloc.engine.FalseClaimError`.
    """
    nodes = 0
    memo: dict[tuple, tuple[int, list[int]]] = {}
    undecided = horizon + 1

    def dfs(ref: Referee) -> tuple[int, list[int]]:
        nonlocal nodes
        decision = ref.cat_decision()
        if isinstance(decision, Done):
            ref.accept_claim(decision)
            return ref.round, []
        if ref.round >= horizon:
            return undecided, []
        key = (tuple(ref.bits), ref.positions[-1] if ref.positions else 0)
        if key in memo:
            return memo[key]
        best = (-1, [])
        for m in ref.legal_moves():
            nodes += 1
            if nodes > max_nodes:
                raise RuntimeError(f"worst-case search exceeded {max_nodes} nodes")
            child = ref.clone()
            child.play_round(m)
            stop, line = dfs(child)
            if stop > best[0]:
                best = (stop, [m] + line)
        memo[key] = best
        return best

    stop, line = dfs(Referee(g, cat.clone(), config))
    return WorstCase(None if stop == undecided else stop, line, nodes)


class ExhaustiveEvader(MouseStrategy):
    """Runs :func:`search_escape` on its first move, then replays the line."""

    def __init__(self, horizon: int, target: int) -> None:
        self.horizon = horizon
        self.target = target
        self.name = f"exhaustive:T={horizon},d={target}"
        self.result: EscapeResult | None = None

    @property
    def certificate(self) -> list[int] | None:
        return None if self.result is None else self.result.trajectory

    def move(self, obs: MouseObservation) -> int:
        if self.result is None:
            self.result = search_escape(
                obs.graph, obs.cat_factory(), obs.config, self.horizon, self.target
            )
        line = self.result.trajectory
        i = obs.round
        return line[i - 1] if i <= len(line) else obs.position


def stationary_mouse(v: int) -> StationaryMouse:
    return StationaryMouse(v)


def random_mouse(seed: int = 0) -> RandomMouse:
    return RandomMouse(seed)


def greedy_evader() -> GreedyEvader:
    return GreedyEvader()


def exhaustive_evader(horizon: int, target: int) -> ExhaustiveEvader:
    return ExhaustiveEvader(horizon, target)
