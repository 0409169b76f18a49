"""Referee, exact knowledge tracking and the player interfaces.

Round ``i`` proceeds as follows: the cat's probe ``c_i`` is a function of the
bits ``b_2..b_{i-1}``; the mouse commits ``m_i`` from what it knows through
round ``i - 1``; the referee computes ``d_i = dist(c_i, m_i)``, the bit
``b_i = [d_i <= d_{i-1}]`` (rounds ``i >= 2``) and the knowledge set ``M_i``.
"""

from __future__ import annotations

import copy
import json
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .graph import Graph, GraphError, as_mask, radius_of_set, set_eccentricity

# -- errors -------------------------------------------------------------------


class GameError(RuntimeError):
    """Base class for referee failures; ``round`` names the offending round."""

    def __init__(self, message: str, round: int | None = None) -> None:
        super().__init__(message if round is None else f"round {round}: {message}")
        self.round = round


class IllegalMoveError(GameError):
    pass


class IllegalProbeError(GameError):
    pass


class FalseClaimError(GameError):
    """A strategy declared ``Done`` with a claim its knowledge set refutes."""


class SoundnessError(GameError):
    """The referee-known mouse position left the knowledge set (engine bug)."""


# -- configuration and knowledge sets -----------------------------------------


@dataclass(frozen=True)
class GameConfig:
    horizon: int = 64
    slowness: int = 1
    target_distance: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.slowness < 1:
            raise ValueError(f"slowness must be >= 1, got {self.slowness}")
        if self.target_distance < 0:
            raise ValueError(f"target distance must be >= 0, got {self.target_distance}")

    def may_move(self, i: int) -> bool:
        """Whether ``m_i`` may differ from ``m_{i-1}`` (rounds ``i >= 2``)."""
        return (i - 1) % self.slowness == 0


class CandidateSet:
    """The set ``M_i`` of mouse positions consistent with all bits so far.

    Immutable; an empty instance is the explicit signal of an impossible bit
    sequence and is falsy.
    """

    __slots__ = ("graph", "mask", "round", "_members")

    def __init__(self, graph: Graph, mask: np.ndarray, round: int) -> None:
        mask.setflags(write=False)
        self.graph = graph
        self.mask = mask
        self.round = round
        self._members: tuple[int, ...] | None = None

    @classmethod
    def full(cls, graph: Graph, round: int = 1) -> CandidateSet:
        mask = np.ones(graph.n + 1, dtype=np.bool_)
        mask[0] = False
        return cls(graph, mask, round)

    @classmethod
    def of(cls, graph: Graph, members: Iterable[int], round: int = 0) -> CandidateSet:
        return cls(graph, as_mask(graph, list(members)).copy(), round)

    def __deepcopy__(self, memo) -> CandidateSet:
        return self

    @property
    def members(self) -> tuple[int, ...]:
        if self._members is None:
            self._members = tuple(int(v) for v in np.flatnonzero(self.mask))
        return self._members

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v: int) -> bool:
        return 1 <= v <= self.graph.n and bool(self.mask[v])

    def __eq__(self, other) -> bool:
        if isinstance(other, CandidateSet):
            return np.array_equal(self.mask, other.mask)
        if isinstance(other, (set, frozenset)):
            return set(self.members) == other
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        body = self.members if len(self) <= 12 else f"{len(self)} vertices"
        return f"CandidateSet(round={self.round}, {body})"

    def bounding_box(self) -> tuple[int, int, int, int]:
        """``(x, y, dx, dy)`` with ``M ⊆ [x, x+dx] × [y, y+dy]`` tight (grids)."""
        xs, ys = self.graph.coord_arrays()
        mx, my = xs[self.mask], ys[self.mask]
        x0, y0 = int(mx.min()), int(my.min())
        return x0, y0, int(mx.max()) - x0, int(my.max()) - y0


def update_candidates(
    g: Graph,
    prev: CandidateSet,
    c_prev: int,
    c_cur: int,
    bit: int,
    mouse_may_move: bool = True,
) -> CandidateSet:
    """Advance ``M_{i-1}`` to ``M_i`` given the probes and the bit ``b_i``.

    Only consecutive positions are coupled by the constraints, so this
    single-vertex forward step is exact.  The result is empty iff no legal
    trajectory produces ``bit``.
    """
    g.check_vertex(c_prev)
    g.check_vertex(c_cur)
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    mask = kernels.update_candidates(
        g.closed_nbrs,
        prev.mask,
        g.dist_table(c_prev),
        g.dist_table(c_cur),
        int(bit),
        bool(mouse_may_move),
    )
    return CandidateSet(g, mask, prev.round + 1)


def brute_force_candidates(
    g: Graph, probes: Sequence[int], bits: Sequence[int], slowness: int = 1
) -> frozenset[int]:
    """Knowledge set by enumerating whole trajectories (independent oracle).

    Uses its own Floyd–Warshall distances and never touches the DP, so it can
    check :func:`update_candidates`.  Guarded to ``n <= 10`` and 8 rounds.
    """
    n = g.n
    rounds = len(probes)
    if n > 10 or rounds > 8:
        raise ValueError(f"brute force guard: n={n} (max 10), rounds={rounds} (max 8)")
    if len(bits) != max(0, rounds - 1):
        raise ValueError(f"{rounds} probes need {max(0, rounds - 1)} bits, got {len(bits)}")
    if rounds <= 1:
        return frozenset(range(1, n + 1))
    inf = n + 1
    dist = [[0 if u == v else inf for v in range(n + 1)] for u in range(n + 1)]
    for u, v in g.edges():
        dist[u][v] = dist[v][u] = 1
    for k in range(1, n + 1):
        dk = dist[k]
        for u in range(1, n + 1):
            du = dist[u]
            duk = du[k]
            for v in range(1, n + 1):
                if duk + dk[v] < du[v]:
                    du[v] = duk + dk[v]
    steps = {u: [v for v in range(1, n + 1) if dist[u][v] <= 1] for u in range(1, n + 1)}
    finals: set[int] = set()

    def extend(traj: list[int]) -> None:
        j = len(traj) + 1  # round of the next position
        if j > rounds:
            finals.add(traj[-1])
            return
        prev = traj[-1]
        options = steps[prev] if (j - 1) % slowness == 0 else [prev]
        for v in options:
            closer = dist[probes[j - 1]][v] <= dist[probes[j - 2]][prev]
            if closer == bool(bits[j - 2]):
                traj.append(v)
                extend(traj)
                traj.pop()

    for start in range(1, n + 1):
        extend([start])
    return frozenset(finals)


# -- player interfaces --------------------------------------------------------


@dataclass(frozen=True)
class Probe:
    vertex: int


@dataclass(frozen=True)
class Done:
    """Claim that every member of the current knowledge set is within
    ``radius`` of ``center``."""

    center: int
    radius: int


@dataclass(frozen=True)
class CatObservation:
    """What the cat knows when choosing ``c_i`` (``round == i``)."""

    graph: Graph
    round: int
    bits: tuple[int, ...]  # b_2 .. b_{i-1}
    probes: tuple[int, ...]  # c_1 .. c_{i-1}
    candidates: CandidateSet  # M_{i-1}; all of V before round 1
    config: GameConfig

    @property
    def last_bit(self) -> int | None:
        return self.bits[-1] if self.bits else None


@dataclass(frozen=True)
class MouseObservation:
    """What the mouse knows when committing ``m_i`` (``round == i``).

    ``cat_next_probe`` is ``c_i``: the mouse knows the cat's deterministic
    strategy and the whole history, so it can compute it; the referee hands
    it over instead of making every adversary re-simulate the cat.
    ``cat_factory`` returns a fresh copy of the cat's strategy.
    """

    graph: Graph
    round: int
    probes: tuple[int, ...]
    bits: tuple[int, ...]
    candidates: CandidateSet
    position: int | None  # m_{i-1}
    last_distance: int | None  # d_{i-1}
    may_move: bool
    cat_name: str
    cat_next_probe: int
    cat_factory: Callable[[], "CatStrategy"]
    config: GameConfig

    def legal_moves(self) -> tuple[int, ...]:
        if self.position is None:
            return tuple(self.graph.vertices)
        if not self.may_move:
            return (self.position,)
        return self.graph.closed_neighborhood(self.position)


class CatStrategy(ABC):
    """A deterministic cat: ``c_{i}`` depends only on ``b_2..b_{i-1}``."""

    name = "cat"
    #: distance the strategy guarantees, used as the default target
    guaranteed_distance: int | None = None

    def reset(self, graph: Graph, config: GameConfig) -> None:
        """Bind to a game before the first decision."""

    @abstractmethod
    def decide(self, obs: CatObservation) -> Probe | Done: ...

    def clone(self) -> CatStrategy:
        return copy.deepcopy(self)


class MouseStrategy(ABC):
    name = "mouse"

    def reset(self, graph: Graph, config: GameConfig) -> None:
        """Bind to a game before the first move."""

    @abstractmethod
    def move(self, obs: MouseObservation) -> int: ...


# -- referee ------------------------------------------------------------------


@dataclass(frozen=True)
class RoundRecord:
    i: int
    c: int
    m: int
    d: int
    b: int | None
    m_size: int
    m_radius: int
    m_center: int


@dataclass
class GameTrace:
    graph: str
    cat: str
    mouse: str
    config: GameConfig
    records: list[RoundRecord]
    claim: Done | None = None
    done_round: int | None = None
    first_success: int | None = None
    final_radius: int = 0
    sets: list[CandidateSet] | None = field(default=None, repr=False)

    @property
    def rounds(self) -> int:
        return len(self.records)

    @property
    def positions(self) -> list[int]:
        return [r.m for r in self.records]

    @property
    def bits(self) -> list[int | None]:
        return [r.b for r in self.records]

    def summary(self) -> dict:
        return {
            "first_success": self.first_success,
            "final_radius": self.final_radius,
            "rounds": self.rounds,
            "done_round": self.done_round,
            "claim": None if self.claim is None else asdict(self.claim),
            "claimed_radius": None if self.claim is None else self.claim.radius,
            "graph": self.graph,
            "cat": self.cat,
            "mouse": self.mouse,
            "config": asdict(self.config),
        }

    def to_jsonl(self, g: Graph | None = None) -> str:
        lines = []
        for r in self.records:
            row = asdict(r)
            if g is not None and g.grid_shape is not None:
                row["cx"], row["cy"] = g.coords(r.c)
            lines.append(json.dumps(row, separators=(",", ":")))
        return "".join(line + "\n" for line in lines)


class Referee:
    """Single-game state: probes, positions, bits and the knowledge set.

    ``clone()`` is cheap (graph and knowledge sets are shared), which is what
    the exhaustive evader needs to branch the game.
    """

    def __init__(
        self, graph: Graph, cat: CatStrategy, config: GameConfig, keep_sets: bool = False
    ) -> None:
        self.graph = graph
        self.cat = cat
        self.config = config
        cat.reset(graph, config)
        self._cat_template = cat.clone()
        self.round = 0
        self.probes: list[int] = []
        self.positions: list[int] = []
        self.dists: list[int] = []
        self.bits: list[int] = []
        self.records: list[RoundRecord] = []
        self.candidates = CandidateSet.full(graph, round=0)
        self.sets: list[CandidateSet] | None = [] if keep_sets else None
        self.first_success: int | None = None
        self.claim: Done | None = None
        self.done_round: int | None = None
        self._decision: Probe | Done | None = None

    def clone(self) -> Referee:
        return copy.deepcopy(self)

    def fresh_cat(self) -> CatStrategy:
        return self._cat_template.clone()

    @property
    def finished(self) -> bool:
        return self.claim is not None

    def cat_decision(self) -> Probe | Done:
        if self._decision is None:
            obs = CatObservation(
                graph=self.graph,
                round=self.round + 1,
                bits=tuple(self.bits),
                probes=tuple(self.probes),
                candidates=self.candidates,
                config=self.config,
            )
            decision = self.cat.decide(obs)
            if isinstance(decision, Probe):
                if not isinstance(decision.vertex, (int, np.integer)) or not (
                    1 <= decision.vertex <= self.graph.n
                ):
                    raise IllegalProbeError(
                        f"{self.cat.name} probed {decision.vertex!r}", self.round + 1
                    )
            elif not isinstance(decision, Done):
                raise IllegalProbeError(f"{self.cat.name} returned {decision!r}", self.round + 1)
            self._decision = decision
        return self._decision

    def mouse_observation(self) -> MouseObservation:
        decision = self.cat_decision()
        i = self.round + 1
        return MouseObservation(
            graph=self.graph,
            round=i,
            probes=tuple(self.probes),
            bits=tuple(self.bits),
            candidates=self.candidates,
            position=self.positions[-1] if self.positions else None,
            last_distance=self.dists[-1] if self.dists else None,
            may_move=i == 1 or self.config.may_move(i),
            cat_name=self.cat.name,
            cat_next_probe=decision.vertex if isinstance(decision, Probe) else 0,
            cat_factory=self.fresh_cat,
            config=self.config,
        )

    def legal_moves(self) -> tuple[int, ...]:
        i = self.round + 1
        if i == 1:
            return tuple(self.graph.vertices)
        prev = self.positions[-1]
        if not self.config.may_move(i):
            return (prev,)
        return self.graph.closed_neighborhood(prev)

    def play_round(self, m: int) -> RoundRecord:
        decision = self.cat_decision()
        if not isinstance(decision, Probe):
            raise GameError("the cat has declared Done; no further rounds", self.round + 1)
        g = self.graph
        i = self.round + 1
        if not isinstance(m, (int, np.integer)) or not 1 <= m <= g.n:
            raise IllegalMoveError(f"mouse vertex {m!r} out of range", i)
        m = int(m)
        if i > 1:
            prev = self.positions[-1]
            if not self.config.may_move(i) and m != prev:
                raise IllegalMoveError(
                    f"mouse moved {prev}->{m} in a frozen round (slowness {self.config.slowness})", i
                )
            if m != prev and m not in g.neighbors(prev):
                raise IllegalMoveError(f"mouse jumped {prev}->{m} (not adjacent)", i)
        c = int(decision.vertex)
        d = int(g.dist_table(c)[m])
        if i == 1:
            bit = None
            cands = CandidateSet.full(g, round=1)
        else:
            bit = int(d <= self.dists[-1])
            cands = update_candidates(
                g, self.candidates, self.probes[-1], c, bit, self.config.may_move(i)
            )
            if not cands:
                raise SoundnessError("knowledge set became empty", i)
        if not cands.mask[m]:
            raise SoundnessError(f"mouse vertex {m} not in the knowledge set", i)
        rad = radius_of_set(g, cands)
        rec = RoundRecord(i, c, m, d, bit, len(cands), rad.radius, rad.center)
        self.round = i
        self.probes.append(c)
        self.positions.append(m)
        self.dists.append(d)
        if bit is not None:
            self.bits.append(bit)
        self.records.append(rec)
        self.candidates = cands
        if self.sets is not None:
            self.sets.append(cands)
        if self.first_success is None and rad.radius <= self.config.target_distance:
            self.first_success = i
        self._decision = None
        return rec

    def accept_claim(self, claim: Done) -> None:
        g = self.graph
        g.check_vertex(claim.center)
        reach = set_eccentricity(g, self.candidates, claim.center)
        if reach > claim.radius:
            raise FalseClaimError(
                f"{self.cat.name} claimed radius {claim.radius} around {claim.center}, "
                f"but a candidate lies at distance {reach}",
                self.round,
            )
        self.claim = claim
        self.done_round = self.round
        if self.round == 0 and radius_of_set(g, self.candidates).radius <= self.config.target_distance:
            # M_1 = V whatever is played, so the cat localizes within time 1
            self.first_success = 1

    def trace(self, mouse_name: str = "mouse") -> GameTrace:
        if self.records:
            final_radius = self.records[-1].m_radius
        else:
            final_radius = radius_of_set(self.graph, self.candidates).radius
        return GameTrace(
            graph=self.graph.name,
            cat=self.cat.name,
            mouse=mouse_name,
            config=self.config,
            records=list(self.records),
            claim=self.claim,
            done_round=self.done_round,
            first_success=self.first_success,
            final_radius=final_radius,
            sets=self.sets,
        )


def play_game(
    g: Graph,
    cat: CatStrategy,
    mouse: MouseStrategy,
    cfg: GameConfig,
    keep_sets: bool = False,
) -> GameTrace:
    """Run one game to the horizon or until the cat declares ``Done``.

    A ``Done`` claim is checked against the knowledge set of the last played
    round and a false claim raises :class:`FalseClaimError`.
    """
    ref = Referee(g, cat, cfg, keep_sets=keep_sets)
    mouse.reset(g, cfg)
    while True:
        decision = ref.cat_decision()
        if isinstance(decision, Done):
            ref.accept_claim(decision)
            break
        if ref.round >= cfg.horizon:
            break
        ref.play_round(mouse.move(ref.mouse_observation()))
    return ref.trace(mouse.name)


# -- trace verification -------------------------------------------------------


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    round: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_trace(trace: GameTrace, g: Graph) -> TraceCheck:
    """Recompute every distance, bit and knowledge set of a trace from scratch."""
    cfg = trace.config
    cands = None
    prev: RoundRecord | None = None
    for k, rec in enumerate(trace.records, start=1):
        i = rec.i
        if i != k:
            return TraceCheck(False, k, f"round index {i} where {k} expected")
        try:
            g.check_vertex(rec.c)
            g.check_vertex(rec.m)
        except GraphError as exc:
            return TraceCheck(False, i, str(exc))
        if prev is not None:
            if rec.m != prev.m and rec.m not in g.neighbors(prev.m):
                return TraceCheck(False, i, f"illegal move {prev.m}->{rec.m}")
            if not cfg.may_move(i) and rec.m != prev.m:
                return TraceCheck(False, i, "move in a frozen round")
        d = g.dist(rec.c, rec.m)
        if d != rec.d:
            return TraceCheck(False, i, f"distance {rec.d} recorded, {d} actual")
        if prev is None:
            if rec.b is not None:
                return TraceCheck(False, i, "round 1 carries a bit")
            cands = CandidateSet.full(g, 1)
        else:
            bit = int(rec.d <= prev.d)
            if rec.b != bit:
                return TraceCheck(False, i, f"bit {rec.b} recorded, {bit} actual")
            cands = update_candidates(g, cands, prev.c, rec.c, bit, cfg.may_move(i))
        if rec.m not in cands:
            return TraceCheck(False, i, "mouse outside the knowledge set")
        rad = radius_of_set(g, cands)
        if (len(cands), rad.radius, rad.center) != (rec.m_size, rec.m_radius, rec.m_center):
            return TraceCheck(False, i, "knowledge-set statistics differ")
        prev = rec
    if trace.claim is not None:
        final = cands if cands is not None else CandidateSet.full(g, 0)
        if set_eccentricity(g, final, trace.claim.center) > trace.claim.radius:
            return TraceCheck(False, trace.done_round, "false Done claim")
    return TraceCheck(True)


def all_bit_strings(length: int) -> Iterable[tuple[int, ...]]:
    return product((0, 1), repeat=length)
