import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relloc.cats import RandomCat, TreeCat
from relloc.engine import (
    CandidateSet,
    CatStrategy,
    Done,
    FalseClaimError,
    GameConfig,
    IllegalMoveError,
    IllegalProbeError,
    MouseStrategy,
    Probe,
    Referee,
    all_bit_strings,
    brute_force_candidates,
    play_game,
    update_candidates,
    verify_trace,
)
from relloc.generators import gen_grid, gen_path, gen_random_connected
from relloc.graph import build_graph
from relloc.mice import RandomMouse, ReplayMouse, StationaryMouse


class FixedCat(CatStrategy):
    """Probes a fixed sequence (repeating the last entry), optionally claiming."""

    def __init__(self, probes, claim=None, claim_round=None):
        self.probes = list(probes)
        self.claim = claim
        self.claim_round = claim_round
        self.name = "fixed"

    def decide(self, obs):
        if self.claim is not None and obs.round == self.claim_round:
            return self.claim
        i = min(obs.round, len(self.probes)) - 1
        return Probe(self.probes[i])


def manual_update(g, prev, c_prev, c_cur, bit, may_move):
    # definition of the forward step, vertex by vertex
    out = set()
    for v in g.vertices:
        sources = g.closed_neighborhood(v) if may_move else (v,)
        if any(u in prev and (g.dist(c_cur, v) <= g.dist(c_prev, u)) == bool(bit) for u in sources):
            out.add(v)
    return out


class TestUpdateCandidates:
    def test_path3_bit0(self):
        g = gen_path(3)
        got = update_candidates(g, CandidateSet.full(g, 1), 1, 2, 0, True)
        assert got == {1}

    def test_path3_bit1(self):
        g = gen_path(3)
        got = update_candidates(g, CandidateSet.full(g, 1), 1, 2, 1, True)
        assert got == {1, 2, 3}

    def test_frozen_singleton(self):
        g = gen_random_connected(10, 0.2, 4, seed=1)
        for v in g.vertices:
            prev = CandidateSet.of(g, [v], 3)
            assert update_candidates(g, prev, v, v, 1, False) == {v}

    def test_impossible_bit_gives_empty_set(self):
        g = gen_path(3)
        prev = CandidateSet.of(g, [1], 2)
        # a frozen mouse cannot end strictly farther from an unchanged probe
        assert not update_candidates(g, prev, 3, 3, 0, False)

    @settings(max_examples=150, deadline=None)
    @given(
        st.integers(1, 14),
        st.sampled_from([0.0, 0.15, 0.4]),
        st.integers(0, 10**5),
        st.data(),
    )
    def test_matches_definition(self, n, p, seed, data):
        g = gen_random_connected(n, p, 4, seed)
        prev = data.draw(st.sets(st.integers(1, n)))
        c_prev = data.draw(st.integers(1, n))
        c_cur = data.draw(st.integers(1, n))
        bit = data.draw(st.integers(0, 1))
        may_move = data.draw(st.booleans())
        got = update_candidates(g, CandidateSet.of(g, prev, 2), c_prev, c_cur, bit, may_move)
        assert set(got.members) == manual_update(g, prev, c_prev, c_cur, bit, may_move)


class TestBruteForce:
    def test_path3(self):
        assert brute_force_candidates(gen_path(3), [1, 2], [0]) == {1}

    def test_no_bits_is_everything(self):
        g = gen_grid(2, 3)
        assert brute_force_candidates(g, [4], []) == set(g.vertices)

    def test_guard(self):
        with pytest.raises(ValueError, match="guard"):
            brute_force_candidates(gen_path(11), [1, 2], [0])
        with pytest.raises(ValueError):
            brute_force_candidates(gen_path(3), [1, 2], [0, 1])

    def test_stationary_witness(self):
        g = gen_random_connected(7, 0.3, 4, seed=2)
        probes = [1, 5, 3, 7, 2]
        for v in g.vertices:
            d = [g.dist(c, v) for c in probes]
            bits = [int(d[i] <= d[i - 1]) for i in range(1, len(d))]
            assert v in brute_force_candidates(g, probes, bits)

    @settings(max_examples=120, deadline=None)
    @given(
        st.integers(1, 8),
        st.sampled_from([0.0, 0.2, 0.5]),
        st.integers(0, 10**5),
        st.sampled_from([1, 2, 3]),
        st.data(),
    )
    def test_iterated_dp_equals_enumeration(self, n, p, seed, k, data):
        g = gen_random_connected(n, p, 4, seed)
        probes = data.draw(st.lists(st.integers(1, n), min_size=1, max_size=6))
        bits = data.draw(st.lists(st.integers(0, 1), min_size=len(probes) - 1, max_size=len(probes) - 1))
        cfg = GameConfig(slowness=k)
        cands = CandidateSet.full(g, 1)
        for i in range(2, len(probes) + 1):
            cands = update_candidates(g, cands, probes[i - 2], probes[i - 1], bits[i - 2], cfg.may_move(i))
        assert set(cands.members) == brute_force_candidates(g, probes, bits, k)


def test_all_bit_strings():
    assert list(all_bit_strings(2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(all_bit_strings(0)) == [()]


class TestGame:
    def test_single_vertex(self):
        g = build_graph([], 1)
        t = play_game(g, RandomCat(3), StationaryMouse(1), GameConfig(horizon=3))
        assert t.first_success == 1 and t.records[0].m_radius == 0

    def test_path3_stationary(self):
        g = gen_path(3)
        t = play_game(g, FixedCat([1, 2]), StationaryMouse(1), GameConfig(horizon=2))
        assert t.bits == [None, 0]
        assert t.records[1].m_radius == 0 and t.first_success == 2

    def test_k2_oscillating_mouse(self):
        g = gen_path(2)
        t = play_game(g, FixedCat([1]), ReplayMouse([1, 2, 1, 2]), GameConfig(horizon=4))
        assert [r.d for r in t.records] == [0, 1, 0, 1]
        assert t.bits == [None, 0, 1, 0]

    def test_slow_mouse_is_frozen(self):
        g = gen_path(5)
        cfg = GameConfig(horizon=6, slowness=3)
        with pytest.raises(IllegalMoveError, match="frozen"):
            play_game(g, FixedCat([1]), ReplayMouse([1, 2]), cfg)
        # rounds 4 and 7 are the only ones where m may change
        t = play_game(g, FixedCat([1]), ReplayMouse([1, 1, 1, 2, 2, 2]), cfg)
        assert t.positions == [1, 1, 1, 2, 2, 2]

    def test_illegal_jump(self):
        with pytest.raises(IllegalMoveError, match="adjacent"):
            play_game(gen_path(4), FixedCat([1]), ReplayMouse([1, 3]), GameConfig(horizon=2))

    def test_illegal_probe(self):
        with pytest.raises(IllegalProbeError):
            play_game(gen_path(4), FixedCat([9]), StationaryMouse(1), GameConfig(horizon=2))

    def test_false_claim_rejected(self):
        g = gen_path(9)
        cat = FixedCat([1, 5], claim=Done(5, 1), claim_round=3)
        with pytest.raises(FalseClaimError):
            play_game(g, cat, StationaryMouse(1), GameConfig(horizon=5))

    def test_true_claim_accepted(self):
        g = gen_path(9)
        cat = FixedCat([1, 5], claim=Done(5, 4), claim_round=3)
        t = play_game(g, cat, StationaryMouse(1), GameConfig(horizon=5))
        assert t.claim == Done(5, 4) and t.done_round == 2 and t.rounds == 2

    def test_round_zero_claim(self):
        g = build_graph([], 1)
        t = play_game(g, FixedCat([1], Done(1, 0), 1), StationaryMouse(1), GameConfig(target_distance=0))
        assert t.done_round == 0 and t.first_success == 1

    def test_mouse_always_in_candidates(self):
        for seed in range(20):
            g = gen_random_connected(25, 0.1, 4, seed)
            t = play_game(g, RandomCat(seed), RandomMouse(seed), GameConfig(horizon=30), keep_sets=True)
            for rec, cands in zip(t.records, t.sets):
                assert rec.m in cands and len(cands) == rec.m_size

    def test_summary_and_jsonl(self):
        g = gen_grid(2, 2)
        t = play_game(g, RandomCat(1), StationaryMouse(1), GameConfig(horizon=4))
        lines = t.to_jsonl(g).splitlines()
        assert len(lines) == 4
        rows = [json.loads(line) for line in lines]
        assert rows[0]["b"] is None and all(r["b"] in (0, 1) for r in rows[1:])
        assert {"cx", "cy"} <= set(rows[0])
        s = t.summary()
        assert s["rounds"] == 4 and s["config"]["horizon"] == 4

    def test_determinism(self):
        g = gen_random_connected(30, 0.1, 4, seed=4)
        a = play_game(g, RandomCat(5), RandomMouse(6), GameConfig(horizon=40))
        b = play_game(g, RandomCat(5), RandomMouse(6), GameConfig(horizon=40))
        assert a.to_jsonl(g) == b.to_jsonl(g)

    def test_referee_clone_is_independent(self):
        g = gen_path(6)
        ref = Referee(g, RandomCat(1), GameConfig(horizon=10))
        ref.play_round(3)
        child = ref.clone()
        child.play_round(4)
        assert ref.round == 1 and child.round == 2
        assert ref.positions == [3]

    def test_config_validation(self):
        for bad in ({"horizon": 0}, {"slowness": 0}, {"target_distance": -1}):
            with pytest.raises(ValueError):
                GameConfig(**bad)


class TestVerifyTrace:
    def setup_method(self):
        self.g = gen_random_connected(20, 0.1, 4, seed=9)
        self.t = play_game(self.g, RandomCat(2), RandomMouse(3), GameConfig(horizon=15))

    def test_valid(self):
        assert verify_trace(self.t, self.g)

    def test_flipped_bit(self):
        rec = self.t.records[5]
        self.t.records[5] = type(rec)(**{**rec.__dict__, "b": 1 - rec.b})
        check = verify_trace(self.t, self.g)
        assert not check and check.round == 6

    def test_teleport(self):
        rec = self.t.records[7]
        far = max(self.g.vertices, key=lambda v: self.g.dist(self.t.records[6].m, v))
        d = self.g.dist(rec.c, far)
        self.t.records[7] = type(rec)(**{**rec.__dict__, "m": far, "d": d})
        check = verify_trace(self.t, self.g)
        assert not check and check.round == 8 and "illegal move" in check.reason
