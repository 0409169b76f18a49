import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relloc.cats import GridCat, PathCat, RandomCat, SlowCat, TreeCat, path_order
from relloc.engine import CandidateSet, Done, GameConfig, play_game, update_candidates
from relloc.generators import gen_grid, gen_path, gen_random_connected, gen_random_tree
from relloc.graph import GraphError, build_graph, radius_of_set
from relloc.mice import GreedyEvader, RandomMouse, StationaryMouse, worst_case_done


def star(k):
    return build_graph([(1, v) for v in range(2, k + 2)], k + 1)


def ceil_log2(n):
    k = 0
    while 2**k < n:
        k += 1
    return k


class TestTreeCat:
    def test_shallow_star_stops_at_once(self):
        t = play_game(star(3), TreeCat(), StationaryMouse(2), GameConfig(horizon=10))
        assert t.claim == Done(1, 6) and t.done_round == 0 and t.rounds == 0

    def test_round_bound_formula(self):
        cat = TreeCat()
        cat.reset(gen_path(9), GameConfig())
        # h = 4, Δ = 2: 2 * (4 - 2) * (2 * 2 - 2)
        assert cat.bound == 2 and cat.round_bound() == 8

    def test_path9_all_trajectories(self):
        # every mouse line is played and every claim checked by the referee
        worst = worst_case_done(gen_path(9), TreeCat(), GameConfig(horizon=20), horizon=20)
        assert worst.done_round is not None and worst.done_round <= 8

    def test_requires_tree(self):
        with pytest.raises(GraphError):
            play_game(gen_grid(3, 3), TreeCat(), StationaryMouse(1), GameConfig())

    def test_declared_degree_too_small(self):
        with pytest.raises(GraphError):
            play_game(star(4), TreeCat(3), StationaryMouse(1), GameConfig())

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 120), st.integers(2, 5), st.integers(0, 10**4), st.integers(0, 100))
    def test_bounds_against_random_mice(self, n, dmax, seed, mseed):
        g = gen_random_tree(n, dmax, seed)
        cat = TreeCat(dmax)
        t = play_game(g, cat, RandomMouse(mseed), GameConfig(horizon=10**5), keep_sets=True)
        assert t.claim is not None and t.claim.radius == 4 * dmax - 6
        assert t.done_round <= cat.round_bound()
        final = t.sets[-1] if t.sets else CandidateSet.full(g, 0)
        assert all(g.dist(t.claim.center, m) <= 4 * dmax - 6 for m in final)
        # at every outer-iteration start the knowledge set sits below r
        for start, r in cat.iterations:
            if start > 1:
                assert all(cat.view.subtree_contains(r, v) for v in t.sets[start - 2])

    def test_facts_hold_for_the_actual_mouse(self):
        g = gen_random_tree(150, 3, seed=5)
        cat = TreeCat(3)
        t = play_game(g, cat, RandomMouse(1), GameConfig(horizon=10**5))
        assert cat.facts
        for f in cat.facts:
            # u -(j)-> v: at round j the mouse was on v's side of edge uv
            m = t.positions[f.round - 1]
            assert g.dist(f.v, m) < g.dist(f.u, m)


def ten_by_seven_sets(b1, c_prev_xy):
    # box 10 x 7 well inside a large grid, probes as the grid cat places them
    g = gen_grid(40, 40)
    x, y, dx, dy = 12, 15, 10, 7
    box = [g.vertex_at(i, j) for i in range(x, x + dx + 1) for j in range(y, y + dy + 1)]
    ax, ay = x + 4, y + 3
    probes = [g.vertex_at(*c_prev_xy), g.vertex_at(ax, ay), g.vertex_at(ax + 2, ay), g.vertex_at(ax + 2, ay + 2)]
    return g, box, probes


def enumerate_final(g, start, probes, bits):
    # trajectory enumeration from a known set (independent of the DP)
    out = set()
    for m0 in start:
        frontier = [(m0,)]
        for k in range(1, len(probes)):
            nxt = []
            for traj in frontier:
                for v in g.closed_neighborhood(traj[-1]):
                    if (g.dist(probes[k], v) <= g.dist(probes[k - 1], traj[-1])) == bool(bits[k - 1]):
                        nxt.append(traj + (v,))
            frontier = nxt
        out.update(traj[-1] for traj in frontier)
    return out


class TestGridCat:
    @pytest.mark.parametrize("b1", [0, 1])
    @pytest.mark.parametrize("c_prev_xy", [(12, 15), (22, 22), (17, 18), (1, 40)])
    def test_ten_by_seven_box_extents(self, b1, c_prev_xy):
        g, box, probes = ten_by_seven_sets(b1, c_prev_xy)
        bits = (b1, 1, 0)
        cands = CandidateSet.of(g, box, 1)
        for k in range(1, 4):
            cands = update_candidates(g, cands, probes[k - 1], probes[k], bits[k - 1], True)
        assert set(cands.members) == enumerate_final(g, box, probes, bits)
        if cands:
            _, _, ndx, ndy = cands.bounding_box()
            assert ndx <= 10 // 2 + 4 and ndy <= (7 + 1) // 2 + 3

    def test_requires_grid(self):
        with pytest.raises(GraphError):
            play_game(gen_path(5), GridCat(), StationaryMouse(1), GameConfig())

    @pytest.mark.parametrize("n", [1, 2, 5, 9, 17, 30])
    def test_small_and_odd_sizes(self, n):
        for mouse in (GreedyEvader(), RandomMouse(n), StationaryMouse(1)):
            cat = GridCat()
            t = play_game(gen_grid(n, n), cat, mouse, GameConfig(horizon=400, target_distance=8))
            assert t.claim is not None and t.claim.radius == 8
            assert t.first_success is not None and t.first_success <= GridCat.round_bound(n)

    def test_rectangular_grid(self):
        g = gen_grid(60, 11)
        t = play_game(g, GridCat(), RandomMouse(2), GameConfig(horizon=400, target_distance=8))
        assert t.claim is not None

    def test_blocks_respect_recurrences(self):
        cat = GridCat()
        play_game(gen_grid(128, 128), cat, GreedyEvader(), GameConfig(horizon=200))
        assert len(cat.blocks) >= 5
        for b in cat.blocks:
            hx, hy = (3, 4) if b.before.swapped else (4, 3)
            assert b.after.dx <= (b.before.dx + 1) // 2 + hx
            assert b.after.dy <= (b.before.dy + 1) // 2 + hy

    def test_round_bound_formula(self):
        assert GridCat.round_bound(512) == 3 * (9 + 10)
        assert GridCat.round_bound(513) == 3 * (10 + 10)
        for n in (2, 3, 100, 1000):
            assert GridCat.round_bound(n) == 3 * (ceil_log2(n) + 10)


class TestPathCat:
    def test_path_order(self):
        g = build_graph([(3, 1), (1, 4), (4, 2)], 4)
        assert path_order(g) == [0, 2, 4, 1, 3]
        with pytest.raises(GraphError):
            path_order(star(3))

    @pytest.mark.parametrize("n", list(range(1, 40)))
    def test_all_trajectories_small(self, n):
        worst = worst_case_done(gen_path(n), PathCat(), GameConfig(horizon=60), horizon=60)
        assert worst.done_round is not None
        assert worst.done_round <= PathCat.round_bound(max(n, 2))

    @pytest.mark.parametrize("n", [4, 65, 1000, 4097])
    def test_greedy(self, n):
        t = play_game(gen_path(n), PathCat(), GreedyEvader(), GameConfig(horizon=200, target_distance=2))
        assert t.first_success <= PathCat.round_bound(n) and t.final_radius <= 2

    def test_round_bound_formula(self):
        for n in (4, 5, 17, 4097):
            assert PathCat.round_bound(n) == 2 * (ceil_log2(n) + 6)


class TestSlowCat:
    def test_path3_mouse_at_end(self):
        g = gen_path(3)
        cat = SlowCat(2, start=2)
        t = play_game(g, cat, StationaryMouse(3), GameConfig(horizon=100, slowness=8))
        assert t.claim == Done(3, 0)
        assert t.done_round <= 2 * 8

    @pytest.mark.parametrize("seed", range(6))
    def test_mouse_on_anchor(self, seed):
        g = gen_random_connected(30, 0.05, 4, seed)
        delta = max(2, g.max_degree)
        cat = SlowCat(delta, start=5)
        t = play_game(g, cat, StationaryMouse(5), GameConfig(horizon=500, slowness=4 * delta))
        assert t.claim == Done(5, 0) and len(cat.blocks) == 1

    def test_wrong_slowness(self):
        with pytest.raises(ValueError, match="slowness"):
            play_game(gen_path(4), SlowCat(2), StationaryMouse(1), GameConfig(slowness=3))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 60), st.integers(2, 5), st.integers(0, 10**4))
    def test_potential_decreases(self, n, dmax, seed):
        g = gen_random_connected(n, 0.05, dmax, seed)
        delta = max(2, g.max_degree)
        k = 4 * delta
        cat = SlowCat(delta)
        t = play_game(g, cat, RandomMouse(seed), GameConfig(horizon=k * (n + 2), slowness=k), keep_sets=True)
        assert t.claim is not None and t.claim.radius == 0
        assert t.sets[-1].members == (t.claim.center,) == (t.positions[-1],)
        pos = t.positions
        dists = [g.dist(b.anchor, pos[b.start - 1]) for b in cat.blocks]
        assert all(b < a for a, b in zip(dists, dists[1:]))
        assert len(cat.blocks) <= dists[0] + 1
        assert all((b.start - 1) % k == 0 for b in cat.blocks)


class TestRandomCat:
    def test_fixture_sequence(self):
        t = play_game(gen_path(2), RandomCat(1), StationaryMouse(1), GameConfig(horizon=10))
        assert [r.c for r in t.records] == [1, 1, 2, 1, 2, 2, 2, 2, 1, 1]

    def test_single_vertex(self):
        t = play_game(build_graph([], 1), RandomCat(7), StationaryMouse(1), GameConfig(horizon=5))
        assert [r.c for r in t.records] == [1] * 5

    def test_reset_restarts_sequence(self):
        g = gen_random_connected(20, 0.1, 4, 0)
        a = play_game(g, RandomCat(3), StationaryMouse(1), GameConfig(horizon=12))
        b = play_game(g, RandomCat(3), StationaryMouse(1), GameConfig(horizon=12))
        assert [r.c for r in a.records] == [r.c for r in b.records]
