import json

import pytest

from relloc.cats import GridCat, PathCat, RandomCat, SlowCat, TreeCat
from relloc.mice import ExhaustiveEvader, GreedyEvader, RandomMouse, ReplayMouse, StationaryMouse
from relloc.specs import SpecError, cat_from_spec, graph_from_spec, mouse_from_spec, parse_spec


def test_parse():
    assert parse_spec("grid:n=4,m=3") == ("grid", {"n": "4", "m": "3"})
    assert parse_spec("greedy") == ("greedy", {})
    assert parse_spec("file:/tmp/a:b.txt") == ("file", {"path": "/tmp/a:b.txt"})
    with pytest.raises(SpecError):
        parse_spec("grid:n")


def test_graphs(tmp_path):
    assert graph_from_spec("path:n=9").n == 9
    assert graph_from_spec("grid:n=4").grid_shape == (4, 4)
    assert graph_from_spec("grid:n=4,m=2").n == 8
    assert graph_from_spec("substar:k=3").n == 10
    assert graph_from_spec("tree:n=30,dmax=3,seed=1").is_tree
    assert graph_from_spec("gnp:n=20,p=0.2,dmax=4,seed=1").max_degree <= 4
    f = tmp_path / "g.txt"
    f.write_text("3 2\n1 2\n2 3\n")
    assert graph_from_spec(f"file:{f}").edges() == [(1, 2), (2, 3)]


@pytest.mark.parametrize("bad", ["cube:n=3", "path", "path:n=x", "grid:n=3,q=1", "file:"])
def test_bad_graphs(bad):
    with pytest.raises(SpecError):
        graph_from_spec(bad)


def test_cats():
    assert isinstance(cat_from_spec("tree"), TreeCat)
    assert cat_from_spec("tree:delta=4").delta == 4
    assert isinstance(cat_from_spec("grid"), GridCat)
    assert isinstance(cat_from_spec("path"), PathCat)
    slow = cat_from_spec("slow:delta=3,r=2")
    assert isinstance(slow, SlowCat) and (slow.delta, slow.start) == (3, 2)
    assert cat_from_spec("random", seed=7).seed == 7
    assert cat_from_spec("random:seed=2", seed=7).seed == 2
    with pytest.raises(SpecError):
        cat_from_spec("clever")


def test_mice(tmp_path):
    assert isinstance(mouse_from_spec("stationary:v=3"), StationaryMouse)
    assert mouse_from_spec("random", seed=4).seed == 4
    assert isinstance(mouse_from_spec("greedy"), GreedyEvader)
    ex = mouse_from_spec("exhaustive:T=6,d=1")
    assert isinstance(ex, ExhaustiveEvader) and (ex.horizon, ex.target) == (6, 1)
    cert = tmp_path / "c.json"
    cert.write_text(json.dumps([1, 2, 2]))
    rep = mouse_from_spec(f"cert:{cert}")
    assert isinstance(rep, ReplayMouse) and rep.trajectory == [1, 2, 2]
    cert.write_text('{"a": 1}')
    with pytest.raises(SpecError):
        mouse_from_spec(f"cert:{cert}")
    with pytest.raises(SpecError):
        mouse_from_spec("stationary")
