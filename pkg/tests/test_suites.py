import pytest

from relloc import suites
from relloc.cats import PathCat
from relloc.engine import Done, GameConfig, Probe
from relloc.generators import gen_path


def test_report_csv_layout():
    rep = suites.SuiteReport("x", [
        suites.CaseResult("x", "a", 1, True, games=2, seconds=0.5),
        suites.CaseResult("x", "b", 2, False, "bound", 7, "detail, with comma", 1),
    ])
    text = rep.to_csv()
    lines = text.split("\n")
    assert lines[0] == "suite,case,seed,status,bound,round,detail,games"
    assert lines[1] == "x,a,1,pass,,,,2"
    assert lines[2] == 'x,b,2,fail,bound,7,"detail, with comma",1'
    assert text.endswith("\n") and "\r" not in text
    assert "seconds" in rep.to_csv(timings=True).split("\n")[0]
    assert not rep.passed and rep.games == 3 and rep.summary_line().startswith("FAIL")


def test_case_errors_become_failures():
    def boom():
        suites._check(False, "some bound", "went wrong", 3)

    res = suites._run_case(suites.Case("t", "c", 0, boom, ()))
    assert not res.ok and res.bound == "some bound" and res.round == 3


class LyingPathCat(PathCat):
    name = "lying-path"

    def decide(self, obs):
        d = super().decide(obs)
        return Done(d.center, 0) if isinstance(d, Done) else d


def test_false_claim_is_reported_as_soundness(monkeypatch):
    monkeypatch.setattr(suites, "PathCat", LyingPathCat)
    res = suites._run_case(suites.Case("path", "n=33", 0, suites._path_case, (33, "random", 1)))
    assert not res.ok and res.bound == "soundness" and "claimed radius 0" in res.detail


def test_path_sizes():
    sizes = suites.path_sizes(20, seed=0)
    assert sizes[:2] == [4, 5] and 4097 in sizes
    assert len(sizes) == len(set(sizes)) == 12 + 20
    assert all(4 <= n <= 4097 for n in sizes)


@pytest.mark.parametrize("name", suites.SUITES)
def test_small_suites_pass(name):
    params = {
        "oracle": dict(max_n=3, random_cases=10),
        "tree": dict(deltas=(2, 3), trials=3, max_n=50, exhaustive_n=6),
        "grid": dict(sizes=(8, 16), random_mice=2),
        "path": dict(random_sizes=2, random_mice=1, max_n=65),
        "slow": dict(trials=3, max_n=25),
        "splitting": dict(trials=10, max_n=15),
    }[name]
    rep = suites.run_suite(name, **params)
    assert rep.passed, rep.failures


def test_unknown_suite():
    with pytest.raises(ValueError):
        suites.build_suite("bogus")
