from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mpnego.ext import INF, NEG_INF, add, fmt, rat
from mpnego.game import (DanglingEdge, InvalidLasso, LassoPlay, MissingReward, Requirement,
                         UnknownOwner, VertexWithoutSuccessor, is_consistent, mean_payoff,
                         validate_game)
from mpnego.library import example

from conftest import random_game, random_requirement


def sans_spe():
    return example("sans-spe")[0]


def test_sans_spe_accepted():
    g = sans_spe()
    assert len(g.vertices) == 4 and len(g.edges) == 6


def test_sink_without_loop_rejected():
    with pytest.raises(VertexWithoutSuccessor):
        validate_game({"players": ["p"], "vertices": [("a", "p"), ("b", "p")],
                       "edges": [("a", "b", [0])]})


def test_single_self_loop_accepted():
    g = validate_game({"players": ["p"], "vertices": [("a", "p")], "edges": [("a", "a", ["1/2"])]})
    assert g.rewards[("a", "a")] == (Fraction(1, 2),)


def test_every_violation_is_listed():
    raw = {"players": ["p", "q"],
           "vertices": [("a", "p"), ("b", "r"), ("c", "q")],
           "edges": [("a", "z", [0, 0]), ("a", "a", [1])]}
    with pytest.raises(UnknownOwner) as err:
        validate_game(raw)
    kinds = {type(v) for v in err.value.violations}
    assert {UnknownOwner, DanglingEdge, MissingReward, VertexWithoutSuccessor} <= kinds


def test_mean_payoff_examples():
    g = sans_spe()
    assert mean_payoff(g, LassoPlay([], ["a", "b"])) == (0, 3)
    assert mean_payoff(g, LassoPlay(["a", "b"], ["d"])) == (2, 2)


def test_invalid_lasso():
    with pytest.raises(InvalidLasso):
        mean_payoff(sans_spe(), LassoPlay(["a"], ["d"]))
    with pytest.raises(InvalidLasso):
        LassoPlay(["a"], [])


def test_consistency_examples():
    g = sans_spe()
    lam1 = Requirement({"a": 1, "b": 2, "c": 1, "d": 2})
    assert is_consistent(g, lam1, LassoPlay(["a"], ["c"]))
    assert is_consistent(g, lam1, LassoPlay(["a", "b"], ["d"]))
    assert not is_consistent(g, lam1, LassoPlay([], ["a", "b"]))
    assert is_consistent(g, Requirement.vacuous(g), LassoPlay([], ["a", "b"]))
    assert not is_consistent(g, lam1.replace(c=INF), LassoPlay(["a"], ["c"]))


def _lassos(g, limit=40):
    """Some lassos of g: every simple cycle with every simple prefix into it."""
    from mpnego.geometry import simple_cycles
    out = []
    for cyc in simple_cycles(g).cycles:
        out.append(LassoPlay([], cyc))
        for u in g.vertices:
            if cyc[0] in g.succ[u] and u not in cyc:
                out.append(LassoPlay([u], cyc))
        if len(out) > limit:
            break
    return out


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_mean_payoff_rotation_and_repetition(seed, k):
    g = random_game(seed)
    for rho in _lassos(g):
        base = mean_payoff(g, rho)
        c = list(rho.cycle)
        for r in range(len(c)):
            assert mean_payoff(g, LassoPlay([], c[r:] + c[:r])) == base
        assert mean_payoff(g, LassoPlay(rho.prefix, c * k)) == base
        assert mean_payoff(g, LassoPlay([], c)) == base


@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_consistency_antitone(seed, rseed):
    g = random_game(seed)
    lam = random_requirement(g, rseed)
    lower = Requirement({v: x - 1 if x not in (INF, NEG_INF) else x for v, x in lam.items()})
    for rho in _lassos(g):
        if is_consistent(g, lam, rho):
            assert is_consistent(g, lower, rho)
        assert is_consistent(g, Requirement.vacuous(g), rho)


def test_ext_rationals():
    assert rat("3/2") == Fraction(3, 2) and rat("-inf") == NEG_INF and rat("inf") == INF
    assert NEG_INF < Fraction(-10 ** 9) < Fraction(10 ** 9) < INF
    assert fmt(Fraction(6, 4)) == "3/2" and fmt(INF) == "inf"
    assert add(INF, Fraction(1)) == INF
    with pytest.raises(ArithmeticError):
        add(INF, NEG_INF)
    with pytest.raises(TypeError):
        rat(0.5)
