import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from mpnego.decision import (NE, SPE, ThresholdQuery, consistent_payoff_region,
                             decide_threshold, requirement_for)
from mpnego.ext import INF, NEG_INF
from mpnego.game import Game, LassoPlay, Requirement, is_consistent, mean_payoff
from mpnego.library import example, sat_to_game
from mpnego.nego import nego_map

from conftest import random_game

F = Fraction


def decide(name, mode, lower, upper, eps=0, origin=None):
    g, _ = example(name)
    q = ThresholdQuery(g, origin or g.initial, lower, upper, eps, mode)
    return decide_threshold(q)


def test_inf_spe_decisions():
    assert decide("inf-spe", SPE, (1, 1), (2, 2)).answer
    assert not decide("inf-spe", SPE, (0, 0), (2, F(1, 2))).answer


@pytest.mark.parametrize("eps", [0, F(1, 2)])
def test_sans_spe_has_no_spe(eps):
    assert not decide("sans-spe", SPE, (0, 0), (3, 3), eps).answer


def test_sans_spe_ne_examples():
    yes = decide("sans-spe", NE, (1, 1), (1, 1))
    assert yes.answer and set(yes.K) == {"c"} and yes.payoff == (1, 1)
    assert set(yes.W) == {"a", "c"}
    assert not decide("sans-spe", NE, (0, 3), (0, 3)).answer


def test_ne_grid_on_sans_spe():
    grid = [F(k, 2) for k in range(7)]
    for x, y in itertools.product(grid, grid):
        got = decide("sans-spe", NE, (x, y), (x, y)).answer
        assert got == ((x, y) in {(1, 1), (2, 2)}), (x, y)


def test_certificate_is_validated():
    c = decide("inf-spe", SPE, (1, 1), (2, 2))
    lo, hi = (1, 1), (2, 2)
    assert all(l <= m <= h for l, m, h in zip(lo, c.payoff, hi))
    assert all(m >= b for m, b in zip(c.payoff, c.bounds))
    for w in c.weights:
        assert sum(w) == 1 and min(w) >= 0


def test_empty_box_is_no():
    assert not decide("inf-spe", NE, (2, 2), (1, 1)).answer


def test_query_validation():
    g, _ = example("inf-spe")
    with pytest.raises(ValueError):
        ThresholdQuery(g, "a", (0,), (1, 1))
    with pytest.raises(ValueError):
        ThresholdQuery(g, "z", (0, 0), (1, 1))
    with pytest.raises(ValueError):
        ThresholdQuery(g, "a", (0, 0), (1, 1), mode="CE")


def test_region_entries():
    g, _ = example("inf-spe")
    entries = consistent_payoff_region(g, "a", Requirement({"a": 1, "b": 1}))
    full = [e for e in entries if set(e.W) == {"a", "b"} and set(e.K) == {"a", "b"}]
    assert full and full[0].bounds == (1, 1)
    assert set(full[0].points.points) == {(0, 1), (1, 0), (2, 2)}
    loop = Game(["p"], ["a"], {"a": 0}, [("a", "a")], {("a", "a"): (1,)})
    assert len(consistent_payoff_region(loop, "a", Requirement.vacuous(loop))) == 1
    g, _ = example("sans-spe")
    lam = Requirement({"a": INF, "b": INF, "c": 1, "d": 2})
    assert consistent_payoff_region(g, "a", lam) == []


def test_sat_single_clause():
    g, v0 = sat_to_game([[1]])
    assert len(g.vertices) == 3
    q = ThresholdQuery(g, v0, (1, NEG_INF), (INF, INF), 0, SPE)
    assert decide_threshold(q).answer


def test_sat_contradiction():
    g, v0 = sat_to_game([[1], [-1]])
    q = ThresholdQuery(g, v0, (1, NEG_INF), (INF, INF), 0, SPE)
    assert not decide_threshold(q).answer


def _box(draw_vals):
    lo = tuple(F(x, 2) for x in draw_vals[:2])
    hi = tuple(l + F(d, 2) for l, d in zip(lo, draw_vals[2:]))
    return lo, hi


boxes = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 4), st.integers(0, 4))


@settings(max_examples=25)
@given(st.integers(0, 100_000), boxes, st.integers(0, 2))
def test_box_and_mode_monotonicity(seed, b, grow):
    g = random_game(seed, max_vertices=4, max_players=2, min_players=2)
    lo, hi = _box(b)
    v0 = g.vertices[0]
    ne = decide_threshold(ThresholdQuery(g, v0, lo, hi, 0, NE))
    spe = decide_threshold(ThresholdQuery(g, v0, lo, hi, 0, SPE))
    if spe.answer:
        assert ne.answer
    big = decide_threshold(ThresholdQuery(g, v0, tuple(x - grow for x in lo),
                                          tuple(x + grow for x in hi), 0, NE))
    if ne.answer:
        assert big.answer
    loose = decide_threshold(ThresholdQuery(g, v0, lo, hi, F(1, 2), SPE))
    if spe.answer:
        assert loose.answer


def _lassos(g, v0, max_prefix=4, max_cycle=4):
    def walks(v, n):
        if n == 0:
            yield (v,)
            return
        yield (v,)
        for w in g.succ[v]:
            for rest in walks(w, n - 1):
                yield (v,) + rest
    for path in walks(v0, max_prefix + max_cycle):
        for k in range(len(path)):
            cyc = path[k:]
            if len(cyc) <= max_cycle and path[0] == v0 and cyc[0] in g.succ[cyc[-1]]:
                if k <= max_prefix:
                    yield LassoPlay(path[:k], cyc)


@settings(max_examples=25)
@given(st.integers(0, 100_000))
def test_lasso_witnesses_are_found(seed):
    """Whenever a consistent lasso lands in a box, the decision must say YES."""
    g = random_game(seed, max_vertices=4, max_players=2, min_players=2)
    v0 = g.vertices[0]
    lam = nego_map(g, Requirement.vacuous(g))
    seen = set()
    for rho in _lassos(g, v0):
        if not is_consistent(g, lam, rho):
            continue
        m = mean_payoff(g, rho)
        if m in seen:
            continue
        seen.add(m)
        q = ThresholdQuery(g, v0, m, m, 0, NE)
        assert decide_threshold(q, lam).answer
    assume(seen)
    # a box away from every consistent payoff is only checked one way: YES must carry a valid witness
    far = tuple(max(x[k] for x in seen) + 10 for k in range(g.n_players))
    res = decide_threshold(ThresholdQuery(g, v0, far, far, 0, NE), lam)
    if res.answer:
        assert res.payoff == far
