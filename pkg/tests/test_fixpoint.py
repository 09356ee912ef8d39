from fractions import Fraction

import pytest

from mpnego.ext import INF, is_finite
from mpnego.fixpoint import least_fixed_point, negotiation_sequence, verify_fixed_point
from mpnego.game import Requirement
from mpnego.library import example

from conftest import SMALL_EXAMPLES, random_game

F = Fraction
EPS = [F(0), F(1, 4), F(1, 2)]


def test_sans_spe_sequence():
    g, meta = example("sans-spe")
    seq = negotiation_sequence(g, 10)
    assert list(seq) == meta["rows"]
    assert seq.fixed_point_reached


def test_propagation_sequence():
    g, meta = example("propagation")
    seq = negotiation_sequence(g, 10)
    assert list(seq) == meta["rows"] and seq.fixed_point_reached


def test_not_stationary_sequence():
    g, meta = example("not-stationary")
    seq = negotiation_sequence(g, 10)
    assert not seq.fixed_point_reached
    for n in range(1, 11):
        assert seq[n]["a"] == seq[n]["b"] == 2 - F(1, 2 ** (n - 1))


def test_sequence_needs_positive_length():
    g, _ = example("inf-spe")
    with pytest.raises(ValueError):
        negotiation_sequence(g, 0)


@pytest.mark.parametrize("seed", range(12))
def test_iterates_are_non_decreasing(seed):
    g = random_game(seed)
    seq = negotiation_sequence(g, 6)
    for a, b in zip(seq, seq[1:]):
        assert a <= b


EXPECTED = {
    ("inf-spe", F(0)): {"a": 1, "b": 1},
    ("sans-spe", F(0)): {"a": INF, "b": INF, "c": 1, "d": 2},
    ("sans-spe", F(1, 2)): {"a": INF, "b": INF, "c": F(1, 2), "d": F(3, 2)},
    ("propagation", F(0)): {"a": 1, "b": 1, "c": 1, "d": 1},
    ("not-stationary", F(0)): {"a": 2, "b": 2, "c": 0, "d": 0, "e": 0, "f": 0},
}


@pytest.mark.parametrize("key", list(EXPECTED))
def test_least_fixed_point_values(key):
    name, eps = key
    g, _ = example(name)
    rep = least_fixed_point(g, eps)
    assert rep.verified
    assert rep.lambda_star == EXPECTED[key]


@pytest.mark.parametrize("name", SMALL_EXAMPLES)
def test_fixed_points_verified_and_least(name):
    g, _ = example(name)
    for eps in EPS:
        lam = least_fixed_point(g, eps).lambda_star
        assert verify_fixed_point(g, lam, eps)
        for v in g.vertices:
            if not is_finite(lam[v]):
                continue
            for delta in (F(1, 4), F(1, 16)):
                lower = lam.replace(**{v: lam[v] - delta})
                assert not verify_fixed_point(g, lower, eps)


@pytest.mark.parametrize("name", SMALL_EXAMPLES + ["strongly-connected-no-spe", "big"])
def test_epsilon_monotone(name):
    g, _ = example(name)
    stars = [least_fixed_point(g, eps).lambda_star for eps in EPS]
    for a, b in zip(stars, stars[1:]):
        assert b <= a


def test_iteration_and_acceleration_agree():
    for name in ["inf-spe", "sans-spe", "propagation"]:
        g, _ = example(name)
        for eps in EPS:
            a = least_fixed_point(g, eps, accelerate=False).lambda_star
            b = least_fixed_point(g, eps).lambda_star
            assert a == b


def test_negative_epsilon_rejected():
    g, _ = example("inf-spe")
    with pytest.raises(ValueError):
        least_fixed_point(g, -1)


def test_report_dict():
    g, _ = example("not-stationary")
    d = least_fixed_point(g, 0).as_dict()
    assert d["verified"] and d["method"] == "accelerated"
    assert d["lambda_star"]["a"] == "2"
