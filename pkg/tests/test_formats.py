from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mpnego.ext import INF, NEG_INF
from mpnego.formats import (FormatError, dump_dimacs, dump_game, dump_requirement, parse_dimacs,
                            parse_game, parse_requirement, parse_vector)
from mpnego.game import MissingReward, VertexWithoutSuccessor
from mpnego.library import EXAMPLES, example

from conftest import random_game

SANS_SPE_TEXT = """\
name sans-spe
players circle square
initial a
vertex a circle
vertex b square
vertex c circle
vertex d square
edge a b 0 3
edge a c 0 0
edge b a 0 3
edge b d 0 0
edge c c 1 1
edge d d 2 2
"""


def test_sans_spe_round_trip():
    g = parse_game(SANS_SPE_TEXT)
    assert g == example("sans-spe")[0]
    assert dump_game(g) == SANS_SPE_TEXT


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_examples_round_trip(name):
    g, _ = example(name)
    again = parse_game(dump_game(g))
    assert again == g and again.name == g.name and again.initial == g.initial


@given(st.integers(0, 100_000))
def test_random_round_trip(seed):
    g = random_game(seed)
    text = dump_game(g)
    assert dump_game(parse_game(text)) == text


def test_missing_reward():
    with pytest.raises(MissingReward):
        parse_game("players p q\nvertex a p\nedge a a 1\n")


def test_rational_rewards():
    g = parse_game("players p\nvertex a p\nedge a a 3/2  # a comment\n")
    assert g.rewards[("a", "a")] == (Fraction(3, 2),)


@pytest.mark.parametrize("text,line,col", [
    ("players p\nvertex a p\nfoo a\n", 3, 1),
    ("players p\nvertex a p\nedge a a x\n", 3, 10),
    ("players p\nplayers q\n", 2, 1),
    ("players p\nvertex a p\nvertex a p\n", 3, 8),
    ("players p\nvertex a p\nedge a a 1/0\n", 3, 10),
    ("players p p\n", 1, 11),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(FormatError) as err:
        parse_game(text, source="g.txt")
    assert (err.value.line, err.value.column) == (line, col)
    assert str(err.value).startswith("g.txt:%d:%d:" % (line, col))


def test_validation_errors_forwarded():
    with pytest.raises(VertexWithoutSuccessor):
        parse_game("players p\nvertex a p\nvertex b p\nedge a b 0\n")
    with pytest.raises(FormatError):
        parse_game("vertex a p\n")


def test_requirement_files():
    g, _ = example("sans-spe")
    lam = parse_requirement("a inf\nb -inf\nc 1/2\nd 2\n", g)
    assert lam == {"a": INF, "b": NEG_INF, "c": Fraction(1, 2), "d": 2}
    assert parse_requirement(dump_requirement(lam, g), g) == lam
    with pytest.raises(FormatError):
        parse_requirement("a 1\n", g)
    with pytest.raises(FormatError):
        parse_requirement("a 1\nb 1\nc 1\nd 1\nz 1\n", g)
    with pytest.raises(FormatError):
        parse_requirement("a one\nb 1\nc 1\nd 1\n", g)


def test_vectors():
    assert parse_vector("0,1/2,inf,-inf") == (0, Fraction(1, 2), INF, NEG_INF)
    with pytest.raises(ValueError):
        parse_vector("1,2", 3)
    with pytest.raises(ValueError):
        parse_vector("1,x")


def test_dimacs():
    text = "c example\np cnf 2 3\n1 -2 0\n2 0\n-1\n 2 0\n"
    assert parse_dimacs(text) == [[1, -2], [2], [-1, 2]]
    assert parse_dimacs(dump_dimacs([[1, -2], [2]])) == [[1, -2], [2]]
    for bad in ["1 0\n", "p cnf 1 1\n2 0\n", "p cnf 1 2\n1 0\n", "p cnf 1 1\n0\n", "p dnf 1 1\n"]:
        with pytest.raises(FormatError):
            parse_dimacs(bad)
