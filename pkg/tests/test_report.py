from fractions import Fraction

import pytest

from mpnego.library import example
from mpnego.pwaffine import build_representation
from mpnego.report import plot_regions, plot_sequence, region_dump, to_dot
from mpnego.fixpoint import negotiation_sequence


def test_dot_shapes():
    g, _ = example("big")
    dot = to_dot(g)
    assert '"c" [shape=box' in dot and '"a" [shape=circle' in dot
    assert '"a" -> "a" [label="(1,3)"]' in dot
    assert dot.startswith('digraph "big"')


def test_region_dump_inf_spe(tmp_path):
    rep = build_representation(example("inf-spe")[0])
    dump = region_dump(rep, ("a", "b"), box=(Fraction(-1, 2), Fraction(5, 2)))
    forms = dict(dump["formulas"]["a"])
    assert forms[((0, 2), -2)] > 0      # 2 lam(b) - 2 gives the value somewhere
    assert forms[((1, 0), 0)] > 0       # lam(a)
    path = plot_regions(dump, str(tmp_path / "r.png"))
    assert (tmp_path / "r.png").stat().st_size > 0 and path.endswith("r.png")


def test_region_dump_fixed_coordinates():
    rep = build_representation(example("sans-spe")[0])
    dump = region_dump(rep, ("a", "b"), {"c": 1, "d": 2}, vertices=["a", "b"])
    consts = {k for (co, k), h in dump["formulas"]["a"] if h}
    assert consts == {1, 2}
    with pytest.raises(ValueError):
        region_dump(rep, ("a", "b"))
    with pytest.raises(ValueError):
        region_dump(rep, ("a",), {"b": 0, "c": 1, "d": 2})


def test_sequence_plot(tmp_path):
    g, _ = example("sans-spe")
    plot_sequence(g, negotiation_sequence(g, 6), str(tmp_path / "s.png"))
    assert (tmp_path / "s.png").stat().st_size > 0
