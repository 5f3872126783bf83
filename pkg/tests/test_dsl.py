import math

import pytest
from hypothesis import given, settings, strategies as st

from k3lat.dsl import (
    Atom,
    DslError,
    GramLiteral,
    Perp,
    Repeat,
    Scale,
    Sum,
    Zero,
    evaluate,
    lattice,
    parse,
    render,
)
from k3lat.embeddings import GenusTriple, as_triple
from k3lat.lattice import Lattice, Signature, hyperbolic_plane
from k3lat.tables import builtin_tables


def test_parse_examples():
    assert parse("U(2)+E8+D4") == Sum((Scale(Atom("U"), 2), Atom("E", 8), Atom("D", 4)))
    assert parse("<2>+5A1") == Sum((Atom("diag", (2,)), Repeat(5, Atom("A", 1))))
    e = parse("perp(A2(3); E8)")
    assert e == Sum((Perp(Sum((Scale(Atom("A", 2), 3),)), Sum((Atom("E", 8),))),))
    assert parse("2A1(2)") == Sum((Repeat(2, Scale(Atom("A", 1), 2)),))
    assert parse("0") == Zero()
    assert parse("U ⊕ E8") == parse("U+E8")


def test_render_examples():
    assert render(Sum((Atom("A", 1),))) == "A1"
    assert render(Repeat(2, Atom("E", 8))) == "2E8"
    assert render(parse("[[-2, 1],[1,-4]] + <2,4>")) == "[[-2,1],[1,-4]]+<2,4>"


def test_evaluate_examples():
    v = lattice("U+E8+E7")
    assert isinstance(v, Lattice) and v.rank == 17
    g = lattice("U(4)+perp(U(4); U+E8)+E7")
    assert isinstance(g, GenusTriple)
    assert (g.rank, g.signature) == (17, Signature(1, 16))
    assert lattice("U") == hyperbolic_plane()
    assert lattice("0").rank == 0


@pytest.mark.parametrize("text,pos", [
    ("U+", 2),
    ("U+F8", 2),
    ("E9", 0),
    ("D3", 0),
    ("0A1", 0),
    ("A1(0)", 3),
    ("<3>", 0),
    ("perp(A1 E8)", 8),
    ("U)", 1),
    ("A", 1),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(DslError) as exc:
        parse(text)
    assert exc.value.pos == pos
    assert f"position {pos}" in str(exc.value)


@pytest.mark.parametrize("text", ["perp(A1; A2)", "perp(E8; E8)", "perp(A1; U)(2)",
                                  "A1(-1)+[[1]]"])
def test_evaluate_errors(text):
    with pytest.raises(DslError):
        lattice(text)


def test_table_expressions_round_trip():
    rows = builtin_tables()
    assert len(rows) == 53
    for row in rows:
        for text in (row.s, row.s_mir):
            e = parse(text)
            assert parse(render(e)) == e
            assert render(parse(render(e))) == render(e)


# random ASTs -------------------------------------------------------------

atoms = st.one_of(
    st.just(Atom("U")),
    st.integers(1, 9).map(lambda n: Atom("A", n)),
    st.integers(4, 9).map(lambda n: Atom("D", n)),
    st.sampled_from([6, 7, 8]).map(lambda n: Atom("E", n)),
    st.lists(st.sampled_from([-6, -4, -2, 2, 4]), min_size=1, max_size=3)
      .map(lambda xs: Atom("diag", tuple(xs))),
    st.just(GramLiteral(((-2, 1), (1, -4)))),
)
scales = st.integers(-5, 5).filter(bool)


def terms(base):
    scaled = st.one_of(base, st.builds(Scale, base, scales))
    return st.one_of(scaled, st.builds(Repeat, st.integers(1, 4), scaled))


def sums(base):
    return st.lists(terms(base), min_size=1, max_size=3).map(lambda ts: Sum(tuple(ts)))


exprs = st.recursive(
    sums(atoms),
    lambda inner: sums(st.one_of(atoms, st.builds(Perp, inner, inner))),
    max_leaves=8,
)


@settings(max_examples=300, deadline=None)
@given(exprs)
def test_parse_render_round_trip(e):
    assert parse(render(e)) == e


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["U", "E8", "A2", "D4", "U(2)", "<-4>", "2A1",
                                 "perp(A2; E8)", "perp(U(3); U+E8)"]),
                min_size=1, max_size=4))
def test_evaluate_sum_additive(parts):
    total = as_triple(lattice("+".join(parts)))
    pieces = [as_triple(lattice(p)) for p in parts]
    assert total.rank == sum(p.rank for p in pieces)
    assert total.signature == Signature(sum(p.t_plus for p in pieces),
                                        sum(p.t_minus for p in pieces))
    assert total.q.order == math.prod(p.q.order for p in pieces)
