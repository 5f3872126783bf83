import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_even_lattice, random_small_form

from k3lat import linalg
from k3lat.dsl import lattice
from k3lat.genus import (
    GenusSymbol,
    JordanComponent,
    SymbolError,
    canonical,
    canonical_equal,
    form_from_symbol,
    genus_symbol,
    is_isomorphic,
    parse_genus_symbol,
)
from k3lat.quadform import TRIVIAL, brute_force_iso, discriminant_form, negate, p_primary_part
from k3lat.tables import builtin_tables

seeds = st.randoms(use_true_random=False)


def sym(text):
    return parse_genus_symbol(text)


def q_of(text):
    return discriminant_form(lattice(text))


@pytest.mark.parametrize("expr,expected", [
    ("E7", "2_1^{+1}"),
    ("A1", "2_7^{+1}"),
    ("U(2)+E8+E7+A1", "2_0^{+4}"),
    ("U+E8+D4", "2_{II}^{-2}"),
    ("U(2)", "2_{II}^{+2}"),
    ("A2", "3^{+1}"),
    ("E6", "3^{-1}"),
    ("U", "0"),
])
def test_genus_symbol_examples(expr, expected):
    got = genus_symbol(q_of(expr))
    assert canonical_equal(got, sym(expected))
    assert str(got) == str(canonical(sym(expected)))


def test_parse_examples():
    s = sym("2_2^{+2},4_{II}^{+4}")
    assert [c.level for c in s.components] == [2, 4]
    assert s.components[1].type_ii and s.components[0].oddity == 2
    assert [c.level for c in sym("3^{-1},9^{-1}").components] == [3, 9]
    assert sym("0") == GenusSymbol()
    assert sym("2_{-1}^{+1}") == sym("2_7^{+1}")
    assert sym("2_{−1}^{+1}") == sym("2_7^{+1}")


def test_same_level_components_merge():
    assert sym("2_1^{+1},2_7^{+1}") == sym("2_0^{+2}")
    assert canonical_equal(sym("2_1^{+1},2_7^{+1}"), sym("2_0^{+2}"))


@pytest.mark.parametrize("text", ["3_1^{+1}", "3_{II}^{+2}", "2^{+1}", "6^{+1}", "2_1^{1}",
                                  "2_{II}^{+1}", "4_1^{+0}", "x", "2_1^{+1},"])
def test_parse_errors(text):
    with pytest.raises(SymbolError):
        sym(text)


def test_print_parse_round_trip_on_tables():
    for row in builtin_tables():
        s = sym(row.q_s)
        assert sym(str(s)) == s


def test_canonical_equal_examples():
    assert canonical_equal(sym("2_1^{+1}"), sym("2_1^{+1}"))
    assert not canonical_equal(sym("2_1^{+1}"), sym("2_7^{+1}"))
    assert not canonical_equal(sym("3^{+1}"), sym("3^{-1}"))
    # sign walking between adjacent type I levels
    assert canonical_equal(sym("2_1^{+1},4_1^{+1}"), sym("2_3^{-1},4_3^{-1}"))
    assert not canonical_equal(sym("2_1^{+1},4_1^{+1}"), sym("2_5^{-1},4_5^{-1}"))
    # the same statement on explicit forms: <2>+<4> against the 2-part of <6>+<12>
    two_part = p_primary_part(q_of("<6,12>"), 2)
    assert brute_force_iso(q_of("<2,4>"), two_part)
    assert canonical_equal(genus_symbol(two_part), sym("2_3^{-1},4_3^{-1}"))


def test_is_isomorphic_examples():
    row = builtin_tables()[0]
    q_s = q_of(row.s)
    q_t = q_of(f"U+{row.s_mir}")
    assert is_isomorphic(q_t, negate(q_s))
    assert not is_isomorphic(q_of("A1"), q_of("E7"))
    q = q_of("D4+A2")
    assert is_isomorphic(q, q)


def test_table_symbols_are_realised():
    """Each table cell describes a form of the stated order that reparses to itself."""
    for row in builtin_tables():
        s = sym(row.q_s)
        q = form_from_symbol(s)
        assert q.order == s.order
        assert canonical_equal(genus_symbol(q), s)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_presentation_independence(rng):
    lat = random_even_lattice(rng, max_rank=10, max_det=20000, basis_change=False)
    b = linalg.unimodular_random(lat.rank, random.Random(rng.random()), steps=4 * lat.rank)
    before = discriminant_form(lat)
    after = discriminant_form(lat.change_basis(b))
    assert str(genus_symbol(before)) == str(genus_symbol(after))
    assert genus_symbol(before) == genus_symbol(after)
    assert is_isomorphic(before, after)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_oracle_agreement(rng):
    a, b = random_small_form(rng), random_small_form(rng)
    assert is_isomorphic(a, b) == brute_force_iso(a, b)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_symbol_round_trip(rng):
    q = discriminant_form(random_even_lattice(rng, max_det=20000))
    s = genus_symbol(q)
    assert sym(str(s)) == s
    assert canonical(s) == s
    assert is_isomorphic(form_from_symbol(s), q)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_symbol_of_form_from_symbol_small(rng):
    q = random_small_form(rng)
    assert brute_force_iso(form_from_symbol(genus_symbol(q)), q)


def test_trivial_symbol():
    assert str(genus_symbol(TRIVIAL)) == "0"
    assert form_from_symbol(GenusSymbol()) == TRIVIAL


def test_component_validation():
    with pytest.raises(SymbolError):
        JordanComponent(2, 1, 1, 1, type_ii=True)
    with pytest.raises(SymbolError):
        JordanComponent(3, 1, 1, 2)
    assert str(JordanComponent(2, 3, 1, -1, oddity=3)) == "8_3^{-1}"
    assert str(JordanComponent(2, 1, 2, -1, type_ii=True)) == "2_{II}^{-2}"
