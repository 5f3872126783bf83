from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_even_lattice

from k3lat import linalg
from k3lat.lattice import (
    Lattice,
    LatticeError,
    Signature,
    catalog,
    direct_sum,
    dual_gram,
    hyperbolic_plane,
    invariants,
    k3_lattice,
    rank_one,
    rescale,
    root_lattice,
)


def test_catalog_examples():
    assert catalog("A", 1).gram == ((-2,),)
    assert catalog("U").gram == ((0, 1), (1, 0))
    lat = catalog("gram", [[-2, 1], [1, -4]])
    assert lat.rank == 2
    assert catalog("rank1", 4).gram == ((4,),)


@pytest.mark.parametrize("kind,param", [("A", 0), ("D", 3), ("E", 9), ("rank1", 3),
                                        ("rank1", 0), ("X", 1)])
def test_catalog_rejects(kind, param):
    with pytest.raises(LatticeError):
        catalog(kind, param)


def test_gram_literal_must_be_even_and_nondegenerate():
    with pytest.raises(LatticeError):
        catalog("gram", [[1, 0], [0, -2]])
    with pytest.raises(LatticeError):
        catalog("gram", [[2, 2], [2, 2]])
    with pytest.raises(LatticeError):
        catalog("gram", [[2, 1], [0, 2]])


@pytest.mark.parametrize("kind,n", [("A", n) for n in range(1, 9)]
                         + [("D", n) for n in range(4, 9)] + [("E", 6), ("E", 7), ("E", 8)])
def test_root_lattices_negative_definite(kind, n):
    lat = root_lattice(kind, n)
    assert lat.is_even
    assert lat.signature == Signature(0, n)
    expected_det = {"A": n + 1, "D": 4, "E": 9 - n}[kind] * (-1) ** n
    assert lat.determinant == expected_det


def test_rescale_examples():
    assert rescale(root_lattice("A", 1), 2).gram == ((-4,),)
    assert rescale(hyperbolic_plane(), 2).gram == ((0, 2), (2, 0))
    with pytest.raises(LatticeError):
        rescale(root_lattice("A", 1), Fraction(1, 2))
    with pytest.raises(LatticeError):
        rescale(hyperbolic_plane(), 0)
    assert rescale(rescale(hyperbolic_plane(), 4), Fraction(1, 2)).gram == ((0, 2), (2, 0))


def test_rescale_determinant():
    for lat in (root_lattice("E", 7), hyperbolic_plane(), root_lattice("D", 5)):
        for t in (2, 3, -1):
            assert rescale(lat, t).determinant == t ** lat.rank * lat.determinant


def test_direct_sum_examples():
    ue8 = direct_sum([hyperbolic_plane(), root_lattice("E", 8)])
    assert (ue8.rank, ue8.determinant) == (10, -1)
    assert k3_lattice().signature == Signature(3, 19)
    a1 = root_lattice("A", 1)
    assert direct_sum([a1]) is a1
    with pytest.raises(LatticeError):
        direct_sum([])


def test_invariants_examples():
    inv = invariants(direct_sum([hyperbolic_plane(), root_lattice("E", 8), root_lattice("E", 7)]))
    assert inv.is_hyperbolic and inv.is_even and inv.rank == 17
    u = invariants(hyperbolic_plane())
    assert u.is_unimodular and u.signature == Signature(1, 1)
    lat = catalog("gram", [[-2, 1], [1, -4]])
    assert lat.determinant == 7 and lat.is_negative_definite


def test_dual_gram_examples():
    assert dual_gram(root_lattice("A", 1)) == ((Fraction(-1, 2),),)
    assert dual_gram(hyperbolic_plane()) == ((0, 1), (1, 0))
    assert all(x.denominator == 1 for row in dual_gram(root_lattice("E", 8)) for x in row)


def test_k3_lattice():
    k3 = k3_lattice()
    assert k3.is_even and k3.is_unimodular and k3.rank == 22


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False), st.randoms(use_true_random=False))
def test_direct_sum_additive(r1, r2):
    a = random_even_lattice(r1, max_rank=8, basis_change=False)
    b = random_even_lattice(r2, max_rank=8, basis_change=False)
    s = direct_sum([a, b])
    assert s.rank == a.rank + b.rank
    assert s.signature == a.signature + b.signature
    assert s.determinant == a.determinant * b.determinant
    assert s.is_even


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_invariants_stable_under_basis_change(rng):
    lat = random_even_lattice(rng, basis_change=False)
    moved = lat.change_basis(linalg.unimodular_random(lat.rank, random.Random(rng.random())))
    assert invariants(moved) == invariants(lat)


def test_lattice_is_immutable_value():
    a = Lattice(((0, 1), (1, 0)))
    assert a.gram == hyperbolic_plane().gram
    with pytest.raises(Exception):
        a.gram = ((2,),)
    assert rank_one(-2).norm((3,)) == -18
