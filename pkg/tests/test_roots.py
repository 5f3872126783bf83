import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_even_lattice

from k3lat import linalg
from k3lat.dsl import lattice
from k3lat.embeddings import EmbeddingWitness
from k3lat.lattice import hyperbolic_plane, rank_one, rescale, root_lattice
from k3lat.roots import (
    RootError,
    in_chamber_interior,
    is_degenerate,
    is_root,
    perp_of_vector,
    reflection,
    short_vectors,
)

seeds = st.randoms(use_true_random=False)


@pytest.mark.parametrize("kind,n,count", [("E", 8, 240), ("E", 7, 126), ("E", 6, 72),
                                          ("D", 4, 24), ("A", 2, 6), ("A", 1, 2)])
def test_root_counts(kind, n, count):
    assert 2 * len(short_vectors(root_lattice(kind, n), -2)) == count


def test_short_vector_examples():
    assert len(short_vectors(root_lattice("A", 1), -4)) == 0
    assert short_vectors(root_lattice("A", 1), -8) == [(2,)]
    vs = short_vectors(root_lattice("A", 2), -2)
    assert vs == sorted(vs)
    assert all(next(x for x in v if x) > 0 for v in vs)


def test_short_vectors_rejects():
    with pytest.raises(RootError):
        short_vectors(hyperbolic_plane(), -2)
    with pytest.raises(RootError):
        short_vectors(root_lattice("A", 2), -3)
    with pytest.raises(RootError):
        short_vectors(root_lattice("A", 2), 2)
    with pytest.raises(RootError):
        short_vectors(root_lattice("A", 2), -66)


def test_is_root_examples():
    a1a1 = lattice("2A1")
    assert is_root(a1a1, (1, 0))
    assert is_root(rank_one(-4), (1,))
    # e1 + e2 has norm -4 and products -2 with the basis, so it is a root
    assert is_root(a1a1, (1, 1))
    # in A1 + <-4> the vector (1, 1) has norm -6 and products -2, -4
    assert not is_root(lattice("A1+<-4>"), (1, 1))
    with pytest.raises(RootError):
        is_root(hyperbolic_plane(), (1, 0))


def test_reflection_examples():
    u = hyperbolic_plane()
    assert reflection(u, (1, -1)) == ((0, 1), (1, 0))
    assert reflection(root_lattice("A", 1), (1,)) == ((-1,),)
    with pytest.raises(RootError):
        reflection(lattice("A1+<-4>"), (1, 1))
    assert reflection(lattice("2A1"), (1, 1)) == ((0, -1), (-1, 0))


def _check_reflection(lat, delta):
    r = reflection(lat, delta)
    assert linalg.matmul(linalg.matmul(linalg.transpose(r), lat.gram), r) == lat.gram
    assert linalg.matmul(r, r) == linalg.identity(lat.rank)
    assert linalg.matvec(r, delta) == tuple(-x for x in delta)
    assert linalg.determinant(r) == -1
    perp = linalg.integer_kernel((linalg.matvec(lat.gram, delta),))
    for j in range(len(perp[0])):
        col = tuple(row[j] for row in perp)
        assert linalg.matvec(r, col) == col


@pytest.mark.parametrize("text", ["A3", "D5", "E6", "A1+A2", "<-4>+A1", "D4(2)"])
def test_reflections_on_small_lattices(text):
    lat = lattice(text)
    for norm in (-2, -4, -8):
        for v in short_vectors(lat, norm):
            if is_root(lat, v):
                _check_reflection(lat, v)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_reflection_properties_random_basis(rng):
    lat = random_even_lattice(rng, max_rank=6, max_det=10**6, definite=True)
    roots = short_vectors(lat, -2)
    if roots:
        _check_reflection(lat, rng.choice(roots))


def test_weyl_group_of_a2_has_order_6():
    a2 = root_lattice("A", 2)
    roots = short_vectors(a2, -2)
    roots = roots + [tuple(-x for x in v) for v in roots]
    gens = [reflection(a2, v) for v in roots]
    group = {linalg.identity(2)}
    frontier = list(group)
    while frontier:
        g = frontier.pop()
        for s in gens:
            h = linalg.matmul(s, g)
            if h not in group:
                group.add(h)
                frontier.append(h)
    assert len(group) == 6
    root_set = set(roots)
    for g in group:
        assert {linalg.matvec(g, v) for v in roots} == root_set


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_counts_invariant_under_basis_change(rng):
    lat = random_even_lattice(rng, max_rank=6, max_det=10**6, definite=True, basis_change=False)
    moved = lat.change_basis(linalg.unimodular_random(lat.rank, random.Random(rng.random())))
    for norm in (-2, -4):
        assert len(short_vectors(moved, norm)) == len(short_vectors(lat, norm))


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from([2, 3]), st.sampled_from([-2, -4]))
def test_rescaling_identity(rng, t, norm):
    lat = random_even_lattice(rng, max_rank=5, max_det=10**6, definite=True)
    assert len(short_vectors(rescale(lat, t), t * norm)) == len(short_vectors(lat, norm))


def _dynkin_witness(k):
    """U + E8 + E_k (Dynkin subdiagram) inside U + 2E8."""
    amb = lattice("U+2E8")
    sub = lattice(f"U+E8+E{k}")
    cols = [[int(i == j) for j in range(sub.rank)] for i in range(amb.rank)]
    return EmbeddingWitness(sub, amb, cols)


def test_degenerate_examples():
    assert is_degenerate(_dynkin_witness(7))
    u4 = lattice("U+<-4>")
    assert not is_degenerate(EmbeddingWitness(hyperbolic_plane(), u4, [[1, 0], [0, 1], [0, 0]]))
    amb = lattice("U+2E8")
    with pytest.raises(RootError):
        is_degenerate(EmbeddingWitness(amb, amb, linalg.identity(18)))
    with pytest.raises(RootError):
        is_degenerate(EmbeddingWitness(root_lattice("A", 1), u4, [[1], [-1], [0]]))


def test_degenerate_monotone_on_dynkin_chain():
    # a larger S has a smaller complement, so degeneracy can only be lost
    verdicts = [is_degenerate(_dynkin_witness(k)) for k in (6, 7)]
    for smaller, larger in zip(verdicts, verdicts[1:]):
        assert smaller or not larger
    # the chain continued inside U + E8 + E8 + <-4>: complement <-4> is never degenerate
    amb = lattice("U+2E8+<-4>")
    sub = lattice("U+2E8")
    cols = [[int(i == j) for j in range(18)] for i in range(19)]
    assert not is_degenerate(EmbeddingWitness(sub, amb, cols))


def test_chamber_examples():
    u = hyperbolic_plane()
    assert in_chamber_interior(u, (2, 1))
    assert not in_chamber_interior(u, (1, 1))
    assert in_chamber_interior(rank_one(2), (1,))
    with pytest.raises(RootError):
        in_chamber_interior(u, (1, 0))
    with pytest.raises(RootError):
        in_chamber_interior(root_lattice("A", 2), (1, 0))


def test_perp_of_vector():
    u = hyperbolic_plane()
    assert perp_of_vector(u, (2, 1)).gram == ((-4,),)
    assert perp_of_vector(rank_one(2), (1,)) is None
