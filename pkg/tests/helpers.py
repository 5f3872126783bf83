"""Random lattices and forms shared by the property tests."""

import random

from k3lat import linalg
from k3lat.lattice import Lattice, direct_sum, hyperbolic_plane, rank_one, rescale, root_lattice
from k3lat.quadform import discriminant_form, p_primary_part

DEFINITE_PIECES = [
    ("A", 1), ("A", 2), ("A", 3), ("A", 4), ("A", 5), ("D", 4), ("D", 5), ("D", 6),
    ("E", 6), ("E", 7), ("E", 8),
]


def catalog_piece(rng: random.Random, definite=False) -> Lattice:
    r = rng.random()
    if r < 0.7 or definite:
        if not definite and r < 0.1:
            return rank_one(rng.choice([-8, -6, -4, -2, 2, 4, 6]))
        kind, n = rng.choice(DEFINITE_PIECES)
        lat = root_lattice(kind, n)
    else:
        lat = hyperbolic_plane()
    if rng.random() < 0.25:
        lat = rescale(lat, rng.choice([2, 3]) * (1 if definite else rng.choice([1, -1])))
    return lat


def random_even_lattice(rng: random.Random, max_rank=12, max_det=4096, definite=False,
                        basis_change=True) -> Lattice:
    """A sum of catalog pieces, optionally in a random basis."""
    while True:
        parts = [catalog_piece(rng, definite) for _ in range(rng.randint(1, 3))]
        lat = direct_sum(parts)
        if lat.rank > max_rank or abs(lat.determinant) > max_det:
            continue
        if basis_change:
            lat = lat.change_basis(linalg.unimodular_random(lat.rank, rng))
        return lat


def _two_adic_block(rng):
    s = 2 ** rng.choice([1, 1, 2, 2, 3])
    t = rng.random()
    if t < 0.6:
        return [[s * rng.choice([1, 3, 5, 7])]]
    if t < 0.8:
        return [[0, s], [s, 0]]
    return [[2 * s, s], [s, 2 * s]]


def random_small_form(rng: random.Random, bound=128, odd_part=True):
    """A finite form of order at most ``bound`` in a random presentation."""
    while True:
        blocks = [_two_adic_block(rng) for _ in range(rng.randint(1, 4))]
        if odd_part and rng.random() < 0.3:
            blocks.append([[2 * rng.choice([3, 9, 5]) * rng.choice([1, -1])]])
        lat = Lattice(linalg.block_diagonal(blocks))
        lat = lat.change_basis(linalg.unimodular_random(lat.rank, rng))
        q = discriminant_form(lat)
        if rng.random() < 0.5:
            q = p_primary_part(q, 2)
        if 1 < q.order <= bound:
            return q
