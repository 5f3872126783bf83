"""Short vectors, roots and reflections.

Only negative definite lattices are enumerated.  Questions about hyperbolic
lattices are reduced to definite ones (orthogonal complements of a positive
vector or of a hyperbolic sublattice).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg
from .lattice import Lattice

NORM_BOUND = 64


class RootError(ValueError):
    pass


def _ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """``Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`` for positive definite ``gram``."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise RootError("form is not definite")
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= mu[i][j] * mu[i][k] * d[i]
    return d, mu


def _enumerate(gram, bound: int):
    """All ``x`` with ``0 < Q(x) <= bound`` for positive definite ``gram``."""
    n = len(gram)
    d, mu = _ldl(gram)
    x = [0] * n
    out = []

    def centre(i):
        return -sum(mu[i][j] * x[j] for j in range(i + 1, n))

    def rec(i, remaining):
        if i < 0:
            out.append(tuple(x))
            return
        c = centre(i)
        start = round(c)

        def cost(t):
            return d[i] * (t - c) ** 2

        for direction in (0, 1):
            t = start if direction == 0 else start - 1
            while cost(t) <= remaining:
                x[i] = t
                rec(i - 1, remaining - cost(t))
                t = t + 1 if direction == 0 else t - 1
        x[i] = 0

    rec(n - 1, Fraction(bound))
    return [v for v in out if any(v)]


def short_vectors(lat: Lattice, norm: int) -> list[tuple[int, ...]]:
    """All ``v`` with ``v.v == norm`` in a negative definite lattice.

    One vector per ``+-`` pair (first nonzero coordinate positive), sorted.
    """
    if not lat.is_negative_definite:
        raise RootError(f"{lat} is not negative definite")
    if norm >= 0 or norm % 2:
        raise RootError("norm must be a negative even integer")
    if -norm > NORM_BOUND:
        raise RootError(f"|norm| above the enumeration bound {NORM_BOUND}")
    pos = [[-x for x in row] for row in lat.gram]
    found = [v for v in _enumerate(pos, -norm) if lat.norm(v) == norm]
    reps = {v if next(c for c in v if c) > 0 else tuple(-c for c in v) for v in found}
    return sorted(reps)


def is_root(lat: Lattice, v: Sequence[int]) -> bool:
    """``v.v != 0`` and ``v.v`` divides ``2 (v . M)``."""
    n = lat.norm(v)
    if n == 0:
        raise RootError("zero-norm vector")
    row = linalg.matvec(lat.gram, v)
    return all((2 * x) % n == 0 for x in row)


def reflection(lat: Lattice, delta: Sequence[int]) -> linalg.IntMatrix:
    """Matrix (acting on coordinate columns) of ``x -> x - 2(x.d)/(d.d) d``."""
    if not is_root(lat, delta):
        raise RootError(f"{tuple(delta)} is not a root")
    n = lat.norm(delta)
    prods = linalg.matvec(lat.gram, delta)
    coef = [2 * p // n for p in prods]
    size = lat.rank
    return tuple(
        tuple(int(i == j) - coef[j] * delta[i] for j in range(size)) for i in range(size)
    )


def is_degenerate(witness) -> bool:
    """Whether the complement of ``witness.sub`` in ``witness.ambient`` has a (-2)-vector."""
    from .embeddings import complement_explicit

    if not witness.sub.is_hyperbolic or not witness.ambient.is_hyperbolic:
        raise RootError("sub and ambient must be hyperbolic")
    if witness.sub.rank >= witness.ambient.rank:
        raise RootError("sub must have smaller rank than the ambient lattice")
    comp = complement_explicit(witness)
    if not comp.is_negative_definite:
        raise RootError("complement is not negative definite")
    return bool(short_vectors(comp, -2))


def perp_of_vector(lat: Lattice, h: Sequence[int]) -> Lattice | None:
    """``h^perp`` in ``lat`` (``None`` when it is zero)."""
    row = (linalg.matvec(lat.gram, h),)
    k = linalg.integer_kernel(row)
    if not k or not k[0]:
        return None
    return lat.change_basis(k)


def in_chamber_interior(s: Lattice, h: Sequence[int]) -> bool:
    """No (-2)-vector of ``s`` is orthogonal to ``h``."""
    if not s.is_hyperbolic:
        raise RootError(f"{s} is not hyperbolic")
    if s.norm(h) <= 0:
        raise RootError("h must have positive square")
    perp = perp_of_vector(s, h)
    if perp is None:
        return True
    return not short_vectors(perp, -2)
