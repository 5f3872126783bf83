"""Finite quadratic forms ``q: A -> Q/2Z`` on finite abelian groups.

A form is stored in an invariant-factor basis ``g_1, ..., g_n`` of
``A = Z/d_1 + ... + Z/d_n`` (``1 < d_1 | d_2 | ...``) as one rational matrix:
the diagonal holds ``q(g_i)`` in ``[0, 2)`` and the off-diagonal holds
``b(g_i, g_j)`` in ``[0, 1)``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .lattice import Lattice

GAUSS_BOUND = 2 ** 20
BRUTE_FORCE_BOUND = 128
_SNAP_TOL = 1e-6


class FormError(ValueError):
    pass


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * math.floor(x / m)


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def valuation(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class FiniteQuadraticForm:
    orders: tuple[int, ...]
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        n = len(orders)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise FormError("gram shape does not match the group")
        if any(d <= 1 for d in orders):
            raise FormError("invariant factors must exceed 1")
        if any(orders[i + 1] % orders[i] for i in range(n - 1)):
            raise FormError(f"orders {orders} are not a divisibility chain")
        g = tuple(
            tuple(_mod(Fraction(self.gram[i][j]), 2 if i == j else 1) for j in range(n))
            for i in range(n)
        )
        for i in range(n):
            if _mod(orders[i] ** 2 * g[i][i], 2):
                raise FormError(f"q(g{i}) has wrong order")
            for j in range(n):
                if g[i][j] != g[j][i] and i != j:
                    raise FormError("b is not symmetric")
                if i != j and _mod(orders[i] * g[i][j], 1):
                    raise FormError(f"b(g{i}, g{j}) has wrong order")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "gram", g)
        for p in prime_factors(self.order):
            exps, lifted = _p_lift(self, p)
            det = linalg.determinant(lifted)
            if det == 0 or valuation(det, p) != sum(exps):
                raise FormError("bilinear form is degenerate")

    # -- basic structure -------------------------------------------------

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def is_trivial(self) -> bool:
        return not self.orders

    def q(self, x: Sequence[int]) -> Fraction:
        g = self.gram
        n = len(x)
        s = sum(x[i] * x[i] * g[i][i] for i in range(n))
        s += 2 * sum(x[i] * x[j] * g[i][j] for i in range(n) for j in range(i + 1, n))
        return _mod(s, 2)

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        g = self.gram
        n = len(x)
        s = sum(x[i] * y[j] * g[i][j] for i in range(n) for j in range(n))
        return _mod(s, 1)

    def elements(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.orders))

    def __str__(self):
        if self.is_trivial:
            return "trivial form"
        group = " + ".join(f"Z/{d}" for d in self.orders)
        return f"{group}; q = {[str(self.gram[i][i]) for i in range(self.rank)]}"


TRIVIAL = FiniteQuadraticForm((), ())


def from_generators(orders: Sequence[int], gram: Sequence[Sequence]) -> FiniteQuadraticForm:
    """Normalise ``Z/n_1 + ... + Z/n_k`` with arbitrary generator orders.

    ``gram`` gives ``q`` on the diagonal and ``b`` off it for the given
    generators.  The result is re-expressed in an invariant-factor basis.
    """
    k = len(orders)
    if k == 0:
        return TRIVIAL
    rel = [[orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
    u, d, _ = linalg.smith_normal_form(rel)
    uinv = _int_inverse(u)
    new_orders, basis = [], []
    for i in range(k):
        if d[i][i] > 1:
            new_orders.append(d[i][i])
            basis.append([uinv[r][i] for r in range(k)])
    return _restrict(gram, new_orders, basis)


def _restrict(gram, orders, basis) -> FiniteQuadraticForm:
    g = [[Fraction(x) for x in row] for row in gram]
    n = len(basis)
    k = len(g)
    new = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        x = basis[i]
        for j in range(n):
            y = basis[j]
            if i == j:
                s = sum(x[a] * x[a] * g[a][a] for a in range(k))
                s += 2 * sum(x[a] * x[c] * g[a][c] for a in range(k) for c in range(a + 1, k))
            else:
                s = sum(x[a] * y[c] * g[a][c] for a in range(k) for c in range(k))
            new[i][j] = s
    return FiniteQuadraticForm(tuple(orders), tuple(map(tuple, new)))


def _int_inverse(u) -> linalg.IntMatrix:
    inv = linalg.rational_inverse(u)
    return tuple(tuple(int(x) for x in row) for row in inv)


def discriminant_form(lat: Lattice) -> FiniteQuadraticForm:
    """``q_M`` on ``A_M = M*/M`` computed from the Smith form of the Gram matrix."""
    g = lat.gram
    if any(g[i][i] % 2 for i in range(len(g))):
        raise FormError("discriminant quadratic form needs an even lattice")
    _, d, v = linalg.smith_normal_form(g)
    n = len(g)
    orders, gens = [], []
    for i in range(n):
        if d[i][i] > 1:
            orders.append(d[i][i])
            gens.append([Fraction(v[r][i], d[i][i]) for r in range(n)])
    m = len(gens)
    gram = [[linalg.bilinear(g, gens[i], gens[j]) for j in range(m)] for i in range(m)]
    return FiniteQuadraticForm(tuple(orders), tuple(map(tuple, gram)))


def negate(q: FiniteQuadraticForm) -> FiniteQuadraticForm:
    return FiniteQuadraticForm(q.orders, tuple(tuple(-x for x in row) for row in q.gram))


def direct_sum_q(*forms: FiniteQuadraticForm) -> FiniteQuadraticForm:
    orders: list[int] = []
    blocks = []
    for f in forms:
        orders.extend(f.orders)
        blocks.append(f.gram)
    n = len(orders)
    gram = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for blk in blocks:
        for i, row in enumerate(blk):
            for j, x in enumerate(row):
                gram[off + i][off + j] = x
        off += len(blk)
    return from_generators(orders, gram)


def p_primary_part(q: FiniteQuadraticForm, p: int) -> FiniteQuadraticForm:
    orders, basis = [], []
    for i, d in enumerate(q.orders):
        pk = p ** _vp_int(d, p)
        if pk > 1:
            orders.append(pk)
            basis.append([d // pk if r == i else 0 for r in range(q.rank)])
    return _restrict(q.gram, orders, basis)


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _p_lift(q: FiniteQuadraticForm, p: int):
    """Integral matrix ``d_i d_j b(g_i, g_j)`` on the generators of ``p``-power order.

    Up to ``p``-adic units this is the Gram matrix of the ``p``-part rescaled
    by its orders, so ``b`` is nondegenerate at ``p`` iff its determinant has
    valuation ``sum(k_i)``.
    """
    idx = [i for i, d in enumerate(q.orders) if d % p == 0]
    exps = [_vp_int(q.orders[i], p) for i in idx]
    g = tuple(
        tuple(q.orders[i] * q.orders[j] * q.gram[i][j] for j in idx) for i in idx
    )
    assert all(x.denominator == 1 for row in g for x in row)
    return exps, tuple(tuple(int(x) for x in row) for row in g)


def min_generators(q: FiniteQuadraticForm) -> int:
    return q.rank


# --------------------------------------------------------------------------
# Gauss sums


def gauss_sum(q: FiniteQuadraticForm, bound: int = GAUSS_BOUND) -> complex:
    """``sum_{x in A} exp(pi i q(x))`` evaluated numerically."""
    if q.order > bound:
        raise FormError(f"|A| = {q.order} exceeds the Gauss-sum bound {bound}")
    if q.is_trivial:
        return 1 + 0j
    den = math.lcm(*(x.denominator for row in q.gram for x in row))
    mod = 2 * den
    qi = [int(q.gram[i][i] * den) for i in range(q.rank)]
    bij = [[int(2 * q.gram[i][j] * den) % mod for j in range(q.rank)] for i in range(q.rank)]
    # enumerate inner coordinates with numpy, the rest in python
    inner = q.rank
    size = 1
    while inner > 0 and size * q.orders[inner - 1] <= 1 << 16:
        inner -= 1
        size *= q.orders[inner]
    grids = np.indices(q.orders[inner:]).reshape(q.rank - inner, -1).astype(np.int64)
    total = 0j
    for outer in itertools.product(*(range(d) for d in q.orders[:inner])):
        x = list(outer)
        base = sum(x[i] * x[i] * qi[i] for i in range(inner))
        base += sum(x[i] * x[j] * bij[i][j] for i in range(inner) for j in range(i + 1, inner))
        val = np.full(grids.shape[1], base % mod, dtype=np.int64)
        for a in range(inner, q.rank):
            ca = grids[a - inner]
            coef = (sum(x[i] * bij[i][a] for i in range(inner)) % mod)
            val = (val + ca * ca % mod * qi[a] + ca * coef) % mod
            for c in range(a + 1, q.rank):
                val = (val + (ca * grids[c - inner] % mod) * bij[a][c]) % mod
        total += complex(np.exp(1j * np.pi * val / den).sum())
    return total


def gauss_signature(q: FiniteQuadraticForm, bound: int = GAUSS_BOUND) -> int:
    """The ``s mod 8`` with ``gauss_sum = sqrt|A| exp(2 pi i s / 8)``."""
    z = gauss_sum(q, bound) / math.sqrt(q.order)
    s = round(cmath.phase(z) / (math.pi / 4)) % 8
    if abs(z - cmath.exp(2j * math.pi * s / 8)) > _SNAP_TOL:
        raise FormError(f"Gauss sum {z} is not an eighth root of unity")
    return s


# --------------------------------------------------------------------------
# exhaustive isomorphism search (test oracle)


def brute_force_iso(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm,
                    bound: int = BRUTE_FORCE_BOUND) -> bool:
    """Search for a bijective homomorphism ``A_1 -> A_2`` preserving ``q``.

    Generators of ``A_1`` are mapped one at a time to elements of ``A_2`` of
    the same order, ``q``-value and pairings with earlier images; an image
    must meet the subgroup spanned so far trivially.
    """
    if q1.order > bound or q2.order > bound:
        raise FormError(f"brute force limited to |A| <= {bound}")
    if q1.order != q2.order:
        return False
    if q1.is_trivial:
        return True
    elems = list(q2.elements())
    index = {x: k for k, x in enumerate(elems)}
    size = len(elems)
    add = [[index[tuple((a + b) % d for a, b, d in zip(x, y, q2.orders))] for y in elems]
           for x in elems]
    qv = [q2.q(x) for x in elems]
    order = [_elem_order(x, q2.orders) for x in elems]

    # value distributions must agree
    dist1 = sorted((_elem_order(x, q1.orders), q1.q(x)) for x in q1.elements())
    if dist1 != sorted(zip(order, qv)):
        return False

    n = q1.rank
    candidates = [
        [y for y in range(size) if order[y] == q1.orders[i] and qv[y] == q1.gram[i][i]]
        for i in range(n)
    ]

    def search(i, images, subgroup):
        if i == n:
            return True
        for y in candidates[i]:
            if any(q2.b(elems[y], elems[images[j]]) != q1.gram[i][j] for j in range(i)):
                continue
            multiples, z = [], 0
            for _ in range(q1.orders[i] - 1):
                z = add[z][y]
                multiples.append(z)
            if any(m in subgroup for m in multiples):
                continue
            grown = set(subgroup)
            for m in multiples:
                grown.update(add[s][m] for s in subgroup)
            if search(i + 1, images + [y], grown):
                return True
        return False

    return search(0, [], {0})


def _elem_order(x, orders) -> int:
    o = 1
    for a, d in zip(x, orders):
        o = math.lcm(o, d // math.gcd(a, d))
    return o
