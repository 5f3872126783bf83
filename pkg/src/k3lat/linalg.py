"""Exact integer and rational matrix kernels.

Matrices are tuples of row tuples holding Python ints (or ``Fraction`` for
rational matrices), so entries never overflow.  A matrix with ``r`` rows and
no columns is ``((),) * r``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

IntMatrix = Tuple[Tuple[int, ...], ...]
RatMatrix = Tuple[Tuple[Fraction, ...], ...]


class LinAlgError(ValueError):
    """Raised on shape errors and singular/degenerate input."""


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise LinAlgError("ragged matrix")
    return m


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple:
    rows, cols = shape(m)
    return tuple(tuple(m[i][j] for i in range(rows)) for j in range(cols))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise LinAlgError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b) if rb else ((),) * cb
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence, v: Sequence) -> int:
    return sum(x * y for x, y in zip(u, v))


def bilinear(gram: Sequence[Sequence], u: Sequence, v: Sequence):
    """``u^T G v``."""
    return dot(u, matvec(gram, v))


def block_diagonal(blocks: Sequence[Sequence[Sequence[int]]]) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return as_matrix(out)


def is_symmetric(m: Sequence[Sequence]) -> bool:
    n, c = shape(m)
    return n == c and all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


# --------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``D = U M V`` diagonal, ``d1 | d2 | ...``.

    ``U`` and ``V`` are unimodular and every ``d_i`` is non-negative; zero
    invariant factors come last.
    """
    a = [list(r) for r in m]
    rows, cols = shape(m)
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        if k:
            for r in a:
                r[dst] += k * r[src]
            for r in v:
                r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _freeze(u), _freeze(a), _freeze(v)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                add_row(i, t, -(a[i][t] // p))
                clean &= a[i][t] == 0
            for j in range(t + 1, cols):
                add_col(j, t, -(a[t][j] // p))
                clean &= a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return _freeze(u), _freeze(a), _freeze(v)


def _freeze(m) -> IntMatrix:
    return tuple(tuple(r) for r in m)


def invariant_factors(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    _, d, _ = smith_normal_form(m)
    rows, cols = shape(m)
    return tuple(d[i][i] for i in range(min(rows, cols)))


def integer_kernel(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Columns form a basis of the saturated kernel ``{x in Z^n : M x = 0}``.

    The result is ``n x k``; with ``k == 0`` it is ``((),) * n``.
    """
    rows, cols = shape(m)
    if rows == 0:
        return identity(cols)
    _, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(rows, cols)) if d[i][i])
    return tuple(tuple(v[i][j] for j in range(r, cols)) for i in range(cols))


def rank(m: Sequence[Sequence[int]]) -> int:
    return sum(1 for d in invariant_factors(m) if d)


def is_primitive(m: Sequence[Sequence[int]]) -> bool:
    """Columns span a saturated sublattice (all invariant factors are 1)."""
    rows, cols = shape(m)
    if cols == 0:
        return True
    if cols > rows:
        return False
    return all(d == 1 for d in invariant_factors(m))


# --------------------------------------------------------------------------
# Determinant, inverse, signature


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n, c = shape(m)
    if n != c:
        raise LinAlgError(f"determinant of non-square {n}x{c} matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(m: Sequence[Sequence]) -> RatMatrix:
    n, c = shape(m)
    if n != c:
        raise LinAlgError("inverse of non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise LinAlgError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return tuple(tuple(row[n:]) for row in a)


def symmetric_signature(g: Sequence[Sequence]) -> tuple[int, int]:
    """``(t_plus, t_minus)`` of a nondegenerate symmetric matrix.

    Congruent diagonalisation over the rationals; a zero diagonal is fixed by
    replacing ``e_i`` with ``e_i + e_j`` for some ``g_ij != 0``.
    """
    if not is_symmetric(g):
        raise LinAlgError("matrix is not symmetric")
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    plus = minus = 0
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(k, n) if a[i][j]), None)
            if pair is None:
                raise LinAlgError("degenerate symmetric matrix")
            i, j = pair
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for row in a:
                row[i] += row[j]
            piv = i
        a[k], a[piv] = a[piv], a[k]
        for row in a:
            row[k], row[piv] = row[piv], row[k]
        p = a[k][k]
        if p > 0:
            plus += 1
        else:
            minus += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
    return plus, minus


def unimodular_random(n: int, rng, steps: int = 0) -> IntMatrix:
    """A random unimodular matrix built from elementary operations."""
    m = [list(r) for r in identity(n)]
    if n < 2:
        if n == 1 and rng.random() < 0.5:
            m[0][0] = -1
        return _freeze(m)
    for _ in range(steps or 3 * n):
        i, j = rng.sample(range(n), 2)
        k = rng.choice((-2, -1, 1, 2))
        m[i] = [x + k * y for x, y in zip(m[i], m[j])]
        if rng.random() < 0.2:
            m[i], m[j] = m[j], m[i]
    return _freeze(m)
