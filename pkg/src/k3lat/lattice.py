"""Even integral lattices given by Gram matrices, plus the named catalog.

Dynkin conventions (all root lattices are negative definite, diagonal -2,
+1 between adjacent nodes):

* ``A_n``: chain 1 - 2 - ... - n.
* ``D_n``: chain 1 - ... - (n-1), node n attached to n-2.
* ``E_n``: Bourbaki numbering, chain 1 - 3 - 4 - 5 - 6 - 7 - 8 with node 2
  attached to node 4.  ``E6 < E7 < E8`` are the first 6/7/8 nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .linalg import IntMatrix, RatMatrix


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    t_plus: int
    t_minus: int

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.t_plus + other.t_plus, self.t_minus + other.t_minus)

    def __sub__(self, other: "Signature") -> "Signature":
        return Signature(self.t_plus - other.t_plus, self.t_minus - other.t_minus)

    def __iter__(self):
        return iter((self.t_plus, self.t_minus))

    def __str__(self):
        return f"({self.t_plus},{self.t_minus})"


@dataclass(frozen=True)
class LatticeInvariants:
    rank: int
    signature: Signature
    determinant: int
    is_even: bool
    is_unimodular: bool
    is_hyperbolic: bool


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate even lattice ``Z^n`` with the given Gram matrix.

    Rank, determinant and signature are computed once at construction.
    """

    gram: IntMatrix
    label: Optional[str] = field(default=None, compare=False)
    determinant: int = field(init=False, compare=False, repr=False)
    signature: Signature = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        g = linalg.as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if not linalg.is_symmetric(g):
            raise LatticeError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(len(g))):
            raise LatticeError("only even lattices are supported")
        det = linalg.determinant(g)
        if det == 0:
            raise LatticeError("Gram matrix is degenerate")
        object.__setattr__(self, "determinant", det)
        object.__setattr__(self, "signature", Signature(*linalg.symmetric_signature(g)))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return True

    @property
    def is_unimodular(self) -> bool:
        return abs(self.determinant) == 1

    @property
    def is_hyperbolic(self) -> bool:
        return self.signature.t_plus == 1 and self.rank >= 1

    @property
    def is_negative_definite(self) -> bool:
        return self.signature.t_plus == 0

    def product(self, u: Sequence[int], v: Sequence[int]) -> int:
        return linalg.bilinear(self.gram, u, v)

    def norm(self, v: Sequence[int]) -> int:
        return linalg.bilinear(self.gram, v, v)

    def change_basis(self, b: Sequence[Sequence[int]]) -> "Lattice":
        """Lattice spanned by the columns of ``b`` (same label if unimodular)."""
        b = linalg.as_matrix(b)
        g = linalg.matmul(linalg.matmul(linalg.transpose(b), self.gram), b)
        return Lattice(g, self.label)

    def __str__(self):
        return self.label or f"<{list(map(list, self.gram))}>"


def invariants(lat: Lattice) -> LatticeInvariants:
    sig = lat.signature
    return LatticeInvariants(
        rank=lat.rank,
        signature=sig,
        determinant=lat.determinant,
        is_even=lat.is_even,
        is_unimodular=lat.is_unimodular,
        is_hyperbolic=sig == Signature(1, lat.rank - 1),
    )


def dual_gram(lat: Lattice) -> RatMatrix:
    """Gram matrix of ``M* = Hom(M, Z)`` in the dual basis."""
    return linalg.rational_inverse(lat.gram)


# --------------------------------------------------------------------------
# catalog


def _dynkin(n: int, edges) -> IntMatrix:
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    for i, j in edges:
        g[i - 1][j - 1] = g[j - 1][i - 1] = 1
    return linalg.as_matrix(g)


def root_lattice(kind: str, n: int) -> Lattice:
    kind = kind.upper()
    if kind == "A":
        if n < 1:
            raise LatticeError(f"A_{n}: need n >= 1")
        edges = [(i, i + 1) for i in range(1, n)]
    elif kind == "D":
        if n < 4:
            raise LatticeError(f"D_{n}: need n >= 4")
        edges = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    elif kind == "E":
        if n not in (6, 7, 8):
            raise LatticeError(f"E_{n}: need n in 6, 7, 8")
        edges = [(a, b) for a, b in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
                 if b <= n]
    else:
        raise LatticeError(f"unknown root lattice type {kind!r}")
    return Lattice(_dynkin(n, edges), f"{kind}{n}")


def hyperbolic_plane() -> Lattice:
    return Lattice(((0, 1), (1, 0)), "U")


def rank_one(a: int) -> Lattice:
    if a == 0 or a % 2:
        raise LatticeError(f"<{a}> is not an even nondegenerate lattice")
    return Lattice(((a,),), f"<{a}>")


def from_gram(rows: Sequence[Sequence[int]], label: Optional[str] = None) -> Lattice:
    try:
        return Lattice(linalg.as_matrix(rows), label)
    except linalg.LinAlgError as exc:
        raise LatticeError(str(exc)) from exc


def catalog(kind: str, param=None) -> Lattice:
    """Named lattices: ``A``/``D``/``E`` with an index, ``U``, ``rank1`` with
    an even integer, or ``gram`` with a matrix literal."""
    if kind in ("A", "D", "E"):
        return root_lattice(kind, int(param))
    if kind == "U":
        return hyperbolic_plane()
    if kind == "rank1":
        return rank_one(int(param))
    if kind == "gram":
        return from_gram(param)
    raise LatticeError(f"unknown catalog kind {kind!r}")


def rescale(lat: Lattice, t) -> Lattice:
    """``M(t)``: multiply the form by the nonzero rational ``t``."""
    t = Fraction(t)
    if t == 0:
        raise LatticeError("scale factor must be nonzero")
    scaled = [[t * x for x in row] for row in lat.gram]
    if any(x.denominator != 1 for row in scaled for x in row):
        raise LatticeError(f"{lat}({t}) is not integral")
    g = [[int(x) for x in row] for row in scaled]
    if any(g[i][i] % 2 for i in range(len(g))):
        raise LatticeError(f"{lat}({t}) is not even")
    label = f"{lat.label}({t})" if lat.label else None
    return Lattice(linalg.as_matrix(g), label)


def direct_sum(parts: Sequence[Lattice]) -> Lattice:
    if not parts:
        raise LatticeError("direct sum of nothing")
    if len(parts) == 1:
        return parts[0]
    label = "+".join(str(p) for p in parts)
    return Lattice(linalg.block_diagonal([p.gram for p in parts]), label)


def k3_lattice() -> Lattice:
    """``3U + 2E8``, signature (3, 19)."""
    u, e8 = hyperbolic_plane(), root_lattice("E", 8)
    return direct_sum([u, u, u, e8, e8])
