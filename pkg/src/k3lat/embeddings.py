"""Complements in even unimodular lattices, at genus level and explicitly.

If ``S`` sits primitively in an even unimodular ``L`` then its complement
``T`` has signature ``sig(L) - sig(S)`` and discriminant form ``-q_S``.
Conversely two genera glue to ``L`` when signatures add up and the forms are
opposite; that is what :func:`verify_complement_pair` checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Union

from . import linalg
from .genus import is_isomorphic
from .lattice import Lattice, LatticeError, Signature
from .quadform import (
    GAUSS_BOUND,
    FiniteQuadraticForm,
    TRIVIAL,
    direct_sum_q,
    discriminant_form,
    gauss_signature,
    min_generators,
    negate,
)
from .roots import short_vectors


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class GenusTriple:
    """``(t_plus, t_minus, q)``: the genus of an even lattice."""

    t_plus: int
    t_minus: int
    q: FiniteQuadraticForm

    @property
    def rank(self) -> int:
        return self.t_plus + self.t_minus

    @property
    def signature(self) -> Signature:
        return Signature(self.t_plus, self.t_minus)

    @property
    def milgram_ok(self) -> bool:
        """Gauss signature of ``q`` equals ``t_plus - t_minus`` mod 8."""
        return gauss_signature(self.q) == (self.t_plus - self.t_minus) % 8

    def __add__(self, other: "GenusTriple") -> "GenusTriple":
        return GenusTriple(self.t_plus + other.t_plus, self.t_minus + other.t_minus,
                           direct_sum_q(self.q, other.q))

    def __str__(self):
        from .genus import genus_symbol
        return f"genus({self.t_plus},{self.t_minus}; {genus_symbol(self.q)})"


LatticeLike = Union[Lattice, GenusTriple]


def as_triple(m: LatticeLike) -> GenusTriple:
    if isinstance(m, GenusTriple):
        return m
    return GenusTriple(m.signature.t_plus, m.signature.t_minus, discriminant_form(m))


def _check_ambient(ambient: Lattice) -> None:
    if not ambient.is_unimodular:
        raise EmbeddingError(f"ambient {ambient} is not unimodular")


def complement_genus(m: LatticeLike, ambient: Lattice) -> GenusTriple:
    _check_ambient(ambient)
    g = as_triple(m)
    if g.rank >= ambient.rank:
        raise EmbeddingError(f"rank {g.rank} is not below the ambient rank {ambient.rank}")
    rest = ambient.signature - g.signature
    if rest.t_plus < 0 or rest.t_minus < 0:
        raise EmbeddingError(f"signature {g.signature} does not fit into {ambient.signature}")
    return GenusTriple(rest.t_plus, rest.t_minus, negate(g.q))


@dataclass(frozen=True)
class PairReport:
    ranks_add_up: bool
    signatures_add_up: bool
    forms_opposite: bool

    @property
    def ok(self) -> bool:
        return self.ranks_add_up and self.signatures_add_up and self.forms_opposite


def verify_complement_pair(s: LatticeLike, t: LatticeLike, ambient: Lattice) -> PairReport:
    _check_ambient(ambient)
    gs, gt = as_triple(s), as_triple(t)
    return PairReport(
        ranks_add_up=gs.rank + gt.rank == ambient.rank,
        signatures_add_up=gs.signature + gt.signature == ambient.signature,
        forms_opposite=is_isomorphic(gt.q, negate(gs.q)),
    )


@dataclass(frozen=True)
class Existence:
    consistent: bool
    reason: str = ""

    def __str__(self):
        return "Consistent" if self.consistent else f"Impossible({self.reason})"


def existence_check(g: GenusTriple) -> Existence:
    """Necessary conditions only: Milgram's formula and ``rank >= l(A)``."""
    if g.rank < min_generators(g.q):
        return Existence(False, f"rank {g.rank} < l(A) = {min_generators(g.q)}")
    if g.q.order <= GAUSS_BOUND and not g.milgram_ok:
        return Existence(
            False,
            f"Gauss signature {gauss_signature(g.q)} != {(g.t_plus - g.t_minus) % 8} mod 8",
        )
    return Existence(True)


class Uniqueness(str, enum.Enum):
    UNIQUE = "Unique"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


def nikulin_unique(g: GenusTriple) -> Uniqueness:
    """Sufficient criterion: indefinite and ``rank >= 2 + l(A_q)``."""
    if g.t_plus >= 1 and g.t_minus >= 1 and g.rank >= 2 + min_generators(g.q):
        return Uniqueness.UNIQUE
    return Uniqueness.INCONCLUSIVE


# --------------------------------------------------------------------------
# explicit embeddings


@dataclass(frozen=True)
class EmbeddingWitness:
    """Columns of ``matrix`` are the images of the basis of ``sub``."""

    sub: Lattice
    ambient: Lattice
    matrix: linalg.IntMatrix

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        rows, cols = linalg.shape(m)
        if rows != self.ambient.rank or cols != self.sub.rank:
            raise EmbeddingError(
                f"witness matrix is {rows}x{cols}, expected "
                f"{self.ambient.rank}x{self.sub.rank}"
            )
        image = linalg.matmul(linalg.matmul(linalg.transpose(m), self.ambient.gram), m)
        if image != self.sub.gram:
            raise EmbeddingError("witness does not preserve the Gram matrix")
        if not linalg.is_primitive(m):
            raise EmbeddingError("witness image is not primitive")


def complement_explicit(w: EmbeddingWitness) -> Lattice:
    """Gram matrix of ``{x in ambient : x . image = 0}``."""
    rel = linalg.matmul(linalg.transpose(w.matrix), w.ambient.gram)
    k = linalg.integer_kernel(rel)
    if not k or not k[0]:
        raise EmbeddingError("complement is zero")
    gram = linalg.matmul(linalg.matmul(linalg.transpose(k), w.ambient.gram), k)
    return Lattice(gram, f"perp({w.sub}; {w.ambient})")


def find_embedding_definite(m: Lattice, ambient: Lattice) -> Optional[EmbeddingWitness]:
    """Exhaustive backtracking over vectors of the right norms.

    The first basis vector of ``m`` is only tried on the chosen
    representative of each ``+-`` pair; the second half of the pair gives an
    equivalent embedding.
    """
    if not ambient.is_negative_definite or ambient.rank > 8:
        raise EmbeddingError("ambient must be negative definite of rank <= 8")
    if not m.is_negative_definite:
        raise EmbeddingError(f"{m} is not negative definite")
    if m.rank >= ambient.rank:
        return None
    g = m.gram
    by_norm: dict[int, list] = {}
    for i in range(m.rank):
        nrm = g[i][i]
        if nrm not in by_norm:
            reps = short_vectors(ambient, nrm)
            by_norm[nrm] = reps + [tuple(-x for x in v) for v in reps]
    first = short_vectors(ambient, g[0][0])

    def search(images):
        i = len(images)
        if i == m.rank:
            mat = linalg.transpose(images)
            return mat if linalg.is_primitive(mat) else None
        pool = first if i == 0 else by_norm[g[i][i]]
        for v in pool:
            if all(ambient.product(v, images[j]) == g[i][j] for j in range(i)):
                found = search(images + [v])
                if found is not None:
                    return found
        return None

    mat = search([])
    return None if mat is None else EmbeddingWitness(m, ambient, mat)


# --------------------------------------------------------------------------
# curated witness data


@dataclass(frozen=True)
class WitnessRecord:
    sub_text: str
    ambient_text: str
    witness: EmbeddingWitness


def parse_witnesses(text: str) -> list[WitnessRecord]:
    """Records separated by blank lines::

        sub: U(4)
        ambient: U+E8
        1 1
        0 4
        ...

    Matrix rows are ambient coordinates, columns are sub basis vectors.
    """
    from . import dsl

    records = []
    for chunk in text.strip().split("\n\n"):
        lines = [ln.strip() for ln in chunk.strip().splitlines()
                 if ln.strip() and not ln.strip().startswith("#")]
        if not lines:
            continue
        fields, rows = {}, []
        for ln in lines:
            if ":" in ln:
                key, val = ln.split(":", 1)
                fields[key.strip()] = val.strip()
            else:
                rows.append([int(x) for x in ln.split()])
        try:
            sub_text, amb_text = fields["sub"], fields["ambient"]
        except KeyError as exc:
            raise EmbeddingError(f"witness record lacks {exc}") from None
        sub = dsl.evaluate(dsl.parse(sub_text))
        amb = dsl.evaluate(dsl.parse(amb_text))
        if not isinstance(sub, Lattice) or not isinstance(amb, Lattice):
            raise EmbeddingError("witness lattices must be concrete")
        records.append(WitnessRecord(sub_text, amb_text, EmbeddingWitness(sub, amb, rows)))
    return records


def load_witnesses(path: Optional[str] = None) -> list[WitnessRecord]:
    if path is None:
        text = resources.files("k3lat").joinpath("data/witnesses.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_witnesses(text)


__all__ = [
    "EmbeddingError",
    "EmbeddingWitness",
    "Existence",
    "GenusTriple",
    "LatticeError",
    "PairReport",
    "TRIVIAL",
    "Uniqueness",
    "WitnessRecord",
    "as_triple",
    "complement_explicit",
    "complement_genus",
    "existence_check",
    "find_embedding_definite",
    "load_witnesses",
    "nikulin_unique",
    "parse_witnesses",
    "verify_complement_pair",
]
