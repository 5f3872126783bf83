"""Conway-Sloane genus symbols for finite quadratic forms.

A finite form ``q`` on a ``p``-group is realised by the ``p``-adic lattice
whose Gram matrix is the inverse of the matrix of ``q``; the symbol of ``q``
is the Jordan decomposition of that lattice.  It has no unimodular part, so
levels start at ``p``.

Two symbols describe isomorphic finite forms iff their canonical
representatives agree.  For odd ``p`` the symbol is already canonical.  For
``p = 2`` we prepend an even unimodular plane ``1_II^{+2}``, apply oddity
fusion and sign walking (all signs of a train are moved to its first
component) and drop the plane again.  The plane soaks up the determinant
ambiguity of lifts whose level-2 block is odd, which is exactly the extra
freedom a finite form has compared to a lattice.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .lattice import Lattice
from .quadform import (
    FiniteQuadraticForm,
    FormError,
    TRIVIAL,
    direct_sum_q,
    discriminant_form,
    p_primary_part,
    prime_factors,
    valuation,
)


class SymbolError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class JordanComponent:
    prime: int
    exponent: int
    rank: int
    sign: int
    type_ii: bool = False
    oddity: int = 0

    def __post_init__(self):
        if self.rank <= 0:
            raise SymbolError("component rank must be positive")
        if self.sign not in (1, -1):
            raise SymbolError("sign must be +1 or -1")
        if self.prime != 2:
            if self.type_ii or self.oddity:
                raise SymbolError(f"type/oddity only make sense at p = 2, not {self.prime}")
        elif self.type_ii:
            if self.oddity:
                raise SymbolError("type II components carry no oddity")
            if self.rank % 2:
                raise SymbolError("type II components have even rank")
        object.__setattr__(self, "oddity", self.oddity % 8)

    @property
    def level(self) -> int:
        return self.prime ** self.exponent

    def __str__(self):
        sub = ""
        if self.prime == 2:
            sub = "_{II}" if self.type_ii else _sub(str(self.oddity))
        sign = "+" if self.sign > 0 else "-"
        return f"{self.level}{sub}^{{{sign}{self.rank}}}"


def _sub(text: str) -> str:
    return f"_{text}" if len(text) == 1 else f"_{{{text}}}"


@dataclass(frozen=True)
class GenusSymbol:
    components: tuple[JordanComponent, ...] = ()

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: (c.prime, c.exponent)))
        keys = [(c.prime, c.exponent) for c in comps]
        if len(set(keys)) != len(keys):
            raise SymbolError("two components with the same level")
        object.__setattr__(self, "components", comps)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({c.prime for c in self.components}))

    def at(self, p: int) -> tuple[JordanComponent, ...]:
        return tuple(c for c in self.components if c.prime == p)

    @property
    def order(self) -> int:
        out = 1
        for c in self.components:
            out *= c.level ** c.rank
        return out

    def __str__(self):
        return ",".join(map(str, self.components)) or "0"


# --------------------------------------------------------------------------
# parsing

_COMPONENT = re.compile(
    r"""^(?P<level>\d+)
        (?:_(?:\{(?P<sub1>[^{}]*)\}|(?P<sub2>-?[0-9]+|II)))?
        \^(?:\{(?P<sup1>[^{}]*)\}|(?P<sup2>[+-]?\d+))$""",
    re.X,
)


def parse_genus_symbol(text: str) -> GenusSymbol:
    """Parse ``"2_2^{+2},4_{II}^{+4}"``-style text; ``"0"`` is the trivial form."""
    text = text.replace("−", "-").replace(" ", "")
    if text in ("0", ""):
        return GenusSymbol()
    merged: dict = {}
    for part in text.split(","):
        c = _parse_component(part, text)
        key = (c.prime, c.exponent)
        merged[key] = _merge(merged[key], c) if key in merged else c
    return GenusSymbol(tuple(merged.values()))


def _merge(a: JordanComponent, b: JordanComponent) -> JordanComponent:
    """Orthogonal sum of two components of the same level."""
    type_ii = a.type_ii and b.type_ii
    return JordanComponent(a.prime, a.exponent, a.rank + b.rank, a.sign * b.sign,
                           type_ii=type_ii, oddity=0 if type_ii else a.oddity + b.oddity)


def _parse_component(part: str, whole: str) -> JordanComponent:
    m = _COMPONENT.match(part)
    if not m:
        raise SymbolError(f"malformed component {part!r} in {whole!r}")
    level = int(m["level"])
    p, e = _prime_power(level)
    if p is None or e == 0:
        raise SymbolError(f"level {level} is not a prime power > 1")
    sup = m["sup1"] if m["sup1"] is not None else m["sup2"]
    sm = re.fullmatch(r"([+-])(\d+)", sup)
    if not sm:
        raise SymbolError(f"component {part!r} needs a signed rank like ^{{+2}}")
    sign = 1 if sm[1] == "+" else -1
    rank = int(sm[2])
    sub = m["sub1"] if m["sub1"] is not None else m["sub2"]
    if p != 2:
        if sub is not None:
            raise SymbolError(f"subscript {sub!r} not allowed for odd prime {p}")
        return JordanComponent(p, e, rank, sign)
    if sub is None:
        raise SymbolError(f"2-adic component {part!r} needs an oddity or II")
    if sub == "II":
        return JordanComponent(2, e, rank, sign, type_ii=True)
    if not re.fullmatch(r"[+-]?\d+", sub):
        raise SymbolError(f"bad oddity {sub!r} in {part!r}")
    return JordanComponent(2, e, rank, sign, oddity=int(sub))


def _prime_power(n: int):
    ps = prime_factors(n)
    if len(ps) != 1:
        return None, 0
    p, e = ps[0], 0
    while n > 1:
        n //= p
        e += 1
    return p, e


# --------------------------------------------------------------------------
# Jordan decomposition


def _unit_mod(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator, -1, m) % m


def _legendre(x: Fraction, p: int) -> int:
    r = pow(_unit_mod(x, p), (p - 1) // 2, p)
    return 1 if r == 1 else -1


def _sign2(u: int) -> int:
    return 1 if u % 8 in (1, 7) else -1


def jordan_decomposition(gram: Sequence[Sequence], p: int) -> list[tuple[int, int, Fraction]]:
    """Split a ``p``-adically integral symmetric matrix into Jordan blocks.

    Returns ``(exponent, size, unit)`` triples: ``size`` 1 gives a block
    ``<p^e * unit>``, size 2 (only for ``p = 2``) a type II block whose
    determinant is ``4^e * unit``.
    """
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    active = list(range(n))
    blocks = []

    def vp(x):
        return None if x == 0 else valuation(x, p)

    def add_to(i, j, f):  # e_i += f e_j
        for row in a:
            row[i] += f * row[j]
        a[i] = [x + f * y for x, y in zip(a[i], a[j])]

    while active:
        vmin, where = None, None
        for i in active:
            for j in active:
                v = vp(a[i][j])
                if v is not None and (vmin is None or v < vmin):
                    vmin, where = v, (i, j)
        if vmin is None:
            raise SymbolError("degenerate form in Jordan decomposition")
        diag = next((i for i in active if vp(a[i][i]) == vmin), None)
        if diag is None and p != 2:
            i, j = where
            add_to(i, j, Fraction(1))
            diag = i
        if diag is not None:
            i = diag
            for k in active:
                if k != i and a[k][i]:
                    add_to(k, i, -a[k][i] / a[i][i])
            active.remove(i)
            blocks.append((vmin, 1, a[i][i] / Fraction(p) ** vmin))
            continue
        i, j = where
        det = a[i][i] * a[j][j] - a[i][j] * a[j][i]
        for k in active:
            if k in (i, j):
                continue
            ri, rj = a[k][i], a[k][j]
            if not (ri or rj):
                continue
            ci = (a[j][j] * ri - a[i][j] * rj) / det
            cj = (a[i][i] * rj - a[j][i] * ri) / det
            add_to(k, i, -ci)
            add_to(k, j, -cj)
        active.remove(i)
        active.remove(j)
        blocks.append((vmin, 2, det / Fraction(4) ** vmin))
    return blocks


def _components_from_blocks(blocks, p: int) -> list[JordanComponent]:
    out = []
    for e in sorted({b[0] for b in blocks}):
        level = [b for b in blocks if b[0] == e]
        rank = sum(b[1] for b in level)
        if p != 2:
            sign = 1
            for _, _, u in level:
                sign *= _legendre(u, p)
            out.append(JordanComponent(p, e, rank, sign))
            continue
        sign, odd, type_ii = 1, 0, True
        for _, size, u in level:
            unit = _unit_mod(u, 8)
            sign *= _sign2(unit)
            if size == 1:
                type_ii = False
                odd += unit
        out.append(JordanComponent(2, e, rank, sign, type_ii, 0 if type_ii else odd))
    return out


def raw_symbol(q: FiniteQuadraticForm) -> GenusSymbol:
    """Jordan symbol of ``q`` before canonicalisation."""
    comps: list[JordanComponent] = []
    for p in prime_factors(q.order):
        qp = p_primary_part(q, p)
        lift = linalg.rational_inverse(qp.gram)
        comps.extend(_components_from_blocks(jordan_decomposition(lift, p), p))
    return GenusSymbol(tuple(comps))


def genus_symbol(q: FiniteQuadraticForm) -> GenusSymbol:
    return canonical(raw_symbol(q))


# --------------------------------------------------------------------------
# canonical representatives


def canonical(sym: GenusSymbol) -> GenusSymbol:
    comps = [c for c in sym.components if c.prime != 2]
    comps.extend(_canonical_2(sym.at(2)))
    return GenusSymbol(tuple(comps))


def canonical_equal(a: GenusSymbol, b: GenusSymbol) -> bool:
    return canonical(a) == canonical(b)


def _canonical_2(comps: Sequence[JordanComponent]) -> list[JordanComponent]:
    comps = [c for c in comps if c.exponent > 0]
    if not comps:
        return []
    top = max(c.exponent for c in comps)
    size = top + 2  # level 0 (the added plane) .. top, plus an empty sentinel
    rank = [0] * size
    odd_level = [False] * size
    sign = [1] * size
    rank[0] = 2
    for c in comps:
        rank[c.exponent] = c.rank
        odd_level[c.exponent] = not c.type_ii
        sign[c.exponent] = c.sign

    # compartments: maximal runs of consecutive odd levels
    comp_of = [None] * size
    starts: list[int] = []
    for e in range(size):
        if odd_level[e]:
            if e == 0 or not odd_level[e - 1]:
                starts.append(e)
            comp_of[e] = len(starts) - 1
    oddity = [0] * len(starts)
    for c in comps:
        if not c.type_ii:
            oddity[comp_of[c.exponent]] += c.oddity

    # trains: levels linked when one of two neighbours is odd
    trains, cur = [], [0]
    for e in range(1, size):
        if odd_level[e - 1] or odd_level[e]:
            cur.append(e)
        else:
            trains.append(cur)
            cur = [e]
    trains.append(cur)

    for train in trains:
        present = [e for e in train if rank[e]]
        if not present:
            continue
        lead = present[0]
        for e in present[1:]:
            if sign[e] < 0:
                sign[e] = 1
                sign[lead] *= -1
                for step in range(lead, e):
                    cid = comp_of[step] if odd_level[step] else comp_of[step + 1]
                    oddity[cid] += 4

    out = []
    for e in range(1, size):
        if not rank[e]:
            continue
        out.append((e, rank[e], sign[e], not odd_level[e]))
    return _distribute_oddity(out, starts, comp_of, oddity)


def _distribute_oddity(levels, starts, comp_of, oddity):
    """Spread each compartment's total oddity over its components.

    All components but the last get the oddity of ``<1,...,1,u>`` with
    ``u`` in {1, 3} fixing the sign; the last takes the remainder.
    """
    out = []
    members: dict[int, list] = {}
    for e, r, s, t2 in levels:
        if not t2:
            members.setdefault(comp_of[e], []).append(e)
    for e, r, s, t2 in levels:
        if t2:
            out.append(JordanComponent(2, e, r, s, True))
            continue
        cid = comp_of[e]
        if e != members[cid][-1]:
            odd = r + (0 if s > 0 else 2)
            oddity[cid] -= odd
        else:
            odd = oddity[cid]
        out.append(JordanComponent(2, e, r, s, False, odd))
    return out


# --------------------------------------------------------------------------
# symbols back to forms


def _units_for(rank: int, sign: int, oddity: int) -> Optional[list[int]]:
    free = min(rank, 3)
    for tail in itertools.product((1, 3, 5, 7), repeat=free):
        units = [1] * (rank - free) + list(tail)
        s = 1
        for u in units:
            s *= _sign2(u)
        if s == sign and sum(units) % 8 == oddity % 8:
            return units
    return None


def _oddity_choices(comps: Sequence[JordanComponent], total: int) -> Optional[list[int]]:
    """Per-component oddities summing to ``total`` that each component can carry."""
    options = [[o for o in range(8) if _units_for(c.rank, c.sign, o)] for c in comps]
    for pick in itertools.product(*options):
        if sum(pick) % 8 == total % 8:
            return list(pick)
    return None


def _two_adic_blocks(comps: Sequence[JordanComponent]) -> list:
    blocks = []
    run: list[JordanComponent] = []

    def flush():
        # only the total oddity of a compartment is an invariant
        if not run:
            return
        odds = _oddity_choices(run, sum(c.oddity for c in run))
        if odds is None:
            raise SymbolError(f"compartment {','.join(map(str, run))} is not realisable")
        for c, o in zip(run, odds):
            blocks.extend([[c.level * u]] for u in _units_for(c.rank, c.sign, o))
        run.clear()

    for c in comps:
        if c.type_ii:
            flush()
            scale = c.level
            plane = [[0, scale], [scale, 0]]
            last = plane if c.sign > 0 else [[2 * scale, scale], [scale, 2 * scale]]
            blocks.extend([plane] * (c.rank // 2 - 1) + [last])
        else:
            if run and run[-1].exponent != c.exponent - 1:
                flush()
            run.append(c)
    flush()
    return blocks


def _walk_variants(comps: Sequence[JordanComponent]):
    """Symbols with the same canonical form, original signs first.

    A canonical symbol may carry a sign that was walked into the (absent)
    unimodular constituent, so it need not be literally diagonalisable.
    """
    target = _canonical_2(comps)
    odd = [c for c in comps if not c.type_ii]
    for signs in itertools.product((1, -1), repeat=len(comps)):
        flipped = [JordanComponent(2, c.exponent, c.rank, c.sign * s, c.type_ii, c.oddity)
                   for c, s in zip(comps, signs)]
        for shift in range(0, 8, 4):
            if shift and not odd:
                break
            out = list(flipped)
            if shift:
                i = out.index(next(c for c in out if not c.type_ii))
                c = out[i]
                out[i] = JordanComponent(2, c.exponent, c.rank, c.sign, False, c.oddity + shift)
            if _canonical_2(out) == target:
                yield out


def form_from_symbol(sym: GenusSymbol) -> FiniteQuadraticForm:
    """A finite quadratic form with the given symbol (via a diagonal lift)."""
    parts = []
    for p in sym.primes:
        if p == 2:
            blocks = None
            for variant in _walk_variants(sym.at(2)):
                try:
                    blocks = _two_adic_blocks(variant)
                    break
                except SymbolError:
                    continue
            if blocks is None:
                raise SymbolError(f"2-adic part of {sym} is not realisable")
        else:
            blocks = []
            for c in sym.at(p):
                # <2 p^k u>: the sign is the Legendre symbol of the product of the 2u
                w = next(w for w in range(1, p)
                         if _legendre(Fraction(2 ** c.rank * w), p) == c.sign)
                units = [1] * (c.rank - 1) + [w]
                blocks.extend([[2 * c.level * u]] for u in units)
        lat = Lattice(linalg.block_diagonal(blocks))
        parts.append(p_primary_part(discriminant_form(lat), p))
    if not parts:
        return TRIVIAL
    return direct_sum_q(*parts)


def is_isomorphic(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm) -> bool:
    from .quadform import gauss_signature, GAUSS_BOUND

    if q1.orders != q2.orders:
        return False
    if q1.order <= GAUSS_BOUND and gauss_signature(q1) != gauss_signature(q2):
        return False
    return genus_symbol(q1) == genus_symbol(q2)


__all__ = [
    "FormError",
    "GenusSymbol",
    "JordanComponent",
    "SymbolError",
    "canonical",
    "canonical_equal",
    "form_from_symbol",
    "genus_symbol",
    "is_isomorphic",
    "jordan_decomposition",
    "parse_genus_symbol",
    "raw_symbol",
]
