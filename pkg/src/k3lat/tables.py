"""The 53 lattice polarisations with automorphic discriminant and their checks.

Each row gives ``S^mir``, ``m``, the weight ``k`` of the automorphic form, the
polarisation lattice ``S`` and its discriminant form as a genus symbol.  The
transcendental lattice is ``T = U(m) + S^mir``; the moduli space has
dimension ``n = rk T - 2``.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import dsl
from .embeddings import (
    Uniqueness,
    as_triple,
    existence_check,
    nikulin_unique,
)
from .genus import canonical_equal, genus_symbol, is_isomorphic, parse_genus_symbol
from .lattice import Lattice, Signature, direct_sum, hyperbolic_plane, rescale
from .quadform import negate

K3_RANK = 22
K3_SIGNATURE = Signature(3, 19)
DIVISOR_MULTIPLICITY = 1

# table, s_mir, m, weight, s, q_s
_ROWS = """
1 | U+A1      | 1 | 35  | U+E8+E7              | 2_1^{+1}
1 | U+2A1     | 1 | 34  | U+E8+D6              | 2_2^{+2}
1 | U+A2      | 1 | 45  | U+E8+E6              | 3^{-1}
1 | U+3A1     | 1 | 33  | U+E7+D6              | 2_3^{+3}
1 | U+A3      | 1 | 54  | U+E8+D5              | 4_3^{-1}
1 | U+4A1     | 1 | 32  | U+D6+D6              | 2_4^{+4}
1 | U+2A2     | 1 | 42  | U+E6+E6              | 3^{+2}
1 | U+A4      | 1 | 62  | U+E8+A4              | 5^{+1}
1 | U+D4      | 1 | 72  | U+E8+D4              | 2_{II}^{-2}
1 | U+D4      | 2 | 40  | U(2)+E8+D4           | 2_{II}^{-4}
1 | U+A5      | 1 | 69  | U+E8+A2+A1           | 2_{-1}^{+1},3^{+1}
1 | U+D5      | 1 | 88  | U+E8+A3              | 4_5^{-1}
1 | U+3A2     | 1 | 39  | U+E6+2A2             | 3^{-3}
1 | U+2A3     | 1 | 48  | U+2D5                | 4_6^{+2}
1 | U+A6      | 1 | 75  | U+E8+[[-2,1],[1,-4]] | 7^{-1}
1 | U+D6      | 1 | 102 | U+E8+2A1             | 2_{-2}^{+2}
1 | U+E6      | 1 | 120 | U+E8+A2              | 3^{+1}
1 | U+A7      | 1 | 80  | U+E8+<-8>            | 8_{-1}^{+1}
1 | U+D7      | 1 | 114 | U+E8+<-4>            | 4_{-1}^{+1}
1 | U+E7      | 1 | 165 | U+E8+A1              | 2_{-1}^{+1}
1 | U+2D4     | 1 | 60  | U+2D4                | 2_{II}^{+4}
1 | U+D8      | 1 | 124 | U+D8                 | 2_{II}^{+2}
1 | U+E8      | 1 | 252 | U+E8                 | 0
1 | U(2)+2D4  | 1 | 28  | U(2)+2D4             | 2_{II}^{+6}
1 | U+2E8     | 1 | 132 | U                    | 0
2 | U         | 1 | 12  | U+E8+E8              | 0
2 | U+A1(2)   | 1 | 12  | U+E8+D7              | 4_1^{+1}
2 | U+A1(3)   | 1 | 12  | U+E8+E6+A1           | 2_{-1}^{+1},3^{-1}
2 | U+A1(4)   | 1 | 12  | U+E8+A7              | 8_1^{+1}
2 | U+2<-4>   | 1 | 12  | U+D7+D7              | 4_2^{+2}
2 | U+A2(2)   | 1 | 12  | U+E8+D4+A2           | 2_{II}^{-2},3^{+1}
2 | U+A2(3)   | 1 | 12  | U+E8+perp(A2(3); E8) | 3^{-1},9^{-1}
2 | U+A3(2)   | 1 | 12  | U+E8+perp(A3(2); E8) | 2_{II}^{-2},8_3^{-1}
2 | U+D4(2)   | 1 | 12  | U+E8+D4(2)           | 2_{II}^{-2},4_{II}^{-2}
2 | U+E8(2)   | 1 | 12  | U+E8(2)              | 2_{II}^{+8}
3 | <2>+A1    | 2 | 12  | U(2)+E8+E7+A1        | 2_0^{+4}
3 | <2>+2A1   | 2 | 11  | U(2)+E7+E7+A1        | 2_1^{+5}
3 | <2>+3A1   | 2 | 10  | U(2)+E7+D6+A1        | 2_2^{+6}
3 | <2>+4A1   | 2 | 9   | U(2)+D6+D6+A1        | 2_3^{+7}
3 | <2>+5A1   | 2 | 8   | U+D6+6A1             | 2_4^{+8}
3 | <2>+6A1   | 2 | 7   | U(2)+D6+5A1          | 2_5^{+9}
3 | <2>+7A1   | 2 | 6   | U(2)+D4+6A1          | 2_6^{+10}
3 | <2>+8A1   | 2 | 5   | U(2)+E8(2)+A1        | 2_7^{+11}
4 | U(2)+D4   | 1 | 40  | U(2)+E8+D4           | 2_{II}^{-4}
4 | U(2)+D4   | 2 | 24  | U+3D4                | 2_{II}^{-6}
4 | U(4)+D4   | 4 | 6   | U(4)+perp(U(4)+D4; U+2E8)       | 2_{II}^{-2},4_{II}^{+4}
5 | U(4)+A1   | 4 | 5   | U(4)+perp(U(4); U+E8)+E7        | 2_1^{+1},4_{II}^{+4}
5 | U(4)+2A1  | 4 | 4   | U(4)+perp(U(4); U+E8)+D6        | 2_2^{+2},4_{II}^{+4}
5 | U(4)+3A1  | 4 | 3   | U(4)+perp(U(4); U+E8)+D4+A1     | 2_3^{+3},4_{II}^{+4}
5 | U(4)+4A1  | 4 | 2   | U(4)+perp(U(4); U+E8)+4A1       | 2_4^{+4},4_{II}^{+4}
6 | U(3)+A2   | 3 | 9   | U(3)+perp(U(3); U+E8)+E6        | 3^{-5}
6 | U(3)+2A2  | 3 | 6   | U(3)+perp(U(3); U+E8)+2A2       | 3^{+6}
6 | U(3)+3A2  | 3 | 3   | U(3)+perp(U(3)+A2; U+E8)+2A2    | 3^{-7}
"""

# sha256 of the normalised row text above; guards against accidental edits
ROWS_SHA256 = "cfb4a7e294f7b432b4a862becfd79942e4066856d68a041890f10335bffb322e"

TABLE_SIZES = {1: 25, 2: 10, 3: 8, 4: 3, 5: 4, 6: 3}

# rows whose moduli spaces are asserted to be uniruled (or of dimension <= 2)
UNIRULED_ROWS = frozenset(
    [(1, r) for r in range(1, 26)]
    + [(2, r) for r in range(1, 11)]
    + [(3, r) for r in range(1, 6)]
    + [(4, 1), (4, 2), (5, 1), (6, 1)]
)


@dataclass(frozen=True)
class TableRow:
    table: int
    row: int
    s_mir: str
    m: int
    weight: int
    s: str
    q_s: str

    @property
    def key(self) -> tuple[int, int]:
        return (self.table, self.row)


def _parse_rows(text: str) -> list[TableRow]:
    rows, counters = [], {}
    for line in text.strip().splitlines():
        table, s_mir, m, weight, s, q_s = (f.strip() for f in line.split("|"))
        t = int(table)
        counters[t] = counters.get(t, 0) + 1
        rows.append(TableRow(t, counters[t], s_mir, int(m), int(weight), s, q_s))
    return rows


def rows_digest(rows: Iterable[TableRow]) -> str:
    text = "\n".join(
        f"{r.table}|{r.row}|{r.s_mir}|{r.m}|{r.weight}|{r.s}|{r.q_s}" for r in rows
    )
    return hashlib.sha256(text.encode()).hexdigest()


def builtin_tables() -> list[TableRow]:
    return _parse_rows(_ROWS)


# --------------------------------------------------------------------------
# classification


class Classification(str, enum.Enum):
    UNIRULED = "Uniruled"
    KODAIRA_ZERO_CANDIDATE = "KodairaZeroCandidate"
    LOW_DIM = "LowDim"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def classify_moduli(weight: int, n: int, mult: int = DIVISOR_MULTIPLICITY) -> Classification:
    """Compare the weight ``k`` of the form with ``mult * n``."""
    if weight < 1 or n < 1 or mult < 1:
        raise ValueError("weight, dimension and multiplicity must be positive")
    if n <= 2:
        return Classification.LOW_DIM
    if weight > mult * n:
        return Classification.UNIRULED
    if weight == mult * n:
        return Classification.KODAIRA_ZERO_CANDIDATE
    return Classification.UNKNOWN


# --------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    row: TableRow
    rank_s: int
    rank_t: int
    rank_sum: bool
    signature_sum: bool
    q_s_matches_table: bool
    q_t_is_minus_q_s: bool
    milgram_s: bool
    milgram_t: bool
    existence: str
    uniqueness_s: Uniqueness
    uniqueness_t: Uniqueness
    n: int
    classification: Classification
    computed_q_s: str
    errors: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Checks (a)-(e): ranks, signatures, table symbol, q_T = -q_S, Milgram."""
        return (self.rank_sum and self.signature_sum and self.q_s_matches_table
                and self.q_t_is_minus_q_s and self.milgram_s and self.milgram_t
                and not self.errors)

    def checks(self) -> dict:
        return {
            "rank_sum": self.rank_sum,
            "signature_sum": self.signature_sum,
            "q_s_matches_table": self.q_s_matches_table,
            "q_t_is_minus_q_s": self.q_t_is_minus_q_s,
            "milgram_s": self.milgram_s,
            "milgram_t": self.milgram_t,
            "existence": self.existence,
            "uniqueness_s": str(self.uniqueness_s),
            "uniqueness_t": str(self.uniqueness_t),
            "computed_q_s": self.computed_q_s,
        }


def transcendental(row: TableRow) -> Lattice:
    s_mir = dsl.lattice(row.s_mir)
    if not isinstance(s_mir, Lattice):
        raise ValueError(f"S^mir of row {row.key} must be a concrete lattice")
    u = rescale(hyperbolic_plane(), row.m) if row.m != 1 else hyperbolic_plane()
    return direct_sum([u, s_mir])


def verify_row(row: TableRow, mult: int = DIVISOR_MULTIPLICITY) -> VerificationReport:
    t_lat = transcendental(row)
    gs = as_triple(dsl.lattice(row.s))
    gt = as_triple(t_lat)
    n = gt.rank - 2
    computed = genus_symbol(gs.q)
    expected = parse_genus_symbol(row.q_s)
    ex_s, ex_t = existence_check(gs), existence_check(gt)
    existence = "Consistent" if ex_s.consistent and ex_t.consistent else f"S: {ex_s}; T: {ex_t}"
    return VerificationReport(
        row=row,
        rank_s=gs.rank,
        rank_t=gt.rank,
        rank_sum=gs.rank + gt.rank == K3_RANK,
        signature_sum=(gs.signature + gt.signature == K3_SIGNATURE
                       and gt.signature == Signature(2, gt.rank - 2)),
        q_s_matches_table=canonical_equal(computed, expected),
        q_t_is_minus_q_s=is_isomorphic(gt.q, negate(gs.q)),
        milgram_s=gs.milgram_ok,
        milgram_t=gt.milgram_ok,
        existence=existence,
        uniqueness_s=nikulin_unique(gs),
        uniqueness_t=nikulin_unique(gt),
        n=n,
        classification=classify_moduli(row.weight, n, mult),
        computed_q_s=str(computed),
    )


def verify_tables(rows: Optional[list[TableRow]] = None,
                  mult: int = DIVISOR_MULTIPLICITY) -> list[VerificationReport]:
    rows = builtin_tables() if rows is None else rows
    return [verify_row(r, mult) for r in rows]


@dataclass(frozen=True)
class Theorem34Report:
    computed: frozenset
    expected: frozenset
    kodaira_zero: dict

    @property
    def membership_ok(self) -> bool:
        return self.computed == self.expected

    @property
    def one_kodaira_zero_per_table(self) -> bool:
        return all(len(self.kodaira_zero.get(t, [])) == 1 for t in (3, 4, 5, 6))

    @property
    def ok(self) -> bool:
        return self.membership_ok and self.one_kodaira_zero_per_table


def theorem34_check(reports: Optional[list[VerificationReport]] = None) -> Theorem34Report:
    reports = verify_tables() if reports is None else reports
    good = {Classification.UNIRULED, Classification.LOW_DIM}
    computed = frozenset(r.row.key for r in reports if r.classification in good)
    kz: dict = {}
    for r in reports:
        if r.classification is Classification.KODAIRA_ZERO_CANDIDATE:
            kz.setdefault(r.row.table, []).append(r.row.row)
    return Theorem34Report(computed, UNIRULED_ROWS, kz)


__all__ = [
    "Classification",
    "UNIRULED_ROWS",
    "TableRow",
    "Theorem34Report",
    "VerificationReport",
    "builtin_tables",
    "classify_moduli",
    "rows_digest",
    "theorem34_check",
    "transcendental",
    "verify_row",
    "verify_tables",
]
