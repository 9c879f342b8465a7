"""
Conjectural syzygies of the GL-invariant ideals I_lam.

Each augmented pattern D in A(lam; n) contributes a copy of the simple module
L_lam(D), shifted so that its Hilbert series starts in column d(D) of row
|lam| + b(D) of the Betti table. The bullet-free patterns give the first
linear strand, which is a theorem; rows past it are conjectural.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, List, NamedTuple, Tuple

import pandas as pd
import sympy as sp

from characters import (
    GLCharacter,
    GradedSeries,
    K0Class,
    T,
    check_shape,
    ideal_hilbert,
    simple_character,
    simple_hilbert,
)
from dyck_paths import lambda_of, sizes
from errors import BadArgs, ConsistencyError, TooManyRows
from partitions import Partition, corners, format_partition, parse_partition, rectangle, schur_dimension
from pattern_enumeration import enumerate_A, enumerate_A0

logger = logging.getLogger(__name__)

Q = sp.symbols("q")


class CheckReport(NamedTuple):
    """Outcome of a consistency check; `details` lists every mismatch."""
    ok: bool
    details: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

# ---------------------------
# Betti polynomial
# ---------------------------

@dataclass
class BettiPolynomial:
    """(mu, d) -> number of patterns with lam(D) = mu and d(D) = d."""
    terms: Dict[Tuple[Partition, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: int(v) for k, v in self.terms.items() if v}

    def sorted_terms(self) -> List[Tuple[Partition, int, int]]:
        keys = sorted(self.terms, key=lambda k: (k[1], k[0].size, k[0].parts))
        return [(mu, d, self.terms[(mu, d)]) for mu, d in keys]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for mu, d, c in self.sorted_terms():
            coeff = "" if c == 1 else f"{c}*"
            out.append(f"{coeff}L({format_partition(mu)})*w^{d}")
        return " + ".join(out)

    def to_json(self) -> List[dict]:
        return [{"mu": format_partition(mu), "d": d, "mult": c} for mu, d, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: List[dict]) -> "BettiPolynomial":
        return cls({(parse_partition(t["mu"]), int(t["d"])): int(t["mult"]) for t in data})


def betti_polynomial(lam: Partition, m: int, n: int) -> BettiPolynomial:
    """Sum over A(lam; n) of L_lam(D) * w^d(D), aggregated by (lam(D), d(D))."""
    check_shape(lam, m, n)
    terms = defaultdict(int)
    for pattern in enumerate_A(lam, n):
        mu, _ = lambda_of(lam, pattern.paths)
        d, _, _ = sizes(pattern)
        terms[(mu, d)] += 1
    return BettiPolynomial(terms)


def strand_classes(lam: Partition, m: int, n: int, b: int) -> K0Class:
    """Simple classes of the patterns with exactly b bullets."""
    check_shape(lam, m, n)
    if b < 0:
        raise BadArgs(f"bullet count must be nonnegative, got {b}")
    counts = defaultdict(int)
    for pattern in enumerate_A(lam, n):
        if len(pattern.bullets) == b:
            mu, _ = lambda_of(lam, pattern.paths)
            counts[mu] += 1
    return K0Class(counts)


def first_strand(lam: Partition, m: int, n: int) -> K0Class:
    check_shape(lam, m, n)
    counts = defaultdict(int)
    for pattern in enumerate_A0(lam, n):
        mu, _ = lambda_of(lam, pattern.paths)
        counts[mu] += 1
    return K0Class(counts)

# ---------------------------
# Betti tables
# ---------------------------

@dataclass(eq=False)
class BettiTable:
    """
    Betti numbers beta_{i, i+r}: frame rows are r, columns are i.
    conjectural is False when only the first linear strand contributes.
    """
    frame: pd.DataFrame
    lam: Partition
    m: int
    n: int
    conjectural: bool = True

    def entry(self, i: int, r: int) -> int:
        if r not in self.frame.index or i not in self.frame.columns:
            return 0
        return int(self.frame.at[r, i])

    def row(self, r: int) -> List[int]:
        return [int(v) for v in self.frame.loc[r].tolist()]

    def rows(self) -> List[int]:
        return [int(r) for r in self.frame.index]

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        """(i, r) -> beta_{i, i+r} for every nonzero entry."""
        out = {}
        for r in self.frame.index:
            for i in self.frame.columns:
                v = int(self.frame.at[r, i])
                if v:
                    out[(int(i), int(r))] = v
        return out

    def render(self, totals: bool = False) -> str:
        """Macaulay2-style layout: header of column indices, rows labelled 'r:', dots for zeros."""
        cols = [int(c) for c in self.frame.columns]
        body = [(f"{r}:", ["." if v == 0 else str(v) for v in self.row(r)]) for r in self.rows()]
        if totals:
            body.insert(0, ("total:", [str(v) for v in betti_totals(self)]))
        label_width = max(len(label) for label, _ in body)
        widths = [max([len(str(c))] + [len(cells[k]) for _, cells in body]) for k, c in enumerate(cols)]
        lines = [" " * label_width + "".join(" " + str(c).rjust(w) for c, w in zip(cols, widths))]
        for label, cells in body:
            lines.append(label.rjust(label_width) + "".join(" " + v.rjust(w) for v, w in zip(cells, widths)))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "lambda": format_partition(self.lam),
            "m": self.m,
            "n": self.n,
            "conjectural": self.conjectural,
            "rows": {str(r): self.row(r) for r in self.rows()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "BettiTable":
        rows = {int(r): values for r, values in data["rows"].items()}
        return cls(_frame_from_rows(rows), parse_partition(data["lambda"]),
                   int(data["m"]), int(data["n"]), bool(data.get("conjectural", True)))


def _frame_from_rows(rows: Dict[int, List[int]]) -> pd.DataFrame:
    width = max((len(v) for v in rows.values()), default=0)
    index = sorted(rows)
    data = [list(rows[r]) + [0] * (width - len(rows[r])) for r in index]
    return pd.DataFrame(data, index=index, columns=list(range(width)), dtype="int64")


def _frame_from_entries(entries: Dict[Tuple[int, int], int], first_row: int) -> pd.DataFrame:
    """(i, r) entries -> frame spanning rows first_row..max r, columns 0..max i."""
    live = {k: v for k, v in entries.items() if v}
    if not live:
        return pd.DataFrame([[0]], index=[first_row], columns=[0], dtype="int64")
    last_row = max(r for _, r in live)
    last_col = max(i for i, _ in live)
    frame = pd.DataFrame(0, index=list(range(first_row, last_row + 1)),
                         columns=list(range(last_col + 1)), dtype="int64")
    for (i, r), v in live.items():
        frame.at[r, i] += v
    return frame


def _hilbert_job(args) -> Tuple[Partition, GradedSeries]:
    mu, m, n = args
    return mu, simple_hilbert(mu, m, n)


def _series_for(mus, m: int, n: int, jobs: int) -> Dict[Partition, GradedSeries]:
    work = [(mu, m, n) for mu in sorted(set(mus))]
    if jobs > 1 and len(work) > 1:
        logger.info("computing %d Hilbert series on %d processes", len(work), jobs)
        with Pool(jobs) as pool:
            return dict(pool.map(_hilbert_job, work))
    return dict(_hilbert_job(w) for w in work)


def betti_table(lam: Partition, m: int, n: int, jobs: int = 1) -> BettiTable:
    """
    Place every term (mu, d) of the Betti polynomial in row |lam| + b,
    b = |mu| - |lam| - d, with beta_{i, i+r} += mult * [t^(i+r)] HS(L_mu).
    Args:
        jobs: worker processes for the per-term Hilbert series
    """
    poly = betti_polynomial(lam, m, n)
    series = _series_for([mu for mu, _ in poly.terms], m, n, jobs)
    entries: Dict[Tuple[int, int], int] = defaultdict(int)
    conjectural = False
    for (mu, d), mult in poly.terms.items():
        b = mu.size - lam.size - d
        conjectural = conjectural or b > 0
        r = lam.size + b
        for degree, coeff in series[mu].coefficients.items():
            entries[(degree - r, r)] += mult * coeff
    if any(i < 0 for i, _ in entries):
        raise ConsistencyError(f"a strand of {format_partition(lam)} starts before column 0")
    return BettiTable(_frame_from_entries(entries, lam.size), lam, m, n, conjectural)


def equivariant_betti(lam: Partition, m: int, n: int) -> Dict[Tuple[int, int], GLCharacter]:
    """(row r, column i) -> even-part character of the syzygies in that slot."""
    poly = betti_polynomial(lam, m, n)
    out: Dict[Tuple[int, int], GLCharacter] = {}
    for (mu, d), mult in poly.terms.items():
        r = lam.size + (mu.size - lam.size - d)
        char = simple_character(mu, m, n)
        for degree in sorted({a.size for a, _ in char.terms}):
            key = (r, degree - r)
            piece = char.degree_slice(degree).scaled(mult)
            out[key] = out[key] + piece if key in out else piece
    return out


def betti_totals(table: BettiTable) -> List[int]:
    """Column sums over all rows."""
    return [int(v) for v in table.frame.sum(axis=0).tolist()]

# ---------------------------
# Regularity
# ---------------------------

def regularity_enum(lam: Partition, n: int) -> int:
    """|lam| + the largest bullet count over A(lam; n)."""
    return lam.size + max(len(p.bullets) for p in enumerate_A(lam, n))


def regularity_closed(lam: Partition, n: int) -> int:
    """
    Max over corners p of n * lam_p + (p - 2)(n - p), reading lam_{n+1} as -1
    so that row n always counts as a corner.
    """
    if len(lam) > n:
        raise TooManyRows(f"{format_partition(lam)} has more than {n} parts")
    rows = [c.y for c in corners(lam) if c.y < n]
    rows.append(n)
    return max(n * lam.part(p) + (p - 2) * (n - p) for p in rows)

# ---------------------------
# Rectangles
# ---------------------------

def gauss_binomial(top: int, bottom: int) -> sp.Poly:
    """Gaussian binomial coefficient [top choose bottom]_q as an integer polynomial in q."""
    if bottom < 0 or top < 0 or bottom > top:
        raise BadArgs(f"need 0 <= bottom <= top, got top={top}, bottom={bottom}")
    numerator = sp.Poly(1, Q, domain="ZZ")
    denominator = sp.Poly(1, Q, domain="ZZ")
    for i in range(bottom):
        numerator *= sp.Poly(1 - Q ** (top - i), Q, domain="ZZ")
        denominator *= sp.Poly(1 - Q ** (i + 1), Q, domain="ZZ")
    return numerator.exquo(denominator)


def rectangular_betti(a: int, b: int, m: int, n: int) -> BettiPolynomial:
    """
    Closed form for the a x b rectangle:
        sum over q = 0..n-a of L_((a+q) x (b+q)) * w^(q^2+2q) * [q+min(a,b)-1 choose q]_(w^2)
    """
    if not (1 <= a <= n and b >= 1):
        raise BadArgs(f"need 1 <= a <= n and b >= 1, got a={a}, b={b}, n={n}")
    check_shape(rectangle(a, b), m, n)
    terms = defaultdict(int)
    for q in range(0, n - a + 1):
        gauss = gauss_binomial(q + min(a, b) - 1, q)
        for (k,), c in gauss.terms():
            terms[(rectangle(a + q, b + q), q * q + 2 * q + 2 * k)] += int(c)
    return BettiPolynomial(terms)

# ---------------------------
# Consistency checks
# ---------------------------

def hs_reconstruction_check(lam: Partition, m: int, n: int) -> CheckReport:
    """Rebuild the table from the strand classes alone and diff it against betti_table."""
    table = betti_table(lam, m, n)
    rebuilt: Dict[Tuple[int, int], int] = defaultdict(int)
    max_b = max(len(p.bullets) for p in enumerate_A(lam, n))
    for b in range(max_b + 1):
        r = lam.size + b
        for mu, c in strand_classes(lam, m, n, b).terms.items():
            for degree, coeff in simple_hilbert(mu, m, n).coefficients.items():
                rebuilt[(degree - r, r)] += c * coeff
    rebuilt = {k: v for k, v in rebuilt.items() if v}
    expected = table.nonzero()
    details = []
    for key in sorted(set(rebuilt) | set(expected), key=lambda k: (k[1], k[0])):
        if rebuilt.get(key, 0) != expected.get(key, 0):
            i, r = key
            details.append(f"row {r} column {i}: strands give {rebuilt.get(key, 0)}, table has {expected.get(key, 0)}")
    return CheckReport(not details, tuple(details))


def euler_check(lam: Partition, m: int, n: int) -> CheckReport:
    """
    sum (-1)^i beta_{i,j} t^j against HS(I_lam) * (1 - t)^(mn), compared
    through mn degrees past the last table entry.
    """
    table = betti_table(lam, m, n)
    alternating: Dict[int, int] = defaultdict(int)
    for (i, r), v in table.nonzero().items():
        alternating[i + r] += (-1) ** i * v
    top = max(alternating, default=lam.size) + m * n
    ideal = ideal_hilbert(lam, m, n, top).as_poly()
    product = GradedSeries.from_poly(ideal * sp.Poly((1 - T) ** (m * n), T, domain="ZZ")).truncated(top)
    lhs = GradedSeries(alternating)
    details = []
    for degree in range(0, top + 1):
        if lhs.coefficient(degree) != product.coefficient(degree):
            details.append(f"t^{degree}: table gives {lhs.coefficient(degree)}, ideal gives {product.coefficient(degree)}")
    return CheckReport(not details, tuple(details))


def generator_check(lam: Partition, m: int, n: int) -> bool:
    """beta_{0,|lam|} equals dim S_lam C^m * dim S_lam C^n."""
    table = betti_table(lam, m, n)
    return table.entry(0, lam.size) == schur_dimension(lam, m) * schur_dimension(lam, n)
