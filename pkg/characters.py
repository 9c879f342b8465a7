"""
Characters and Hilbert series of gl(m|n) Kac and simple modules.

A character is recorded by its even-part constituents S_alpha W0 (x) S_beta W1,
keyed by the pair (alpha, beta); its grading is |alpha|. Kac modules are free
over the exterior algebra, so their characters come from the Cauchy
decomposition of the exterior powers and the Littlewood-Richardson rule.
Simple modules are obtained by inverting the composition-series sum

    [K_lam] = sum over D in K(lam; n) of [L_lam(D)]

one degree window at a time: L_mu lives in degrees |mu| .. |mu| + mn, so only
finitely many simples matter below that cap.
"""

import hashlib
import json
import logging
import struct
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import sympy as sp

from dyck_paths import lambda_of
from errors import BadArgs, BadShape, DyckresError, NegativeMultiplicity, StorageError, TooManyRows
from partitions import (
    Partition,
    conjugate,
    contains,
    format_partition,
    parse_partition,
    partitions_of,
    schur_dimension,
)
from pattern_enumeration import enumerate_K

logger = logging.getLogger(__name__)

T = sp.symbols("t")

# ---------------------------
# Value types
# ---------------------------

@dataclass
class GradedSeries:
    """Sparse polynomial in t: degree -> coefficient, zeros dropped."""
    coefficients: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.coefficients = {int(d): int(c) for d, c in self.coefficients.items() if c}

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        out = defaultdict(int, self.coefficients)
        for d, c in other.coefficients.items():
            out[d] += c
        return GradedSeries(out)

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        return self + other.scaled(-1)

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for d in sorted(self.coefficients):
            c = self.coefficients[d]
            monomial = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if not monomial:
                text = str(c)
            elif c == 1:
                text = monomial
            elif c == -1:
                text = "-" + monomial
            else:
                text = f"{c}{monomial}"
            terms.append(text)
        return "+".join(terms).replace("+-", "-")

    def coefficient(self, degree: int) -> int:
        return self.coefficients.get(degree, 0)

    def scaled(self, k: int) -> "GradedSeries":
        return GradedSeries({d: k * c for d, c in self.coefficients.items()})

    def shifted(self, k: int) -> "GradedSeries":
        return GradedSeries({d + k: c for d, c in self.coefficients.items()})

    def truncated(self, cap: int) -> "GradedSeries":
        """Drop every degree above cap."""
        return GradedSeries({d: c for d, c in self.coefficients.items() if d <= cap})

    def min_degree(self) -> Optional[int]:
        return min(self.coefficients) if self.coefficients else None

    def max_degree(self) -> Optional[int]:
        return max(self.coefficients) if self.coefficients else None

    def at(self, value: int) -> int:
        return sum(c * value ** d for d, c in self.coefficients.items())

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients.values())

    def as_poly(self) -> sp.Poly:
        return sp.Poly(sum((c * T ** d for d, c in self.coefficients.items()), sp.Integer(0)), T, domain="ZZ")

    @classmethod
    def from_poly(cls, poly: sp.Poly) -> "GradedSeries":
        return cls({monom[0]: int(c) for monom, c in poly.terms()})

    def to_json(self) -> Dict[str, int]:
        return {str(d): self.coefficients[d] for d in sorted(self.coefficients)}

    @classmethod
    def from_json(cls, data: Dict[str, int]) -> "GradedSeries":
        return cls({int(d): int(c) for d, c in data.items()})


@dataclass
class GLCharacter:
    """
    Even-part character: (alpha, beta) -> multiplicity of S_alpha W0 (x) S_beta W1.
    Every key satisfies |alpha| = |beta|.
    """
    terms: Dict[Tuple[Partition, Partition], int] = field(default_factory=dict)
    m: int = 0
    n: int = 0

    def __post_init__(self):
        self.terms = {k: int(v) for k, v in self.terms.items() if v}

    def __add__(self, other: "GLCharacter") -> "GLCharacter":
        out = defaultdict(int, self.terms)
        for k, v in other.terms.items():
            out[k] += v
        return GLCharacter(out, self.m, self.n)

    def __sub__(self, other: "GLCharacter") -> "GLCharacter":
        out = defaultdict(int, self.terms)
        for k, v in other.terms.items():
            out[k] -= v
        return GLCharacter(out, self.m, self.n)

    def scaled(self, k: int) -> "GLCharacter":
        return GLCharacter({key: k * v for key, v in self.terms.items()}, self.m, self.n)

    def truncated(self, cap: int) -> "GLCharacter":
        return GLCharacter({k: v for k, v in self.terms.items() if k[0].size <= cap}, self.m, self.n)

    def degree_slice(self, degree: int) -> "GLCharacter":
        return GLCharacter({k: v for k, v in self.terms.items() if k[0].size == degree}, self.m, self.n)

    def term_dimension(self, alpha: Partition, beta: Partition) -> int:
        return schur_dimension(alpha, self.m) * schur_dimension(beta, self.n)

    def dimension(self) -> int:
        return sum(v * self.term_dimension(a, b) for (a, b), v in self.terms.items())

    def hilbert(self) -> GradedSeries:
        out = defaultdict(int)
        for (a, b), v in self.terms.items():
            out[a.size] += v * self.term_dimension(a, b)
        return GradedSeries(out)

    def negative_terms(self) -> List[Tuple[Partition, Partition]]:
        return [k for k, v in self.terms.items() if v < 0]

    def to_json(self) -> List[dict]:
        keys = sorted(self.terms, key=lambda k: (k[0].size, k[0].parts, k[1].parts))
        return [{"alpha": format_partition(a), "beta": format_partition(b), "mult": self.terms[(a, b)]}
                for a, b in keys]

    @classmethod
    def from_json(cls, data: List[dict], m: int, n: int) -> "GLCharacter":
        terms = {(parse_partition(t["alpha"]), parse_partition(t["beta"])): int(t["mult"]) for t in data}
        return cls(terms, m, n)


@dataclass
class K0Class:
    """Integer combination of simple classes [L_mu]."""
    terms: Dict[Partition, int] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: int(v) for k, v in self.terms.items() if v}

    def __add__(self, other: "K0Class") -> "K0Class":
        out = defaultdict(int, self.terms)
        for k, v in other.terms.items():
            out[k] += v
        return K0Class(out)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mu in sorted(self.terms, key=lambda p: (p.size, p.parts)):
            c = self.terms[mu]
            label = f"[L({format_partition(mu)})]"
            parts.append(label if c == 1 else f"{c}{label}")
        return " + ".join(parts)

    def to_json(self) -> List[dict]:
        return [{"mu": format_partition(mu), "mult": self.terms[mu]}
                for mu in sorted(self.terms, key=lambda p: (p.size, p.parts))]

    @classmethod
    def from_json(cls, data: List[dict]) -> "K0Class":
        return cls({parse_partition(t["mu"]): int(t["mult"]) for t in data})

# ---------------------------
# Validation
# ---------------------------

def check_shape(lam: Partition, m: int, n: int) -> None:
    """
    Raises:
        BadShape: unless m >= n >= 1
        TooManyRows: if lam has more than n parts
    """
    if n < 1 or m < n:
        raise BadShape(f"need m >= n >= 1, got m={m}, n={n}")
    if len(lam) > n:
        raise TooManyRows(f"{format_partition(lam)} has more than {n} parts")

# ---------------------------
# Littlewood-Richardson and Cauchy
# ---------------------------

@lru_cache(maxsize=None)
def _lr_terms(lam: Partition, mu: Partition, max_rows: int) -> Tuple[Tuple[Partition, int], ...]:
    if len(lam) > max_rows or len(mu) > max_rows:
        return ()
    counts: Dict[Partition, int] = defaultdict(int)

    # added[i][r]: number of boxes labelled i+1 placed in row r (0-indexed)
    def place(label: int, shape: List[int], added: List[List[int]]) -> None:
        if label > len(mu):
            counts[Partition(tuple(p for p in shape if p))] += 1
            return
        want = mu.parts[label - 1]
        previous = added[label - 2] if label >= 2 else None
        row_counts = [0] * max_rows

        def fill(r: int, remaining: int, so_far: int, prior_so_far: int) -> None:
            if r == max_rows:
                if remaining == 0:
                    added.append(row_counts[:])
                    new_shape = [shape[i] + row_counts[i] for i in range(max_rows)]
                    place(label + 1, new_shape, added)
                    added.pop()
                return
            # horizontal strip: row r may grow up to the old length of row r-1
            room = (shape[r - 1] if r > 0 else shape[0] + remaining) - shape[r]
            limit = min(remaining, room)
            if previous is not None:
                # lattice word: label i in rows <= r never outnumbers label i-1 in rows < r
                limit = min(limit, prior_so_far - so_far)
            for k in range(limit, -1, -1):
                row_counts[r] = k
                fill(r + 1, remaining - k, so_far + k,
                     prior_so_far + (previous[r] if previous is not None else 0))
            row_counts[r] = 0

        fill(0, want, 0, 0)

    place(1, list(lam.padded(max_rows)), [])
    return tuple(sorted(counts.items()))


def lr_expand(lam: Partition, mu: Partition, max_rows: int) -> Dict[Partition, int]:
    """
    Littlewood-Richardson expansion of s_lam * s_mu restricted to <= max_rows parts.
    Returns:
        dict: nu -> c^nu_{lam mu}, zero coefficients omitted
    """
    return dict(_lr_terms(lam, mu, max_rows))


def exterior_cauchy(s: int, m: int, n: int) -> List[Tuple[Partition, Partition]]:
    """Pairs (delta, delta') with Lambda^s(W0 (x) W1) = sum S_delta W0 (x) S_delta' W1."""
    if s < 0:
        raise BadArgs(f"exterior degree must be nonnegative, got {s}")
    if s > m * n:
        return []
    return [(delta, conjugate(delta)) for delta in partitions_of(s, m, n)]


def symmetric_cauchy(d: int, m: int, n: int) -> List[Partition]:
    """Partitions lam with Sym^d(V0 (x) V1) = sum S_lam V0 (x) S_lam V1."""
    if d < 0:
        raise BadArgs(f"degree must be nonnegative, got {d}")
    return list(partitions_of(d, min(m, n)))

# ---------------------------
# Kac modules
# ---------------------------

def kac_character(lam: Partition, m: int, n: int, max_degree: int = None) -> GLCharacter:
    """
    Character of K_lam = E (x) (S_lam W0 (x) S_lam W1).
    Args:
        max_degree: drop constituents of degree above this (None keeps all)
    """
    check_shape(lam, m, n)
    char = GLCharacter(dict(_kac_terms(lam, m, n)), m, n)
    return char if max_degree is None else char.truncated(max_degree)


@lru_cache(maxsize=None)
def _kac_terms(lam: Partition, m: int, n: int) -> Tuple[Tuple[Tuple[Partition, Partition], int], ...]:
    terms: Dict[Tuple[Partition, Partition], int] = defaultdict(int)
    for s in range(0, m * n + 1):
        for delta, delta_conj in exterior_cauchy(s, m, n):
            left = lr_expand(delta, lam, m)
            right = lr_expand(delta_conj, lam, n)
            for alpha, a in left.items():
                for beta, b in right.items():
                    terms[(alpha, beta)] += a * b
    return tuple(terms.items())


@lru_cache(maxsize=None)
def _kac_coefficients(lam: Partition, m: int, n: int) -> Tuple[Tuple[int, int], ...]:
    scale = schur_dimension(lam, m) * schur_dimension(lam, n)
    poly = sp.Poly(scale * T ** lam.size * (1 + T) ** (m * n), T, domain="ZZ")
    return tuple((monom[0], int(c)) for monom, c in poly.terms())


def kac_hilbert(lam: Partition, m: int, n: int) -> GradedSeries:
    """dim S_lam C^m * dim S_lam C^n * t^|lam| * (1 + t)^(mn)."""
    check_shape(lam, m, n)
    return GradedSeries(dict(_kac_coefficients(lam, m, n)))


def kac_composition(lam: Partition, n: int) -> K0Class:
    """[K_lam] as a sum of simple classes, one per pattern in K(lam; n)."""
    counts = defaultdict(int)
    for pattern in enumerate_K(lam, n):
        mu, _ = lambda_of(lam, pattern.paths)
        counts[mu] += 1
    return K0Class(counts)

# ---------------------------
# Persisted memo store
# ---------------------------

class CharacterStore:
    """
    Append-only file of length-prefixed JSON records, one per computed
    simple-module result. Each record carries a digest of its value;
    records that fail to decode or verify are skipped with a warning and
    recomputed on demand.
    """
    FILENAME = "characters.bin"

    def __init__(self, directory):
        self.path = Path(directory) / self.FILENAME
        self.records: Dict[tuple, object] = {}
        self.load()

    def load(self) -> None:
        try:
            raw = self.path.read_bytes()
        except FileNotFoundError:
            return
        except OSError as e:
            logger.warning("cannot read cache %s: %s", self.path, e)
            return
        offset = 0
        while offset < len(raw):
            if len(raw) - offset < 4:
                logger.warning("truncated record header in %s; ignoring the rest", self.path)
                break
            (length,) = struct.unpack(">I", raw[offset:offset + 4])
            body = raw[offset + 4:offset + 4 + length]
            if len(body) < length:
                logger.warning("truncated record in %s; ignoring the rest", self.path)
                break
            offset += 4 + length
            try:
                record = json.loads(body.decode("utf-8"))
                key = (record["kind"], parse_partition(record["mu"]), int(record["m"]), int(record["n"]))
                value = record["value"]
                verified = record.get("digest") == _digest(value) and _well_formed(key[0], value)
            except (UnicodeDecodeError, ValueError, KeyError, TypeError, AttributeError, DyckresError) as e:
                logger.warning("undecodable record in %s (%s); skipping it", self.path, e)
                continue
            if not verified:
                logger.warning("corrupt %s record for %s in %s; skipping it",
                               key[0], format_partition(key[1]), self.path)
                continue
            self.records[key] = value
        logger.debug("loaded %d cached results from %s", len(self.records), self.path)

    def get(self, kind: str, mu: Partition, m: int, n: int):
        return self.records.get((kind, mu, m, n))

    def discard(self, kind: str, mu: Partition, m: int, n: int) -> None:
        """Forget a record so the next put replaces it."""
        self.records.pop((kind, mu, m, n), None)

    def put(self, kind: str, mu: Partition, m: int, n: int, value) -> None:
        key = (kind, mu, m, n)
        if key in self.records:
            return
        self.records[key] = value
        record = {"kind": kind, "mu": format_partition(mu), "m": m, "n": n,
                  "value": value, "digest": _digest(value)}
        body = json.dumps(record).encode("utf-8")
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "ab") as f:
                f.write(struct.pack(">I", len(body)) + body)
        except OSError as e:
            logger.warning("cannot append to cache %s: %s", self.path, e)


def _digest(value) -> str:
    return hashlib.sha256(json.dumps(value, sort_keys=True).encode("utf-8")).hexdigest()


def _is_count(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _well_formed(kind: str, value) -> bool:
    """Shape check for a stored value; partitions inside must parse."""
    if kind == "hilbert":
        return (isinstance(value, dict)
                and all(isinstance(d, str) and d.isdigit() and _is_count(c) for d, c in value.items()))
    if kind == "character":
        if not isinstance(value, list):
            return False
        for term in value:
            if not (isinstance(term, dict) and isinstance(term.get("alpha"), str)
                    and isinstance(term.get("beta"), str) and _is_count(term.get("mult"))):
                return False
            parse_partition(term["alpha"])
            parse_partition(term["beta"])
        return True
    return False


_store: Optional[CharacterStore] = None
_hilbert_memo: Dict[tuple, GradedSeries] = {}
_character_memo: Dict[tuple, GLCharacter] = {}


def configure_store(directory) -> Optional[CharacterStore]:
    """Attach (or with None, detach) the persisted memo directory."""
    global _store
    if directory is None:
        _store = None
        return None
    try:
        _store = CharacterStore(directory)
    except OSError as e:
        raise StorageError(f"cannot use cache directory {directory}: {e}")
    return _store


def clear_memo() -> None:
    _hilbert_memo.clear()
    _character_memo.clear()

# ---------------------------
# Simple modules
# ---------------------------

def _proper_factors(nu: Partition, n: int, cap: int) -> List[Partition]:
    """lam(D) for every nonempty D in K(nu; n) with |lam(D)| <= cap."""
    out = []
    for pattern in enumerate_K(nu, n):
        if not pattern.paths:
            continue
        mu, _ = lambda_of(nu, pattern.paths)
        if mu.size <= cap:
            out.append(mu)
    return out


def _windowed_hilbert(nu: Partition, m: int, n: int, cap: int) -> GradedSeries:
    key = (nu, m, n, cap)
    if key not in _hilbert_memo:
        logger.debug("memo miss: hilbert %s cap %d", format_partition(nu), cap)
        series = kac_hilbert(nu, m, n).truncated(cap)
        for mu in _proper_factors(nu, n, cap):
            series = series - _windowed_hilbert(mu, m, n, cap)
        _hilbert_memo[key] = series
    return _hilbert_memo[key]


def _windowed_character(nu: Partition, m: int, n: int, cap: int) -> GLCharacter:
    key = (nu, m, n, cap)
    if key not in _character_memo:
        logger.debug("memo miss: character %s cap %d", format_partition(nu), cap)
        char = kac_character(nu, m, n, max_degree=cap)
        for mu in _proper_factors(nu, n, cap):
            char = char - _windowed_character(mu, m, n, cap)
        _character_memo[key] = char
    return _character_memo[key]


def _hilbert_problem(mu: Partition, m: int, n: int, series: GradedSeries) -> Optional[str]:
    """Why series cannot be the Hilbert series of L_mu, or None."""
    if not series.is_nonnegative():
        return "negative coefficient"
    if series.min_degree() != mu.size:
        return f"lowest degree {series.min_degree()} is not {mu.size}"
    if series.coefficient(mu.size) != schur_dimension(mu, m) * schur_dimension(mu, n):
        return "generator degree does not match the highest weight"
    if series.max_degree() > mu.size + m * n:
        return f"degree {series.max_degree()} exceeds {mu.size + m * n}"
    if series.at(1) > kac_hilbert(mu, m, n).at(1):
        return "dimension exceeds the Kac module"
    return None


def _character_problem(mu: Partition, m: int, n: int, char: GLCharacter) -> Optional[str]:
    if char.negative_terms():
        return "negative multiplicity"
    if any(a.size != b.size for a, b in char.terms):
        return "unbalanced constituent"
    if char.terms.get((mu, mu)) != 1:
        return "highest weight missing"
    return _hilbert_problem(mu, m, n, char.hilbert())


def _cached(kind: str, mu: Partition, m: int, n: int):
    """The stored value for (kind, mu, m, n) if it passes the invariants of L_mu."""
    if _store is None:
        return None
    data = _store.get(kind, mu, m, n)
    if data is None:
        return None
    if kind == "hilbert":
        value = GradedSeries.from_json(data)
        problem = _hilbert_problem(mu, m, n, value)
    else:
        value = GLCharacter.from_json(data, m, n)
        problem = _character_problem(mu, m, n, value)
    if problem is None:
        return value
    logger.warning("cached %s of L(%s) at m=%d n=%d rejected (%s); recomputing",
                   kind, format_partition(mu), m, n, problem)
    _store.discard(kind, mu, m, n)
    return None


def simple_hilbert(mu: Partition, m: int, n: int) -> GradedSeries:
    """
    Hilbert series of L_mu, from the closed Kac form.
    Raises:
        NegativeMultiplicity: if the inversion produces a negative coefficient
    """
    check_shape(mu, m, n)
    cached = _cached("hilbert", mu, m, n)
    if cached is not None:
        return cached
    series = _windowed_hilbert(mu, m, n, mu.size + m * n)
    if not series.is_nonnegative():
        raise NegativeMultiplicity(f"Hilbert series of L({format_partition(mu)}) has a negative coefficient: {series}")
    if _store is not None:
        _store.put("hilbert", mu, m, n, series.to_json())
    return series


def simple_character(mu: Partition, m: int, n: int) -> GLCharacter:
    """
    Even-part character of L_mu.
    Raises:
        NegativeMultiplicity: if some constituent comes out negative
    """
    check_shape(mu, m, n)
    cached = _cached("character", mu, m, n)
    if cached is not None:
        return cached
    char = _windowed_character(mu, m, n, mu.size + m * n)
    negative = char.negative_terms()
    if negative:
        a, b = negative[0]
        raise NegativeMultiplicity(
            f"L({format_partition(mu)}) has multiplicity {char.terms[(a, b)]} "
            f"at ({format_partition(a)}; {format_partition(b)})")
    if _store is not None:
        _store.put("character", mu, m, n, char.to_json())
    return char

# ---------------------------
# The ideal I_lam
# ---------------------------

def ideal_hilbert(lam: Partition, m: int, n: int, max_degree: int) -> GradedSeries:
    """Hilbert function of I_lam = sum over mu >= lam of S_mu C^m (x) S_mu C^n, through max_degree."""
    check_shape(lam, m, n)
    out = {}
    for d in range(lam.size, max_degree + 1):
        total = sum(schur_dimension(mu, m) * schur_dimension(mu, n)
                    for mu in symmetric_cauchy(d, m, n) if contains(mu, lam))
        out[d] = total
    return GradedSeries(out)
