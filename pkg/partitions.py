"""
Partitions as weakly decreasing integer sequences and as Young-diagram box sets.

Boxes are indexed by (x, y) = (column, row), both starting at 1, with row 1
holding the longest part. A partition with at most n parts is stored
normalized (trailing zeros dropped); operations that care about an ambient
row bound take it as a separate argument.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, NamedTuple, Sequence, Set

from sympy.utilities.iterables import partitions as sympy_partitions

from errors import MalformedPartition, TooManyRows


class Box(NamedTuple):
    """A box of the grid, (column, row)."""
    x: int
    y: int


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""
    parts: tuple = ()

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return format_partition(self)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def part(self, i: int) -> int:
        """The i-th part, 1-indexed, zero past the end."""
        if 1 <= i <= len(self.parts):
            return self.parts[i - 1]
        return 0

    def padded(self, n: int) -> tuple:
        if len(self.parts) > n:
            raise TooManyRows(f"{self} has more than {n} parts")
        return self.parts + (0,) * (n - len(self.parts))


EMPTY = Partition(())

# ---------------------------
# Construction and serialization
# ---------------------------

def make_partition(parts: Sequence[int]) -> Partition:
    """
    Build a normalized partition.
    Args:
        parts: integer sequence, trailing zeros allowed
    Returns:
        Partition: the sequence with trailing zeros removed
    Raises:
        MalformedPartition: if a part is negative or the sequence increases
    """
    values = [int(p) for p in parts]
    for i, p in enumerate(values):
        if p < 0:
            raise MalformedPartition(f"negative part {p} in {tuple(values)}")
        if i > 0 and p > values[i - 1]:
            raise MalformedPartition(f"parts increase at position {i + 1} in {tuple(values)}")
    while values and values[-1] == 0:
        values.pop()
    return Partition(tuple(values))


def rectangle(a: int, b: int) -> Partition:
    """The a x b rectangle (b^a)."""
    if a <= 0 or b <= 0:
        return EMPTY
    return Partition((b,) * a)


def format_partition(lam: Partition) -> str:
    """Comma-separated parts; the empty partition is the empty string."""
    return ",".join(str(p) for p in lam.parts)


def parse_partition(text: str) -> Partition:
    """Inverse of format_partition; raises MalformedPartition on junk tokens."""
    text = (text or "").strip()
    if not text:
        return EMPTY
    tokens = [t.strip() for t in text.split(",")]
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise MalformedPartition(f"non-numeric part in {text!r}")
    return make_partition(values)

# ---------------------------
# Box-set view
# ---------------------------

def boxes(lam: Partition) -> Set[Box]:
    return {Box(j, i) for i, row in enumerate(lam.parts, start=1) for j in range(1, row + 1)}


def from_boxes(cells) -> Partition:
    """
    Read a box set back as a partition.
    Returns None when the set is not left- and bottom-justified.
    """
    cells = set(cells)
    if not cells:
        return EMPTY
    top = max(c.y for c in cells)
    rows = []
    for y in range(1, top + 1):
        length = sum(1 for c in cells if c.y == y)
        if any(Box(x, y) not in cells for x in range(1, length + 1)):
            return None
        rows.append(length)
    if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)) or rows[-1] == 0:
        return None
    return Partition(tuple(rows))


def corners(lam: Partition) -> List[Box]:
    """Boxes (lam_p, p) with lam_p > lam_{p+1}, by increasing p."""
    return [Box(lam.part(p), p) for p in range(1, len(lam) + 1) if lam.part(p) > lam.part(p + 1)]


def contains(lam: Partition, mu: Partition) -> bool:
    """True iff mu fits inside lam."""
    if len(mu) > len(lam):
        return False
    return all(m <= lam.part(i) for i, m in enumerate(mu.parts, start=1))


def conjugate(lam: Partition) -> Partition:
    if not lam.parts:
        return EMPTY
    return Partition(tuple(sum(1 for p in lam.parts if p >= i) for i in range(1, lam.parts[0] + 1)))

# ---------------------------
# Dimensions
# ---------------------------

@lru_cache(maxsize=None)
def schur_dimension(lam: Partition, N: int) -> int:
    """
    dim S_lam(C^N) by the hook-content formula.
    Numerators are multiplied out before the single exact division.
    """
    if len(lam) > N:
        return 0
    conj = conjugate(lam)
    numerator = 1
    denominator = 1
    for i, row in enumerate(lam.parts, start=1):
        for j in range(1, row + 1):
            numerator *= N + j - i
            denominator *= (row - j) + (conj.part(j) - i) + 1
    return numerator // denominator

# ---------------------------
# Generators
# ---------------------------

def partitions_of(size: int, max_rows: int, max_col: int = None) -> Iterator[Partition]:
    """
    All partitions of `size` with at most max_rows parts and parts <= max_col,
    largest first part first.
    """
    if size == 0:
        yield EMPTY
        return
    if max_col is None:
        max_col = size
    # sympy yields {} for unsatisfiable bounds; those have no partitions here
    if size < 0 or max_rows < 1 or max_col < 1 or max_rows * max_col < size:
        return
    found = []
    for multiplicities in sympy_partitions(size, m=max_rows, k=max_col):
        counts = dict(multiplicities)  # sympy may reuse the yielded dict
        parts = []
        for part in sorted(counts, reverse=True):
            parts.extend([part] * counts[part])
        found.append(tuple(parts))
    for parts in sorted(found, reverse=True):
        yield Partition(parts)


def partitions_in_box(rows: int, cols: int) -> Iterator[Partition]:
    """All partitions fitting in a rows x cols rectangle, smallest first."""
    for size in range(rows * cols + 1):
        yield from partitions_of(size, rows, cols)
