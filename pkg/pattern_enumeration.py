"""
Exhaustive enumeration of admissible Dyck patterns.

    K(lam; n)   bullet-free patterns, paths of any length (Kac composition factors)
    A(lam; n)   augmented patterns, every path of length >= 3 (conjectural strands)
    A0(lam; n)  the bullet-free part of A(lam; n) (the first linear strand)

plus the explicit corner-hook and rectangular-hook constructions.

The search walks the boxes of the region row by row, top row first and left
to right, deciding for each box outside lam whether it lies outside lam(D),
is a bullet, starts a Dyck path, or was already covered by a path started
earlier. Since a path's first box precedes all its other boxes in that order,
every pattern is reached exactly once.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Set, Tuple

import pandas as pd

from dyck_paths import (
    DyckPath,
    DyckPattern,
    compatible,
    is_admissible,
    lambda_of,
    make_pattern,
    neighbourhood,
    sizes,
)
from errors import BadArgs, ConsistencyError, NotACorner, TooManyRows
from partitions import Box, Partition, boxes, format_partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchRegion:
    """Rows 1..max_row and columns 1..max_col."""
    max_row: int
    max_col: int
    slack: int = 0


def region_for(lam: Partition, n: int, slack: int = 0) -> SearchRegion:
    """Columns up to lam_1 + n + slack, rows up to n."""
    if slack < 0:
        raise BadArgs(f"slack must be nonnegative, got {slack}")
    return SearchRegion(max_row=n, max_col=lam.part(1) + n + slack, slack=slack)


def _check_rows(lam: Partition, n: int) -> None:
    if n < 1:
        raise BadArgs(f"n must be positive, got {n}")
    if len(lam) > n:
        raise TooManyRows(f"{format_partition(lam)} has more than {n} parts")

# ---------------------------
# Candidate paths
# ---------------------------

def enumerate_candidate_paths(lam: Partition, region: SearchRegion, min_len: int) -> Set[DyckPath]:
    """All Dyck paths of length >= min_len inside the region and outside lam."""
    if min_len not in (1, 3):
        raise BadArgs(f"min_len must be 1 or 3, got {min_len}")
    base = boxes(lam)
    found: Set[DyckPath] = set()

    def extend(cells: List[Box], level: int) -> None:
        x, y = cells[-1]
        if x + y == level and len(cells) >= min_len:
            found.add(DyckPath(tuple(cells)))
        east = Box(x + 1, y)
        if east.x <= region.max_col and east not in base:
            cells.append(east)
            extend(cells, level)
            cells.pop()
        south = Box(x, y - 1)
        if south.y >= 1 and south.x + south.y >= level and south not in base:
            cells.append(south)
            extend(cells, level)
            cells.pop()

    for y in range(1, region.max_row + 1):
        for x in range(lam.part(y) + 1, region.max_col + 1):
            extend([Box(x, y)], x + y)
    logger.debug("%d candidate paths for %s in %s (min_len=%d)",
                 len(found), format_partition(lam), region, min_len)
    return found

# ---------------------------
# Pattern search
# ---------------------------

def _search(lam: Partition, region: SearchRegion, with_bullets: bool, min_len: int) -> List[DyckPattern]:
    by_start: Dict[Box, List[DyckPath]] = defaultdict(list)
    for p in enumerate_candidate_paths(lam, region, min_len):
        by_start[p.start].append(p)
    for starts in by_start.values():
        starts.sort(key=DyckPath.sort_key)

    owner: Dict[Box, int] = {}          # path box -> index into `paths`
    ends: Set[Box] = set()
    bullets: Dict[Box, bool] = {}       # bullet -> sits on a tail run
    paths: List[DyckPath] = []
    cells: List[Set[Box]] = []
    row_len = {region.max_row + 1: 0}
    rightmost = defaultdict(int)        # row -> largest x covered by a path
    results: List[DyckPattern] = []

    def emit() -> None:
        pattern = DyckPattern(tuple(sorted(paths, key=DyckPath.sort_key)), frozenset(bullets))
        verdict = is_admissible(lam, pattern)
        if not verdict:
            raise ConsistencyError(f"search produced an inadmissible pattern: {verdict.reason}")
        results.append(pattern)

    def next_row(y: int) -> None:
        if y == 1:
            emit()
        else:
            visit(y - 1, lam.part(y - 1) + 1, False)

    def visit(y: int, x: int, need_start: bool) -> None:
        # need_start: the previous box was a head bullet, so a path must start before the row ends
        if x > region.max_col:
            if not need_start:
                row_len[y] = region.max_col
                next_row(y)
            return
        box = Box(x, y)
        if box in owner:
            if not need_start:
                visit(y, x + 1, False)
            return

        if not need_start and x > row_len[y + 1] and rightmost[y] < x:
            row_len[y] = x - 1
            next_row(y)

        if with_bullets and not any(b in owner for b in (Box(x - 1, y), Box(x, y - 1), Box(x - 1, y - 1))):
            above = Box(x, y + 1)
            on_tail = above in ends or bullets.get(above, False)
            bullets[box] = on_tail
            visit(y, x + 1, need_start or not on_tail)
            del bullets[box]

        for p in by_start.get(box, ()):
            new = set(p.boxes)
            if any(c in owner for c in new):
                continue
            if not neighbourhood(new).isdisjoint(bullets):
                continue
            if not all(compatible(new, old) for old in cells):
                continue
            index = len(paths)
            paths.append(p)
            cells.append(new)
            ends.add(p.end)
            saved = dict(rightmost)
            for c in new:
                owner[c] = index
                rightmost[c.y] = max(rightmost[c.y], c.x)
            visit(y, x + 1, False)
            for c in new:
                del owner[c]
            rightmost.clear()
            rightmost.update(saved)
            ends.discard(p.end)
            cells.pop()
            paths.pop()

    visit(region.max_row, lam.part(region.max_row) + 1, False)
    return results


def pattern_sort_key(lam: Partition, pattern: DyckPattern) -> tuple:
    """(|lam(D)|, lam(D), d(D), path order) for stable output."""
    mu, _ = lambda_of(lam, pattern.paths)
    d, _, _ = sizes(pattern)
    return (mu.size, mu.parts, d, tuple(p.sort_key() for p in pattern.paths))


@lru_cache(maxsize=None)
def _enumerate(lam: Partition, n: int, slack: int, with_bullets: bool, min_len: int) -> Tuple[DyckPattern, ...]:
    _check_rows(lam, n)
    region = region_for(lam, n, slack)
    found = _search(lam, region, with_bullets, min_len)
    found.sort(key=lambda p: pattern_sort_key(lam, p))
    logger.debug("%d patterns for %s, n=%d, bullets=%s", len(found), format_partition(lam), n, with_bullets)
    return tuple(found)


def enumerate_K(lam: Partition, n: int, slack: int = 0) -> Tuple[DyckPattern, ...]:
    """Bullet-free lam-admissible patterns inside n rows (Kac composition factors)."""
    return _enumerate(lam, n, slack, False, 1)


def enumerate_A(lam: Partition, n: int, slack: int = 0) -> Tuple[DyckPattern, ...]:
    """Augmented lam-admissible patterns inside n rows with no path of length one."""
    return _enumerate(lam, n, slack, True, 3)


def enumerate_A0(lam: Partition, n: int, slack: int = 0) -> Tuple[DyckPattern, ...]:
    """The patterns of A(lam; n) without bullets."""
    return tuple(p for p in enumerate_A(lam, n, slack) if not p.bullets)

# ---------------------------
# Explicit constructions
# ---------------------------

def _hook(arm: int, centre_x: int, centre_y: int) -> DyckPath:
    """Hook with corner at (centre_x, centre_y): `arm` boxes to its left, `arm` below."""
    top = [Box(centre_x - arm + j, centre_y) for j in range(arm + 1)]
    down = [Box(centre_x, centre_y - j) for j in range(1, arm + 1)]
    return DyckPath(tuple(top + down))


def corner_hook_pattern(lam: Partition, n: int, p: int) -> DyckPattern:
    """
    Nested hooks of lengths 3, 5, ..., 2(n-p)+1 around the corner (lam_p, p).
    Raises:
        NotACorner: if lam_p == lam_{p+1} (with lam_{n+1} = -1)
    """
    _check_rows(lam, n)
    if not 1 <= p <= n:
        raise BadArgs(f"corner row {p} outside 1..{n}")
    following = lam.part(p + 1) if p < n else -1
    if lam.part(p) <= following:
        raise NotACorner(f"row {p} of {format_partition(lam)} has no corner")
    column = lam.part(p)
    hooks = [_hook(i, column + i, p + i) for i in range(1, n - p + 1)]
    pattern = make_pattern(lam, hooks)
    verdict = is_admissible(lam, pattern)
    if not verdict:
        raise ConsistencyError(f"corner hooks at row {p} are not admissible: {verdict.reason}")
    return pattern


def rectangular_patterns(a: int, b: int, n: int) -> List[DyckPattern]:
    """
    The patterns of A(a x b; n) built directly: q nested hooks centred at
    (b+i, a+i) with arm lengths t_i + i, 0 <= t_1 <= ... <= t_q <= min(a,b)-1.
    """
    if not (1 <= a <= n and b >= 1):
        raise BadArgs(f"need 1 <= a <= n and b >= 1, got a={a}, b={b}, n={n}")
    lam = Partition((b,) * a)
    out = []
    for q in range(0, n - a + 1):
        for t in itertools.combinations_with_replacement(range(min(a, b)), q):
            hooks = [_hook(t[i - 1] + i, b + i, a + i) for i in range(1, q + 1)]
            out.append(make_pattern(lam, hooks))
    return out

# ---------------------------
# Reporting
# ---------------------------

def patterns_frame(lam: Partition, patterns) -> pd.DataFrame:
    """One row per pattern: lambda(D), d, b and the path lengths."""
    rows = []
    for pattern in patterns:
        mu, _ = lambda_of(lam, pattern.paths)
        d, b, _ = sizes(pattern)
        rows.append({
            "lambda_of": format_partition(mu),
            "d": d,
            "b": b,
            "lengths": " ".join(str(k) for k in pattern.path_lengths()) or "-",
        })
    return pd.DataFrame(rows, columns=["lambda_of", "d", "b", "lengths"])
