"""
Paths, Dyck paths, augmented Dyck paths and Dyck patterns.

A path steps East (x+1) or South (y-1) from box to box. A Dyck path of level d
starts and ends on the antidiagonal x+y = d and never dips below it. A pattern
is a set of pairwise disjoint Dyck paths relative to a base partition; its
bullets are always derived from the paths (they are the boxes the paths force
into the Young diagram), so two patterns are equal iff their path sets are.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Sequence, Set, Tuple

from errors import NotAPartition, NotDyck, OverlapError
from partitions import Box, Partition, boxes, format_partition, from_boxes

logger = logging.getLogger(__name__)

EAST = "E"
SOUTH = "S"

# ---------------------------
# Paths
# ---------------------------

@dataclass(frozen=True)
class Path:
    """Ordered box sequence whose steps are all East or South."""
    boxes: Tuple[Box, ...]

    def __post_init__(self):
        if not self.boxes:
            raise NotDyck("a path has at least one box")
        for a, b in zip(self.boxes, self.boxes[1:]):
            if (b.x, b.y) not in ((a.x + 1, a.y), (a.x, a.y - 1)):
                raise NotDyck(f"step {tuple(a)} -> {tuple(b)} is neither East nor South")

    def __len__(self) -> int:
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    @property
    def start(self) -> Box:
        return self.boxes[0]

    @property
    def end(self) -> Box:
        return self.boxes[-1]

    def steps(self) -> str:
        return "".join(EAST if b.x > a.x else SOUTH for a, b in zip(self.boxes, self.boxes[1:]))


@dataclass(frozen=True)
class DyckPath(Path):
    """A path with both endpoints on x+y = level and no box below it."""

    def __post_init__(self):
        super().__post_init__()
        d = self.level
        if self.end.x + self.end.y != d:
            raise NotDyck(f"endpoint {tuple(self.end)} is not on level {d}")
        for b in self.boxes:
            if b.x < 1 or b.y < 1:
                raise NotDyck(f"box {tuple(b)} leaves the positive quadrant")
            if b.x + b.y < d:
                raise NotDyck(f"box {tuple(b)} dips below level {d}")
        assert len(self.boxes) % 2 == 1

    @property
    def level(self) -> int:
        return self.start.x + self.start.y

    def sort_key(self) -> tuple:
        return (-self.start.y, self.start.x, self.steps())


@dataclass(frozen=True)
class AugmentedDyckPath:
    """A Dyck path with u head bullets to its left and v tail bullets below it."""
    dyck: DyckPath
    head: Tuple[Box, ...] = ()
    tail: Tuple[Box, ...] = ()

    def __post_init__(self):
        x1, y1 = self.dyck.start
        xk, yk = self.dyck.end
        u, v = len(self.head), len(self.tail)
        if tuple(self.head) != tuple(Box(x1 - u + i, y1) for i in range(u)):
            raise NotDyck("head bullets must run left from the first box")
        if tuple(self.tail) != tuple(Box(xk, yk - 1 - i) for i in range(v)):
            raise NotDyck("tail bullets must run down from the last box")
        if any(b.x < 1 or b.y < 1 for b in self.head + self.tail):
            raise NotDyck("bullets leave the positive quadrant")

    def __len__(self) -> int:
        return len(self.dyck) + len(self.head) + len(self.tail)


def make_dyck_path(start: Box, steps: Sequence[str]) -> DyckPath:
    """
    Walk from `start` along E/S steps and validate the Dyck conditions.
    Raises:
        NotDyck: bad endpoint level, a box below the level, or a coordinate < 1
    """
    start = Box(*start)
    if start.x < 1 or start.y < 1:
        raise NotDyck(f"start {tuple(start)} leaves the positive quadrant")
    cells = [start]
    for step in steps:
        x, y = cells[-1]
        if step == EAST:
            cells.append(Box(x + 1, y))
        elif step == SOUTH:
            cells.append(Box(x, y - 1))
        else:
            raise NotDyck(f"unknown step {step!r}")
    return DyckPath(tuple(cells))


def path_from_boxes(cells: Iterable) -> DyckPath:
    return DyckPath(tuple(Box(*c) for c in cells))


def path_corners(path: Path) -> Tuple[List[Box], List[Box]]:
    """Inner and outer corners of a path."""
    inner, outer = [], []
    cells = path.boxes
    for i in range(1, len(cells) - 1):
        before, here, after = cells[i - 1], cells[i], cells[i + 1]
        if after.x - before.x != 1 or before.y - after.y != 1:
            continue
        if before.x == here.x:
            inner.append(here)
        else:
            outer.append(here)
    return inner, outer

# ---------------------------
# Patterns
# ---------------------------

@dataclass(frozen=True)
class DyckPattern:
    """Dyck paths in canonical order plus the bullets they force; equality ignores bullets."""
    paths: Tuple[DyckPath, ...] = ()
    bullets: FrozenSet[Box] = field(default=frozenset(), compare=False)

    def path_boxes(self) -> Set[Box]:
        return {b for p in self.paths for b in p.boxes}

    def support(self) -> Set[Box]:
        return self.path_boxes() | set(self.bullets)

    def path_lengths(self) -> List[int]:
        return [len(p) for p in self.paths]


EMPTY_PATTERN = DyckPattern()


def canonical_paths(paths: Iterable[DyckPath]) -> Tuple[DyckPath, ...]:
    return tuple(sorted(paths, key=DyckPath.sort_key))


def neighbourhood(cells: Iterable[Box]) -> Set[Box]:
    """Boxes directly N, E or NE of some box in `cells`."""
    out = set()
    for x, y in cells:
        out.update((Box(x, y + 1), Box(x + 1, y), Box(x + 1, y + 1)))
    return out


def touching_rule_holds(inner: Set[Box], outer: Set[Box]) -> bool:
    """
    If `outer` meets the N/E/NE neighbourhood of `inner`, that whole
    neighbourhood must lie in inner | outer.
    """
    around = neighbourhood(inner)
    if around.isdisjoint(outer):
        return True
    return around <= (inner | outer)


def compatible(p: Set[Box], q: Set[Box]) -> bool:
    """The touching rule in both directions."""
    return touching_rule_holds(p, q) and touching_rule_holds(q, p)


def lambda_of(lam: Partition, paths: Iterable[DyckPath]) -> Tuple[Partition, FrozenSet[Box]]:
    """
    The partition forced by lam and the paths, with its bullets.

    A box belongs to lam(D) iff it is in lam or weakly south-west of some path
    box; the bullets are the boxes of lam(D) in neither lam nor a path.
    Raises:
        OverlapError: paths overlap each other or lam
    """
    base = boxes(lam)
    claimed: Set[Box] = set()
    for p in paths:
        cells = set(p.boxes)
        if cells & claimed:
            raise OverlapError("Dyck paths overlap")
        if cells & base:
            raise OverlapError(f"a Dyck path overlaps {format_partition(lam)}")
        claimed |= cells
    closure = set(base)
    for x, y in claimed:
        closure.update(Box(i, j) for i in range(1, x + 1) for j in range(1, y + 1))
    result = from_boxes(closure)
    if result is None:
        raise NotAPartition("closure is not a Young diagram")
    return result, frozenset(closure - base - claimed)


def make_pattern(lam: Partition, paths: Iterable[DyckPath]) -> DyckPattern:
    """Canonical pattern with bullets derived from lam and the paths."""
    paths = canonical_paths(paths)
    _, bullets = lambda_of(lam, paths)
    return DyckPattern(paths, bullets)


def greedy_claims(pattern: DyckPattern) -> Dict[DyckPath, Tuple[Tuple[Box, ...], Tuple[Box, ...]]]:
    """Maximal head and tail bullet runs for every path."""
    claims = {}
    for p in pattern.paths:
        head = []
        x, y = p.start
        while Box(x - 1 - len(head), y) in pattern.bullets:
            head.append(Box(x - 1 - len(head), y))
        tail = []
        x, y = p.end
        while Box(x, y - 1 - len(tail)) in pattern.bullets:
            tail.append(Box(x, y - 1 - len(tail)))
        claims[p] = (tuple(reversed(head)), tuple(tail))
    return claims


def augmented_length(pattern: DyckPattern, path: DyckPath) -> int:
    head, tail = greedy_claims(pattern)[path]
    return len(AugmentedDyckPath(path, head, tail))


class Admissibility(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_admissible(lam: Partition, pattern: DyckPattern) -> Admissibility:
    """
    Check the four admissibility conditions and the bullet decomposition.
    Returns:
        Admissibility: truthy on success, otherwise carrying the violated condition
    """
    base = boxes(lam)
    seen: Set[Box] = set()
    for p in pattern.paths:
        cells = set(p.boxes)
        if cells & seen:
            return Admissibility(False, "paths are not pairwise disjoint")
        seen |= cells
    bullets = set(pattern.bullets)
    if bullets & seen:
        return Admissibility(False, "bullets overlap a path")

    if base & (seen | bullets):
        return Admissibility(False, "condition (1): support meets the base partition")

    if from_boxes(base | seen | bullets) is None:
        return Admissibility(False, "condition (2): lambda(D) is not a partition")

    cells = [set(p.boxes) for p in pattern.paths]
    for i, di in enumerate(cells):
        for j, dj in enumerate(cells):
            if i != j and not touching_rule_holds(di, dj):
                return Admissibility(False, f"condition (3): paths {i + 1} and {j + 1}")

    if not neighbourhood(seen).isdisjoint(bullets):
        return Admissibility(False, "condition (4): a bullet sits N, E or NE of a path box")

    covered = set()
    for head, tail in greedy_claims(pattern).values():
        covered.update(head)
        covered.update(tail)
    if covered != bullets:
        return Admissibility(False, "bullets admit no head/tail decomposition")
    return Admissibility(True)


def sizes(pattern: DyckPattern) -> Tuple[int, int, int]:
    """(Dyck size, bullet size, total size)."""
    d = sum(len(p) for p in pattern.paths)
    b = len(pattern.bullets)
    return d, b, d + b

# ---------------------------
# Rendering and serialization
# ---------------------------

def render_pattern(lam: Partition, pattern: DyckPattern) -> str:
    """
    ASCII picture, top row first: '.' base boxes, '#' path boxes joined by
    '-' and '|' along their steps, 'o' bullets.
    """
    base = boxes(lam)
    cells = base | pattern.support()
    if not cells:
        return ""
    width = max(c.x for c in cells)
    height = max(c.y for c in cells)
    grid = [[" "] * (2 * width - 1) for _ in range(2 * height - 1)]

    def put(x2, y2, ch):
        # x2/y2 are doubled coordinates, origin at box (1, 1)
        grid[(2 * height - 2) - y2][x2] = ch

    for b in base:
        put(2 * (b.x - 1), 2 * (b.y - 1), ".")
    for b in pattern.bullets:
        put(2 * (b.x - 1), 2 * (b.y - 1), "o")
    for p in pattern.paths:
        for b in p.boxes:
            put(2 * (b.x - 1), 2 * (b.y - 1), "#")
        for a, b in zip(p.boxes, p.boxes[1:]):
            if b.x > a.x:
                put(2 * a.x - 1, 2 * (a.y - 1), "-")
            else:
                put(2 * (a.x - 1), 2 * a.y - 3, "|")
    lines = ["".join(row).rstrip() for row in grid]
    legend = []
    for i, p in enumerate(pattern.paths, start=1):
        inner, outer = path_corners(p)
        legend.append(
            f"path {i}: level {p.level}, length {len(p)}, "
            f"inner corners {[tuple(c) for c in inner]}, outer corners {[tuple(c) for c in outer]}"
        )
    return "\n".join(lines + legend)


def pattern_to_dict(lam: Partition, pattern: DyckPattern) -> dict:
    mu, _ = lambda_of(lam, pattern.paths)
    d, b, _ = sizes(pattern)
    return {
        "paths": [[[c.x, c.y] for c in p.boxes] for p in pattern.paths],
        "bullets": [[c.x, c.y] for c in sorted(pattern.bullets, key=lambda c: (-c.y, c.x))],
        "lambda_of": format_partition(mu),
        "d": d,
        "b": b,
    }


def pattern_from_dict(data: dict) -> DyckPattern:
    paths = canonical_paths(path_from_boxes(p) for p in data.get("paths", []))
    bullets = frozenset(Box(*c) for c in data.get("bullets", []))
    return DyckPattern(paths, bullets)
