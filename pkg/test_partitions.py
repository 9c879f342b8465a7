"""
Unit tests for partitions and Young-diagram helpers.
"""

import pytest

from errors import MalformedPartition, TooManyRows
from partitions import (
    EMPTY,
    Box,
    Partition,
    boxes,
    conjugate,
    contains,
    corners,
    format_partition,
    from_boxes,
    make_partition,
    parse_partition,
    partitions_in_box,
    partitions_of,
    rectangle,
    schur_dimension,
)


def test_make_partition_strips_trailing_zeros():
    """Trailing zeros are dropped."""
    assert make_partition([4, 2, 2, 1, 0, 0]) == Partition((4, 2, 2, 1))
    assert make_partition([]) == EMPTY


def test_make_partition_rejects_bad_input():
    """Increasing or negative parts are rejected."""
    with pytest.raises(MalformedPartition):
        make_partition([2, 3])
    with pytest.raises(MalformedPartition):
        make_partition([2, -1])


def test_parse_and_format():
    """Comma-separated text round-trips; "" is the empty partition."""
    assert parse_partition("3,2") == Partition((3, 2))
    assert parse_partition("") == EMPTY
    assert format_partition(Partition((4, 4, 3))) == "4,4,3"
    assert format_partition(EMPTY) == ""
    with pytest.raises(MalformedPartition):
        parse_partition("3,x")


def test_boxes():
    """Box sets follow (column, row) with row 1 longest."""
    assert boxes(Partition((2, 1))) == {Box(1, 1), Box(2, 1), Box(1, 2)}
    assert boxes(EMPTY) == set()
    cells = boxes(Partition((4, 2, 2, 1)))
    assert len(cells) == 9
    assert Box(4, 1) in cells and Box(1, 4) in cells
    assert Box(2, 4) not in cells


def test_from_boxes():
    """Justified box sets read back as partitions, others as None."""
    assert from_boxes(boxes(Partition((4, 2, 2, 1)))) == Partition((4, 2, 2, 1))
    assert from_boxes(set()) == EMPTY
    assert from_boxes({Box(2, 1)}) is None
    assert from_boxes({Box(1, 1), Box(1, 2), Box(2, 2)}) is None


def test_corners():
    """Corners are listed by increasing row."""
    assert corners(Partition((4, 2, 2, 1))) == [Box(4, 1), Box(2, 3), Box(1, 4)]
    assert corners(EMPTY) == []
    assert corners(Partition((3, 3, 3))) == [Box(3, 3)]


def test_contains():
    assert contains(Partition((4, 4)), Partition((3, 2)))
    assert not contains(Partition((3, 2)), Partition((4, 4)))
    assert contains(Partition((5, 5, 5)), Partition((3, 2)))
    assert contains(Partition((1,)), EMPTY)


def test_conjugate():
    assert conjugate(Partition((3, 2))) == Partition((2, 2, 1))
    assert conjugate(Partition((1, 1, 1))) == Partition((3,))
    assert conjugate(EMPTY) == EMPTY


def test_schur_dimension():
    """Hook-content formula against known dimensions."""
    assert schur_dimension(Partition((3, 2)), 3) == 15
    assert schur_dimension(Partition((1, 1)), 3) == 3
    assert schur_dimension(Partition((1, 1, 1, 1)), 3) == 0
    assert schur_dimension(EMPTY, 5) == 1
    assert schur_dimension(Partition((3, 3, 3)), 3) == 1


def test_padded():
    assert Partition((3, 2)).padded(4) == (3, 2, 0, 0)
    with pytest.raises(TooManyRows):
        Partition((1, 1, 1)).padded(2)


def test_rectangle():
    assert rectangle(2, 3) == Partition((3, 3))
    assert rectangle(0, 3) == EMPTY


def test_partitions_generators():
    """Counts of partitions by size and inside a box."""
    assert len(list(partitions_of(5, 5))) == 7
    assert len(list(partitions_of(5, 2))) == 3
    assert list(partitions_of(0, 3)) == [EMPTY]
    # binomial(rows + cols, rows)
    assert len(list(partitions_in_box(3, 4))) == 35
    assert all(len(p) <= 3 and p.part(1) <= 4 for p in partitions_in_box(3, 4))


def test_partitions_of_bounds_and_order():
    """Bounded generation lists largest first parts first and respects both bounds."""
    assert list(partitions_of(7, 3, 3)) == [Partition((3, 3, 1)), Partition((3, 2, 2))]
    assert list(partitions_of(4, 4)) == [Partition(p) for p in [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]]
    # no room for 10 boxes in a 3 x 3 box
    assert list(partitions_of(10, 3, 3)) == []
    assert list(partitions_of(2, 0)) == []
    assert list(partitions_of(0, 0)) == [EMPTY]
    assert len(set(partitions_of(12, 4, 6))) == len(list(partitions_of(12, 4, 6)))
