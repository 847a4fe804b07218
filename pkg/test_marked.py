from itertools import combinations

import pytest
from sympy import npartitions

from betti_engine.diagram import EMPTY, Box, Partition, enumerate_partitions, removable_boxes
from betti_engine.errors import EmptyRange, UsageError
from betti_engine.marked import DiagramPair, FixedPoint, MarkedDiagram, enumerate_fixed_points, enumerate_marked, \
    enumerate_pairs, irrelevant_boxes_rank1, merge, relevant_pair, split, staircase


@pytest.fixture
def three_marked():
    return MarkedDiagram.parse("5,5,4,3,3,1", "2,3,5")


def all_marked(max_size, max_marks):
    found = []
    for size in range(max_size + 1):
        for m in range(max_marks + 1):
            if size >= staircase(m):
                found.extend(enumerate_marked(size, m))
    return found


def test_parse_marks_by_column(three_marked):
    assert three_marked.marks == {Box(1, 4), Box(2, 3), Box(4, 2)}
    assert three_marked.num_marks() == 3
    assert three_marked.to_dict() == {'diagram': "5,5,4,3,3,1", 'marks': "2,3,5"}


@pytest.mark.parametrize("diagram, marks", [("2,2", "1"), ("2,1", "3"), ("2,1", "a")])
def test_parse_rejects_bad_marks(diagram, marks):
    with pytest.raises(UsageError):
        MarkedDiagram.parse(diagram, marks)


def test_marks_must_be_removable():
    with pytest.raises(ValueError):
        MarkedDiagram(Partition((2, 2)), {Box(0, 1)})


def test_irrelevant_boxes_of_three_marked(three_marked):
    assert irrelevant_boxes_rank1(three_marked) == {
        Box(1, 4), Box(2, 3), Box(4, 2), Box(1, 3), Box(1, 2), Box(2, 2)}


def test_split_three_marked(three_marked):
    pair = split(three_marked)
    assert pair.to_dict() == {'Y1': "5,3,1", 'Y2': "2,2,2", 'm': 3}
    assert merge(pair) == three_marked


def test_merge_places_marked_column_right_of_equal_heights():
    marked = merge(DiagramPair(Partition((2,)), Partition((1,)), 1))
    assert marked.diagram == Partition((2, 2))
    assert marked.marks == {Box(1, 1)}


def test_pair_rejects_long_second_diagram():
    with pytest.raises(ValueError):
        DiagramPair(EMPTY, Partition((1, 1)), 1)


def test_enumerate_marked_empty_range():
    with pytest.raises(EmptyRange):
        enumerate_marked(2, 2)
    assert enumerate_marked(3, 2) == [MarkedDiagram(Partition((2, 1)), {Box(0, 1), Box(1, 0)})]


def test_split_merge_round_trip_and_statistics():
    for marked in all_marked(12, 4):
        pair = split(marked)
        m = marked.num_marks()
        assert merge(pair) == marked
        assert pair.m == m
        assert marked.size() - staircase(m) == pair.size()
        assert marked.diagram.num_columns() == pair.first.num_columns() + m


def test_merge_split_round_trip():
    for total in range(9):
        for m in range(5):
            for pair in enumerate_pairs(total, m):
                marked = merge(pair)
                assert marked.num_marks() == m
                assert split(marked) == pair


def test_enumerate_marked_matches_the_definition():
    for size in range(11):
        for m in range(5):
            if size < staircase(m):
                continue
            expected = [MarkedDiagram(diagram, frozenset(marks))
                        for diagram in enumerate_partitions(size)
                        for marks in combinations(removable_boxes(diagram), m)]
            assert enumerate_marked(size, m) == expected


def test_large_staircase_costs_nothing():
    assert enumerate_marked(staircase(40), 40) == [MarkedDiagram(Partition(tuple(range(40, 0, -1))),
                                                                 {Box(i, 39 - i) for i in range(40)})]
    assert len(enumerate_marked(staircase(30) + 3, 30)) == len(enumerate_pairs(3, 30))


def test_relevant_pair_with_itself_removes_the_irrelevant_boxes():
    for marked in all_marked(12, 4):
        rel_a, rel_b = relevant_pair(marked, marked)
        removed = set(marked.diagram.boxes()) - set(rel_b)
        assert len(rel_b) == marked.size() - staircase(marked.num_marks())
        assert removed == irrelevant_boxes_rank1(marked)


def test_irrelevant_boxes_count_staircase():
    for marked in all_marked(10, 4):
        irrelevant = irrelevant_boxes_rank1(marked)
        assert len(irrelevant) == staircase(marked.num_marks())
        assert marked.marks <= irrelevant


def test_relevant_pair_counts():
    diagrams = all_marked(6, 3)
    for a in diagrams:
        unmarked = a.unmarked()
        for b in diagrams:
            rel_a, rel_b = relevant_pair(a, b)
            lower = sum(1 for s in a.marks for t in b.marks if s.row > t.row)
            assert len(rel_a) == unmarked.size() - lower
            assert len(rel_b) == b.size() - (a.num_marks() * b.num_marks() - lower)
            assert all(unmarked.contains(box) for box in rel_a)
            assert all(b.diagram.contains(box) for box in rel_b)


def test_relevant_pair_of_single_marked_box_is_empty():
    single = MarkedDiagram.parse("1", "1")
    assert relevant_pair(single, single) == ([], [])


def test_fixed_points_rank_one_without_marks_are_partitions():
    for n in range(8):
        points = enumerate_fixed_points(1, 0, n)
        assert len(points) == npartitions(n)


def test_fixed_points_rank_two():
    points = enumerate_fixed_points(2, 1, 1)
    single = MarkedDiagram.parse("1", "1")
    blank = MarkedDiagram(EMPTY)
    assert set(points) == {FixedPoint((single, blank)), FixedPoint((blank, single))}
    assert points == sorted(points, key=FixedPoint.sort_key)
    assert all(p.total_marks() == 1 and p.total_boxes() == 1 for p in points)


def test_fixed_points_respect_mark_bounds():
    points = enumerate_fixed_points(2, 2, 4, mark_bounds=[1, 0])
    assert points
    assert all(p.parts[0].num_marks() >= 1 for p in points)
    assert enumerate_fixed_points(2, 1, 3, mark_bounds=[1, 1]) == []


def test_fixed_points_unsatisfiable_ranges_are_empty():
    assert enumerate_fixed_points(1, 0, -1) == []
    assert enumerate_fixed_points(1, 3, 5) == []
    with pytest.raises(UsageError):
        enumerate_fixed_points(0, 0, 0)
