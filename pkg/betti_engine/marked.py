"""
Young diagrams with marked removable boxes, the relevant/irrelevant box
rules, the bijection with pairs of diagrams, and fixed-point enumeration.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .diagram import Box, Partition, enumerate_partitions, removable_boxes
from .errors import EmptyRange, InternalInconsistency, UsageError

logger = logging.getLogger(__name__)


def staircase(m):
    """Fewest boxes a diagram with m removable boxes can have."""
    return m * (m + 1) // 2


@dataclass(frozen=True)
class MarkedDiagram:
    diagram: Partition
    marks: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'marks', frozenset(self.marks))
        removable = set(removable_boxes(self.diagram))
        stray = [box for box in self.marks if box not in removable]
        if stray:
            raise ValueError(f"marked boxes {sorted(stray)} are not removable in {self.diagram}")

    @classmethod
    def parse(cls, diagram_text, marks_text):
        """
        Diagram in column-height format plus 1-based marked column indices,
        e.g. ("5,5,4,3,3,1", "2,3,5").
        """
        diagram = Partition.parse(diagram_text)
        marks = set()
        for part in (marks_text or '').split(','):
            part = part.strip()
            if not part:
                continue
            try:
                col = int(part) - 1
            except ValueError:
                raise UsageError(f"not a column index: {part!r}")
            if not 0 <= col < diagram.num_columns():
                raise UsageError(f"column {part} is outside the diagram {diagram}")
            marks.add(Box(col, diagram.height(col) - 1))
        try:
            return cls(diagram, frozenset(marks))
        except ValueError as e:
            raise UsageError(str(e))

    def num_marks(self):
        return len(self.marks)

    def size(self):
        return self.diagram.size()

    def unmarked(self):
        """Y \\ S as a diagram."""
        return self.diagram.without(self.marks)

    def sorted_marks(self):
        return sorted(self.marks)

    def sort_key(self):
        return (self.diagram.columns, tuple((b.col, b.row) for b in self.sorted_marks()))

    def format_marks(self):
        return ','.join(str(b.col + 1) for b in self.sorted_marks())

    def to_dict(self):
        return {'diagram': self.diagram.format(), 'marks': self.format_marks()}


@dataclass(frozen=True)
class DiagramPair:
    first: Partition
    second: Partition
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"m must be nonnegative, got {self.m}")
        if self.second.num_columns() > self.m:
            raise ValueError(f"{self.second} has more than m={self.m} columns")

    def size(self):
        return self.first.size() + self.second.size()

    def to_dict(self):
        return {'Y1': self.first.format(), 'Y2': self.second.format(), 'm': self.m}


@dataclass(frozen=True)
class FixedPoint:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, 'parts', tuple(self.parts))

    @property
    def rank(self):
        return len(self.parts)

    def total_marks(self):
        return sum(p.num_marks() for p in self.parts)

    def total_boxes(self):
        return sum(p.size() for p in self.parts)

    def sort_key(self):
        return tuple(p.sort_key() for p in self.parts)

    def to_dict(self):
        return {'parts': [p.to_dict() for p in self.parts]}


def irrelevant_boxes_rank1(marked):
    """
    Boxes whose column top and row end are both marked. The marked boxes
    themselves are among them.
    """
    diagram, marks = marked.diagram, marked.marks
    found = set()
    for box in diagram.boxes():
        top = Box(box.col, diagram.height(box.col) - 1)
        row_end = Box(diagram.row_length(box.row) - 1, box.row)
        if top in marks and row_end in marks:
            found.add(box)
    return found


def relevant_pair(a, b):
    """
    Relevant boxes of ``Y_a \\ S_a`` and of ``Y_b`` for the Ext-group from
    slot ``a`` to slot ``b``.

    Every pair of marks (s, s') in S_a x S_b removes one box: the box in the
    row of s and the column of s' from Y_b when s' sits at least as high as
    s, otherwise the box in the row of s' and the column of s from
    Y_a \\ S_a.
    """
    unmarked = a.unmarked()
    rel_a = Counter(unmarked.boxes())
    rel_b = Counter(b.diagram.boxes())
    for s, s_prime in product(a.sorted_marks(), b.sorted_marks()):
        if s.row <= s_prime.row:
            target, where, name = Box(s_prime.col, s.row), rel_b, 'Y_b'
        else:
            target, where, name = Box(s.col, s_prime.row), rel_a, 'Y_a \\ S_a'
        if where[target] <= 0:
            raise InternalInconsistency(
                f"pair ({s}, {s_prime}) designates {target}, which is not left in {name}"
                f" (a={a.to_dict()}, b={b.to_dict()})")
        where[target] -= 1
    return sorted(rel_a.elements()), sorted(rel_b.elements())


def split(marked):
    """
    Forward bijection: (Y, S) -> (Y1, Y2, m). Y1 keeps the unmarked columns,
    the k-th tallest marked column (0-based) of height h contributes a
    column of height h - (m - k) to Y2.
    """
    diagram = marked.diagram
    marked_cols = {box.col for box in marked.marks}
    first = Partition(tuple(h for i, h in enumerate(diagram.columns) if i not in marked_cols))
    heights = sorted((diagram.height(c) for c in marked_cols), reverse=True)
    m = len(heights)
    second = Partition(tuple(d for d in (h - (m - k) for k, h in enumerate(heights)) if d > 0))
    return DiagramPair(first, second, m)


def merge(pair):
    """
    Inverse of :func:`split`. A marked column goes to the right of every
    unmarked column of the same height so that its top stays removable.
    """
    m = pair.m
    marked_heights = [pair.second.height(k) + (m - k) for k in range(m)]
    # (height, is_marked) sorted tallest first, unmarked before marked on ties
    columns = [(h, 0) for h in pair.first.columns] + [(h, 1) for h in marked_heights]
    columns.sort(key=lambda c: (-c[0], c[1]))
    diagram = Partition(tuple(h for h, _ in columns))
    marks = frozenset(Box(i, h - 1) for i, (h, flag) in enumerate(columns) if flag)
    assert len(marks) == m
    return MarkedDiagram(diagram, marks)


@lru_cache(maxsize=1024)
def _marked_tuple(total_boxes, m):
    # the staircase under the marks is forced, only the rest is enumerated
    found = [merge(pair) for pair in enumerate_pairs(total_boxes - staircase(m), m)]
    found.sort(key=MarkedDiagram.sort_key)
    return tuple(found)


def enumerate_marked(total_boxes, m):
    """All (Y, S) with |Y| = total_boxes and |S| = m."""
    if m < 0 or total_boxes < staircase(m):
        raise EmptyRange(f"no diagram with {total_boxes} boxes has {m} removable boxes")
    result = list(_marked_tuple(total_boxes, m))
    logger.debug("enumerated %d marked diagrams (boxes=%d, m=%d)", len(result), total_boxes, m)
    return result


def compositions(total, parts, lower=None):
    """Ordered r-tuples of integers >= lower[i] summing to total."""
    lower = lower or [0] * parts
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= lower[0]:
            yield (total,)
        return
    for first in range(lower[0], total - sum(lower[1:]) + 1):
        for rest in compositions(total - first, parts - 1, lower[1:]):
            yield (first,) + rest


def _slot_options(size, marks):
    if marks < 0 or size < staircase(marks):
        return ()
    return _marked_tuple(size, marks)


def enumerate_fixed_points(r, c1c, box_budget, mark_bounds=None):
    """
    Torus fixed points: r-tuples of marked diagrams with ``c1c`` marks and
    ``box_budget`` boxes in total, slot alpha carrying at least
    ``mark_bounds[alpha]`` marks.
    """
    if r < 1:
        raise UsageError(f"rank must be positive, got {r}")
    bounds = [max(0, b) for b in (mark_bounds or [0] * r)]
    if len(bounds) != r:
        raise UsageError(f"expected {r} mark bounds, got {len(bounds)}")
    if box_budget < 0 or c1c < sum(bounds):
        return []
    points = []
    for marks in compositions(c1c, r, bounds):
        minimum = sum(staircase(k) for k in marks)
        if minimum > box_budget:
            continue
        for sizes in compositions(box_budget, r):
            options = [_slot_options(s, k) for s, k in zip(sizes, marks)]
            if any(not opt for opt in options):
                continue
            points.extend(FixedPoint(parts) for parts in product(*options))
    points.sort(key=FixedPoint.sort_key)
    logger.debug("enumerated %d fixed points (r=%d, c1c=%d, boxes=%d)", len(points), r, c1c, box_budget)
    return points


def enumerate_pairs(total, m):
    """All (Y1, Y2) with |Y1| + |Y2| = total and Y2 of at most m columns."""
    pairs = []
    for first_size in range(total + 1):
        seconds = enumerate_partitions(total - first_size, max_columns=m)
        for first in enumerate_partitions(first_size):
            pairs.extend(DiagramPair(first, second, m) for second in seconds)
    return pairs
