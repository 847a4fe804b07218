"""
Young diagrams stored by column heights.

A box ``(col, row)`` sits in column ``col`` (counted from the left, 0-based)
and row ``row`` (counted from the bottom). It corresponds to the weight
``t1^-col t2^-row``. The column count of a diagram is its ``l(Y)``.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

from .errors import UsageError

logger = logging.getLogger(__name__)

MAX_PARTITION_COUNT = 2000


@dataclass(frozen=True, order=True)
class Box:
    col: int
    row: int

    def __post_init__(self):
        if self.col < 0 or self.row < 0:
            raise ValueError(f"box coordinates must be nonnegative: {self}")


@dataclass(frozen=True, order=True)
class Partition:
    columns: tuple = ()

    def __post_init__(self):
        columns = tuple(self.columns)
        object.__setattr__(self, 'columns', columns)
        if any((not isinstance(h, int)) or h < 1 for h in columns):
            raise ValueError(f"column heights must be positive integers: {columns}")
        if any(columns[i] < columns[i + 1] for i in range(len(columns) - 1)):
            raise ValueError(f"column heights must be weakly decreasing: {columns}")

    @classmethod
    def parse(cls, text):
        """
        Reads the comma separated column heights format ("5,5,4,3,3,1").
        The empty string is the empty diagram.
        """
        text = (text or '').strip()
        if not text:
            return cls(())
        try:
            heights = tuple(int(part) for part in text.split(','))
        except ValueError:
            raise UsageError(f"not a list of column heights: {text!r}")
        try:
            return cls(heights)
        except ValueError as e:
            raise UsageError(str(e))

    def format(self):
        return ','.join(str(h) for h in self.columns)

    def __str__(self):
        return self.format()

    def size(self):
        return sum(self.columns)

    def num_columns(self):
        return len(self.columns)

    def height(self, col):
        return self.columns[col] if 0 <= col < len(self.columns) else 0

    def row_length(self, row):
        # columns are sorted, so the ones taller than `row` form a prefix
        count = 0
        for h in self.columns:
            if h <= row:
                break
            count += 1
        return count

    def contains(self, box):
        return box.row < self.height(box.col)

    def boxes(self):
        return [Box(col, row) for col, h in enumerate(self.columns) for row in range(h)]

    def without(self, boxes):
        """The diagram with the given removable boxes taken off."""
        heights = list(self.columns)
        for box in boxes:
            if heights[box.col] != box.row + 1:
                raise ValueError(f"{box} is not a column top of {self}")
            heights[box.col] -= 1
        return Partition(tuple(h for h in heights if h > 0))


EMPTY = Partition(())


def conjugate(diagram):
    """Transpose: rows become columns."""
    return Partition(tuple(diagram.row_length(row) for row in range(diagram.height(0))))


def removable_boxes(diagram):
    """
    Column tops whose removal leaves a Young diagram, left to right.
    """
    cols = diagram.columns
    return [Box(i, h - 1) for i, h in enumerate(cols)
            if i == len(cols) - 1 or h > cols[i + 1]]


def arm_leg(reference, box):
    """
    Arm (boxes above ``box`` in its column) and leg (boxes to its right in
    its row) measured in ``reference``. The box need not lie in the
    reference diagram, so both values may be negative.
    """
    arm = reference.height(box.col) - box.row - 1
    leg = reference.row_length(box.row) - box.col - 1
    return arm, leg


def _partition_tuples(total, max_part, max_len, memo):
    key = (total, max_part, max_len)
    if key in memo:
        return memo[key]
    if total == 0:
        found = [()]
    elif max_len == 0:
        found = []
    else:
        found = [(first,) + rest
                 for first in range(1, min(total, max_part) + 1)
                 for rest in _partition_tuples(total - first, first, max_len - 1, memo)]
    memo[key] = found
    return found


@lru_cache(maxsize=256)
def _partitions(n, max_len):
    return tuple(Partition(cols) for cols in _partition_tuples(n, n, max_len, {}))


def enumerate_partitions(n, max_columns=None):
    """
    All partitions of ``n`` (at most ``max_columns`` columns if given), in
    ascending lexicographic order of their column sequences.
    """
    if max_columns is not None and max_columns < 0:
        raise UsageError(f"max_columns must be nonnegative, got {max_columns}")
    if n < 0:
        return []
    max_len = n if max_columns is None else min(n, max_columns)
    result = list(_partitions(n, max_len))
    logger.debug("enumerated %d partitions of %d (max_columns=%s)", len(result), n, max_columns)
    return result


def partition_counts(n):
    """p(0), ..., p(n) by the usual coin-change recursion."""
    if n > MAX_PARTITION_COUNT:
        raise UsageError(f"partition numbers are tabulated up to {MAX_PARTITION_COUNT}, got {n}")
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return table
