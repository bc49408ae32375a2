"""
Dense matrices over a prime field: rank and column diagnosis
"""

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from apps.core.exceptions import FieldMismatchError

from .field import FieldElement, PrimeField


@dataclass(frozen=True)
class FieldMatrix:
    entries: Tuple[Tuple[FieldElement, ...], ...]
    cols: int
    field: PrimeField

    def __post_init__(self):
        for row in self.entries:
            if len(row) != self.cols:
                raise FieldMismatchError(f"Row of length {len(row)} in a matrix with {self.cols} columns")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]],
                  cols: Optional[int] = None) -> 'FieldMatrix':
        p = field.p
        entries = tuple(tuple(v % p for v in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(entries, cols, field)

    def transpose(self) -> 'FieldMatrix':
        columns = tuple(zip(*self.entries)) if self.entries else ()
        return FieldMatrix(tuple(tuple(c) for c in columns), self.rows, self.field)

    def without_column(self, index: int) -> 'FieldMatrix':
        return FieldMatrix(tuple(row[:index] + row[index + 1:] for row in self.entries),
                           self.cols - 1, self.field)

    def to_array(self) -> np.ndarray:
        array = np.zeros((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            array[i, :] = row
        return array


def row_reduce(array: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over Z_p; returns (rref, pivot columns)
    """
    a = array.copy()
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        candidates = np.nonzero(a[r:, c] % p)[0]
        if candidates.size == 0:
            continue
        pivot = r + int(candidates[0])
        if pivot != r:
            a[[r, pivot], :] = a[[pivot, r], :]
        a[r, :] = a[r, :] * pow(int(a[r, c]) % p, -1, p) % p
        column = a[:, c] % p
        column[r] = 0
        targets = np.nonzero(column)[0]
        if targets.size:
            factors = column[targets].reshape(-1, 1)
            a[targets, :] = (a[targets, :] - factors * a[r, :].reshape(1, -1)) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: FieldMatrix) -> int:
    """
    Rank over Z_p by Gaussian elimination
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    # Eliminate on the thinner orientation
    if m.rows < m.cols:
        m = m.transpose()
    _, pivots = row_reduce(m.to_array(), m.field.p)
    return len(pivots)


def kernel_support(m: FieldMatrix) -> FrozenSet[int]:
    """
    Columns on which some vector of the right kernel is nonzero
    """
    if m.rows == 0:
        return frozenset(range(m.cols))
    reduced, pivots = row_reduce(m.to_array(), m.field.p)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    support = set(free)
    for i, c in enumerate(pivots):
        if any(reduced[i, f] % m.field.p for f in free):
            support.add(c)
    return frozenset(support)


def deficient_columns(m: FieldMatrix, full_rank_target: int) -> FrozenSet[int]:
    """
    Columns whose removal leaves the rank unchanged.

    A column can go without a rank drop exactly when it lies in the span of
    the others, i.e. when some kernel vector is nonzero on it.
    """
    if rank(m) >= full_rank_target:
        raise ValueError(f"Matrix already reaches rank {full_rank_target}; nothing is deficient")
    return kernel_support(m)
