"""Sparse exact integer matrices and their Smith normal form.

Only the invariant factors are computed, never the transforms. Elimination
runs in two phases: unit pivots first (chosen by a Markowitz-style cost so
fill-in stays low; entries never need division), then whatever remains is
reduced with smallest-absolute-value pivots and Euclidean row/column steps.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence


@dataclass
class IntegerMatrix:
    """Column-sparse integer matrix; ``columns[c]`` maps row -> nonzero value."""

    rows: int
    cols: int
    columns: dict[int, dict[int, int]] = field(default_factory=dict)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        out = cls(rows, cols)
        for r, row in enumerate(dense):
            for c, v in enumerate(row):
                if v:
                    out.columns.setdefault(c, {})[r] = int(v)
        return out

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict[int, int]]) -> "IntegerMatrix":
        out = cls(rows, len(columns))
        for c, col in enumerate(columns):
            col = {r: v for r, v in col.items() if v}
            if col:
                out.columns[c] = col
        return out

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns.values())

    def entry(self, r: int, c: int) -> int:
        return self.columns.get(c, {}).get(r, 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for c, col in self.columns.items():
            for r, v in col.items():
                out[r][c] = v
        return out

    def transpose(self) -> "IntegerMatrix":
        out = IntegerMatrix(self.cols, self.rows)
        for c, col in self.columns.items():
            for r, v in col.items():
                out.columns.setdefault(r, {})[c] = v
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = IntegerMatrix(self.rows, other.cols)
        for c, col in other.columns.items():
            acc: dict[int, int] = {}
            for k, v in col.items():
                for r, w in self.columns.get(k, {}).items():
                    acc[r] = acc.get(r, 0) + w * v
            acc = {r: v for r, v in acc.items() if v}
            if acc:
                out.columns[c] = acc
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.columns) == (other.rows, other.cols, other.columns)

    def is_zero(self) -> bool:
        return not self.columns


@dataclass(frozen=True)
class SmithForm:
    factors: tuple[int, ...]   # nonzero invariant factors d_1 | d_2 | ...

    @property
    def rank(self) -> int:
        return len(self.factors)

    def rank_mod(self, p: int) -> int:
        return sum(1 for d in self.factors if d % p)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def divisibility_chain(diagonal: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of a diagonal matrix: repeatedly swap in (gcd, lcm)."""
    d = sorted(abs(x) for x in diagonal if x)
    ones = [x for x in d if x == 1]
    rest = [x for x in d if x != 1]
    k = len(rest)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    rest.sort()
    return tuple(ones + [x for x in rest if x == 1] + [x for x in rest if x != 1])


class _Elimination:
    def __init__(self, M: IntegerMatrix):
        self.cols: dict[int, dict[int, int]] = {c: dict(col) for c, col in M.columns.items() if col}
        self.rows: dict[int, set[int]] = {}
        for c, col in self.cols.items():
            for r in col:
                self.rows.setdefault(r, set()).add(c)
        self.diagonal: list[int] = []

    def _axpy_col(self, dst: int, src: int, factor: int) -> None:
        """column dst -= factor * column src"""
        d = self.cols[dst]
        rows = self.rows
        for r, v in self.cols[src].items():
            new = d.get(r, 0) - factor * v
            if new:
                if r not in d:
                    rows[r].add(dst)
                d[r] = new
            elif r in d:
                del d[r]
                rows[r].discard(dst)
        if not d:
            del self.cols[dst]

    def _axpy_row(self, dst: int, src: int, factor: int) -> None:
        """row dst -= factor * row src"""
        cols = self.cols
        drow = self.rows[dst]
        for c in list(self.rows[src]):
            col = cols[c]
            new = col.get(dst, 0) - factor * col[src]
            if new:
                if dst not in col:
                    drow.add(c)
                col[dst] = new
            elif dst in col:
                del col[dst]
                drow.discard(c)
                if not col:
                    del cols[c]

    def _remove_pivot(self, r: int, c: int) -> None:
        col = self.cols.pop(c)
        for rr in col:
            self.rows[rr].discard(c)
        for cc in self.rows.pop(r):
            cc_col = self.cols[cc]
            del cc_col[r]
            if not cc_col:
                del self.cols[cc]

    def unit_phase(self) -> None:
        cols, rows = self.cols, self.rows
        heap = [(len(col), c) for c, col in cols.items()]
        heapq.heapify(heap)
        while heap:
            k, c = heapq.heappop(heap)
            col = cols.get(c)
            if col is None:
                continue
            if len(col) != k:
                heapq.heappush(heap, (len(col), c))
                continue
            best = None
            for r, v in col.items():
                if v == 1 or v == -1:
                    cost = len(rows[r])
                    if best is None or cost < best[0]:
                        best = (cost, r)
            if best is None:
                continue
            r = best[1]
            v = col[r]
            touched = [c2 for c2 in rows[r] if c2 != c]
            for c2 in touched:
                self._axpy_col(c2, c, cols[c2][r] * v)
            # column ops have cleared row r except at the pivot
            self._remove_pivot(r, c)
            self.diagonal.append(1)
            for c2 in touched:
                if c2 in cols:
                    heapq.heappush(heap, (len(cols[c2]), c2))

    def general_phase(self) -> None:
        cols, rows = self.cols, self.rows
        while cols:
            _, r, c = min((abs(v), r, c) for c, col in cols.items() for r, v in col.items())
            while True:
                p = cols[c][r]
                # clear column c with row operations
                for r2 in [x for x in cols[c] if x != r]:
                    self._axpy_row(r2, r, cols[c][r2] // p)
                col = cols[c]
                if len(col) > 1:
                    r = min((abs(v), rr) for rr, v in col.items())[1]
                    continue
                # clear row r with column operations; column c is now just the pivot
                for c2 in [x for x in rows[r] if x != c]:
                    self._axpy_col(c2, c, cols[c2][r] // p)
                if len(rows[r]) > 1:
                    c = min((abs(cols[cc][r]), cc) for cc in rows[r])[1]
                    continue
                self.diagonal.append(abs(p))
                self._remove_pivot(r, c)
                break


def smith_normal_form(M: IntegerMatrix) -> SmithForm:
    """Nonzero invariant factors of ``M`` in divisibility order."""
    e = _Elimination(M)
    e.unit_phase()
    e.general_phase()
    return SmithForm(divisibility_chain(e.diagonal))


def smith_from_dense(dense: Sequence[Sequence[int]]) -> SmithForm:
    return smith_normal_form(IntegerMatrix.from_dense(dense))
