"""Finite quandles stored as dense operation tables.

Elements are the integers ``0..size-1``; ``op[x][y]`` is ``x |> y`` and
``inv_op[z][y]`` is the unique ``x`` with ``x |> y == z``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .caps import check
from .errors import InputError

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    axiom: Optional[int] = None
    witness: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "pass"
        names = {1: "idempotence", 2: "right translations bijective", 3: "self-distributivity"}
        return f"axiom {self.axiom} ({names[self.axiom]}) fails at {self.witness}"


def _normalize_table(table: Sequence[Sequence[int]]) -> Table:
    rows = [tuple(int(v) for v in row) for row in table]
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InputError(f"table row {i} has length {len(row)}, expected {n}")
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise InputError(f"table entry [{i}][{j}] = {v} out of range 0..{n - 1}")
    return tuple(rows)


def check_axioms(table: Sequence[Sequence[int]]) -> AxiomReport:
    """Check the three quandle axioms, reporting the first failure.

    Axioms are tried in the order 1, 2, 3 and witnesses are the
    lexicographically least failing tuple: ``(x,)`` for idempotence,
    ``(y, x1, x2)`` with ``x1 < x2`` colliding under ``- |> y`` for
    bijectivity, and ``(x, y, z)`` for self-distributivity.
    """
    t = _normalize_table(table)
    n = len(t)
    for x in range(n):
        if t[x][x] != x:
            return AxiomReport(False, 1, (x,))
    for y in range(n):
        seen: dict[int, int] = {}
        for x in range(n):
            z = t[x][y]
            if z in seen:
                return AxiomReport(False, 2, (y, seen[z], x))
            seen[z] = x
    if n:
        a = np.asarray(t, dtype=np.int64)
        cols = np.arange(n)
        for x in range(n):
            lhs = a[a[x][:, None], cols[None, :]]          # (x|>y)|>z, indexed [y, z]
            rhs = a[a[x][None, :], a]                      # (x|>z)|>(y|>z)
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                y, z = bad[0]
                return AxiomReport(False, 3, (x, int(y), int(z)))
    return AxiomReport(True)


@dataclass(frozen=True)
class FiniteQuandle:
    """Immutable quandle on ``0..size-1``.

    Construction validates the table shape and right-translation
    bijectivity (needed for ``inv_op``); pass ``validate=True`` to
    :meth:`from_table` to also enforce idempotence and self-distributivity.
    """

    op: Table
    inv_op: Table = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.op)

    def __len__(self) -> int:
        return len(self.op)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], validate: bool = True) -> "FiniteQuandle":
        t = _normalize_table(table)
        if validate:
            report = check_axioms(t)
            if not report:
                raise InputError(f"not a quandle: {report.describe()}")
        n = len(t)
        inv = [[-1] * n for _ in range(n)]
        for y in range(n):
            for x in range(n):
                z = t[x][y]
                if inv[z][y] != -1:
                    raise InputError(f"right translation by {y} is not a bijection")
                inv[z][y] = x
        return cls(t, tuple(tuple(r) for r in inv))

    @classmethod
    def from_function(cls, size: int, fn: Callable[[int, int], int], validate: bool = True) -> "FiniteQuandle":
        return cls.from_table([[fn(x, y) for y in range(size)] for x in range(size)], validate)

    def relabel(self, perm: Sequence[int]) -> "FiniteQuandle":
        """Isomorphic copy where element ``x`` is renamed ``perm[x]``."""
        n = self.size
        if sorted(perm) != list(range(n)):
            raise InputError("relabeling must be a permutation of the elements")
        new = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                new[perm[x]][perm[y]] = perm[self.op[x][y]]
        return FiniteQuandle.from_table(new, validate=False)

    def translation(self, y: int) -> tuple[int, ...]:
        """The permutation ``x -> x |> y``."""
        return tuple(row[y] for row in self.op)


def trivial_quandle(n: int) -> FiniteQuandle:
    return FiniteQuandle.from_function(n, lambda x, y: x)


def dihedral_quandle(r: int) -> FiniteQuandle:
    """The dihedral quandle on Z/r with ``x |> y = 2y - x``."""
    if r < 1:
        raise InputError(f"dihedral quandle needs r >= 1, got {r}")
    return FiniteQuandle.from_function(r, lambda x, y: (2 * y - x) % r)


@dataclass(frozen=True)
class QuandleOrbits:
    orbit_count: int
    orbit_of: tuple[int, ...]

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.orbit_count)]
        for x, k in enumerate(self.orbit_of):
            out[k].append(x)
        return out


def orbits(q: FiniteQuandle) -> QuandleOrbits:
    """Orbits of X acting on itself by right translations.

    Orbit indices are assigned in order of each orbit's least element.
    """
    n = q.size
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(n):
        for z in q.op[x]:
            rx, rz = find(x), find(z)
            if rx != rz:
                parent[max(rx, rz)] = min(rx, rz)
    label: dict[int, int] = {}
    orbit_of = []
    for x in range(n):
        r = find(x)
        if r not in label:
            label[r] = len(label)
        orbit_of.append(label[r])
    return QuandleOrbits(len(label), tuple(orbit_of))


@dataclass(frozen=True)
class InnGroup:
    order: int
    generators: tuple[tuple[int, ...], ...]


def inn_group(q: FiniteQuandle, cap: int = 10**6) -> InnGroup:
    """Order of the group generated by all right translations, by closure.

    Raises :class:`~fiquandle.errors.ResourceError` once more than ``cap``
    elements have been found.
    """
    n = q.size
    gens = tuple(sorted({q.translation(y) for y in range(n)}))
    identity = tuple(range(n))
    seen = {identity}
    frontier = deque([identity])
    while frontier:
        g = frontier.popleft()
        for s in gens:
            h = tuple(s[i] for i in g)
            if h not in seen:
                seen.add(h)
                check("Inn(X) closure", len(seen), cap)
                frontier.append(h)
    return InnGroup(len(seen), gens)


def permutation_order(p: Sequence[int]) -> int:
    from math import lcm

    seen = [False] * len(p)
    out = 1
    for i in range(len(p)):
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length:
            out = lcm(out, length)
    return out
