"""Primitive partitions, symmetric-group class quandles and the FI action.

A permutation of ``{0..n-1}`` is a tuple ``p`` with ``p[i]`` the image of
``i``. Composition is right to left: ``(s * t)(i) = s(t(i))``, and the
conjugation quandle uses ``x |> y = y x y^-1``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from math import comb, factorial, prod
from typing import Iterable, Iterator, Sequence

from .caps import check
from .errors import InputError, ParseError
from .quandle import FiniteQuandle

Permutation = tuple[int, ...]


@dataclass(frozen=True, order=True)
class Partition:
    """A primitive partition: weakly decreasing parts, each at least 2."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        for p in parts:
            if p == 1:
                raise InputError(
                    f"partition {parts} has a part equal to 1; only primitive "
                    "partitions (no 1-cycles) index FI-families of classes")
            if p < 1:
                raise InputError(f"partition parts must be positive, got {p}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class ClassFamilySpec:
    """A finite nonempty set of distinct primitive partitions."""

    partitions: tuple[Partition, ...]

    def __post_init__(self):
        parts = tuple(self.partitions)
        if not parts:
            raise InputError("class family must contain at least one partition")
        if len(set(parts)) != len(parts):
            raise InputError("class family has duplicate partitions")
        for lam in parts:
            if not lam.parts:
                raise InputError("the empty partition indexes the identity class, which is not allowed")
        object.__setattr__(self, "partitions", tuple(sorted(parts)))

    @classmethod
    def of(cls, *partitions: Iterable[int]) -> "ClassFamilySpec":
        return cls(tuple(Partition(tuple(p)) for p in partitions))

    @property
    def max_weight(self) -> int:
        return max(lam.weight for lam in self.partitions)

    def __str__(self) -> str:
        return "|".join(str(lam) for lam in self.partitions)


_PART_RE = re.compile(r"\s*(-?\d+)\s*")


def parse_family(text: str) -> ClassFamilySpec:
    """Parse ``"2,2|3"`` into the family {(2,2), (3)}."""
    partitions = []
    offset = 0
    for chunk in text.split("|"):
        parts = []
        pos = offset
        for token in chunk.split(","):
            m = _PART_RE.fullmatch(token)
            if not m:
                raise ParseError(f"bad partition part {token.strip()!r}", pos)
            value = int(m.group(1))
            if value == 1:
                raise ParseError(
                    "part 1 is not allowed: partitions must be primitive "
                    "(1-cycles are added automatically when n grows)", pos)
            if value < 1:
                raise ParseError(f"partition parts must be >= 2, got {value}", pos)
            parts.append(value)
            pos += len(token) + 1
        partitions.append(Partition(tuple(parts)))
        offset += len(chunk) + 1
    if len(set(partitions)) != len(partitions):
        raise ParseError("duplicate partition in family", 0)
    return ClassFamilySpec(tuple(partitions))


def compose(s: Sequence[int], t: Sequence[int]) -> Permutation:
    return tuple(s[i] for i in t)


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def conjugate(x: Sequence[int], y: Sequence[int]) -> Permutation:
    """``y x y^-1``."""
    out = [0] * len(x)
    for j in range(len(x)):
        out[y[j]] = y[x[j]]
    return tuple(out)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    """Cycle lengths in decreasing order, fixed points included."""
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def primitive_type(p: Sequence[int]) -> tuple[int, ...]:
    return tuple(c for c in cycle_type(p) if c > 1)


def centralizer_order(cycle_lengths: Sequence[int]) -> int:
    counts = Counter(cycle_lengths)
    return prod(k**m * factorial(m) for k, m in counts.items())


def class_size_poly(lam: Partition, n: int) -> int:
    """``|c^n_lam| = C(n, m) * |c_lam|`` where ``m = |lam|``."""
    m = lam.weight
    if n < m:
        return 0
    return comb(n, m) * (factorial(m) // centralizer_order(lam.parts))


def family_size(spec: ClassFamilySpec, n: int) -> int:
    return sum(class_size_poly(lam, n) for lam in spec.partitions)


def _with_cycle_type(n: int, lengths: Counter) -> Iterator[Permutation]:
    # The least unplaced point opens the next cycle; this visits each
    # permutation of the given type exactly once.
    images = [-1] * n

    def rec(free: list[int]) -> Iterator[Permutation]:
        if not free:
            yield tuple(images)
            return
        head, rest = free[0], free[1:]
        for length in sorted(k for k, m in lengths.items() if m > 0):
            lengths[length] -= 1
            for tail in itertools.permutations(rest, length - 1):
                cycle = (head,) + tail
                for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                    images[a] = b
                remaining = [v for v in rest if v not in tail]
                yield from rec(remaining)
            lengths[length] += 1
        images[head] = -1

    yield from rec(list(range(n)))


def class_members(spec: ClassFamilySpec, n: int, cap: int = 10**6) -> list[Permutation]:
    """All permutations of ``{0..n-1}`` in ``c^n_spec``, sorted lexicographically."""
    check(f"class c^{n}_{{{spec}}}", family_size(spec, n), cap)
    out: list[Permutation] = []
    for lam in spec.partitions:
        if n < lam.weight:
            continue
        lengths = Counter(lam.parts)
        lengths[1] += n - lam.weight
        out.extend(_with_cycle_type(n, lengths))
    out.sort()
    return out


@dataclass(frozen=True)
class ClassQuandle:
    """A conjugation quandle together with its element dictionary."""

    quandle: FiniteQuandle
    elements: tuple
    index: dict

    def __len__(self) -> int:
        return len(self.elements)


def conjugation_quandle(elements: Sequence, conj) -> ClassQuandle:
    """Quandle on ``elements`` (closed under ``conj``) with ``x |> y = conj(x, y)``."""
    elements = tuple(elements)
    index = {e: i for i, e in enumerate(elements)}
    table = []
    for x in elements:
        row = []
        for y in elements:
            z = conj(x, y)
            if z not in index:
                raise InputError("element set is not closed under conjugation")
            row.append(index[z])
        table.append(row)
    return ClassQuandle(FiniteQuandle.from_table(table, validate=False), elements, index)


def class_quandle(spec: ClassFamilySpec, n: int, cap: int = 10**6) -> ClassQuandle:
    return conjugation_quandle(class_members(spec, n, cap), conjugate)


@dataclass(frozen=True)
class FIMorphism:
    """An injection ``{0..n-1} -> {0..m-1}``."""

    n: int
    m: int
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != self.n:
            raise InputError(f"FI morphism from {self.n} points needs {self.n} images")
        if self.n > self.m:
            raise InputError(f"no injection from {self.n} points into {self.m}")
        if len(set(images)) != len(images) or any(not 0 <= v < self.m for v in images):
            raise InputError(f"FI morphism images {images} are not an injection into {self.m} points")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "FIMorphism":
        return cls(n, n, tuple(range(n)))

    @classmethod
    def inclusion(cls, n: int, m: int) -> "FIMorphism":
        return cls(n, m, tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def then(self, g: "FIMorphism") -> "FIMorphism":
        """The composite ``g o self``."""
        if g.n != self.m:
            raise InputError("morphisms are not composable")
        return FIMorphism(self.n, g.m, tuple(g.images[i] for i in self.images))


def all_injections(n: int, m: int) -> Iterator[FIMorphism]:
    for images in itertools.permutations(range(m), n):
        yield FIMorphism(n, m, images)


def fi_pushforward(f: FIMorphism, p: Sequence[int]) -> Permutation:
    """``f o p o f^-1`` on the image of ``f``, identity elsewhere."""
    if len(p) != f.n:
        raise InputError(f"permutation on {len(p)} points does not match FI source {f.n}")
    out = list(range(f.m))
    for i in range(f.n):
        out[f.images[i]] = f.images[p[i]]
    return tuple(out)
