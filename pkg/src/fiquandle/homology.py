"""Rack and quandle homology.

Chains in degree i are formal sums of i-tuples of quandle elements, and

    d(x_1..x_i) = sum_{j>=2} (-1)^j [ (x_1..^x_j..x_i)
                                     - (x_1|>x_j, .., x_{j-1}|>x_j, x_{j+1}..x_i) ].

``C_0`` is taken to be zero, so ``H_1 = C_1 / im d_2``. The quandle complex
is the quotient by tuples with ``x_j == x_{j+1}``; it is built directly on
the non-degenerate tuples. The degenerate subcomplex is available as
theory ``"degenerate"``, mainly for the splitting check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional, Sequence, Union

import numpy as np

from .caps import check, default_caps
from .errors import ConsistencyError, InputError
from .quandle import FiniteQuandle
from .snf import IntegerMatrix, SmithForm, smith_normal_form

THEORIES = ("rack", "quandle", "degenerate")


def _check_theory(theory: str) -> None:
    if theory not in THEORIES:
        raise InputError(f"theory must be one of {THEORIES}, got {theory!r}")


def _is_degenerate(t: Sequence[int]) -> bool:
    return any(a == b for a, b in zip(t, t[1:]))


def _decode(code: int, size: int, i: int) -> tuple[int, ...]:
    out = [0] * i
    for k in range(i - 1, -1, -1):
        code, out[k] = divmod(code, size)
    return tuple(out)


def _encode(t: Sequence[int], size: int) -> int:
    code = 0
    for x in t:
        code = code * size + x
    return code


def basis_size(size: int, i: int, theory: str) -> int:
    if i <= 0:
        return 0
    rack = size**i
    nondeg = size * (size - 1) ** (i - 1) if size else 0
    return {"rack": rack, "quandle": nondeg, "degenerate": rack - nondeg}[theory]


@dataclass(frozen=True)
class ChainBasis:
    """Ordered basis of C_i: tuples in lexicographic order."""

    degree: int
    theory: str
    size: int  # |X|
    codes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.codes)

    def tuples(self) -> list[tuple[int, ...]]:
        return [_decode(c, self.size, self.degree) for c in self.codes]

    @property
    def index(self) -> dict[int, int]:
        return _index(self)


@lru_cache(maxsize=64)
def _index(b: ChainBasis) -> dict[int, int]:
    return {c: k for k, c in enumerate(b.codes)}


@lru_cache(maxsize=64)
def _chain_basis(size: int, i: int, theory: str) -> ChainBasis:
    if i <= 0:
        return ChainBasis(i, theory, size, ())
    total = size**i
    if theory == "rack":
        codes = tuple(range(total))
    else:
        want = theory == "degenerate"
        codes = tuple(c for c in range(total) if _is_degenerate(_decode(c, size, i)) == want)
    return ChainBasis(i, theory, size, codes)


def chain_basis(q: FiniteQuandle, i: int, theory: str = "rack", cap: Optional[int] = None) -> ChainBasis:
    _check_theory(theory)
    cap = default_caps().basis if cap is None else cap
    check(f"{theory} chain basis in degree {i}", basis_size(q.size, i, theory), cap)
    return _chain_basis(q.size, i, theory)


def rack_boundary(q: FiniteQuandle, t: Sequence[int]) -> dict[tuple[int, ...], int]:
    """Boundary of a single tuple in the rack complex, zero terms dropped."""
    out: dict[tuple[int, ...], int] = {}
    op = q.op
    i = len(t)
    for j in range(1, i):  # 0-based j is the 1-based index j+1
        sign = 1 if (j + 1) % 2 == 0 else -1
        xj = t[j]
        face = tuple(t[:j]) + tuple(t[j + 1:])
        moved = tuple(op[x][xj] for x in t[:j]) + tuple(t[j + 1:])
        out[face] = out.get(face, 0) + sign
        out[moved] = out.get(moved, 0) - sign
    return {k: v for k, v in out.items() if v}


def _columns(q: FiniteQuandle, i: int, theory: str, codes: Sequence[int]) -> list[dict[int, int]]:
    """Boundary columns of the given degree-i tuple codes, indexed by the
    position of each term in the degree-(i-1) basis."""
    n = q.size
    if i == 1:
        return [{} for _ in codes]
    tgt_index = _chain_basis(n, i - 1, theory).index if theory != "rack" else None
    op = q.op
    powers = [n ** (i - 2 - k) for k in range(i - 1)]  # place values in degree i-1
    columns = []
    for code in codes:
        t = _decode(code, n, i)
        acc: dict[int, int] = {}
        for j in range(1, i):
            sign = 1 if (j + 1) % 2 == 0 else -1
            xj = t[j]
            face = t[:j] + t[j + 1:]
            moved = tuple(op[x][xj] for x in t[:j]) + t[j + 1:]
            for tup, s in ((face, sign), (moved, -sign)):
                c = sum(p * x for p, x in zip(powers, tup))
                acc[c] = acc.get(c, 0) + s
        col: dict[int, int] = {}
        for c, v in acc.items():
            if not v:
                continue
            if tgt_index is None:
                col[c] = v
                continue
            k = tgt_index.get(c)
            if k is not None:
                col[k] = v
            elif theory == "degenerate":
                raise ConsistencyError(
                    f"boundary of degenerate {t} has non-degenerate term {_decode(c, n, i - 1)}")
            # otherwise a degenerate term, which vanishes in the quotient
        columns.append(col)
    return columns


@lru_cache(maxsize=128)
def _boundary(q: FiniteQuandle, i: int, theory: str) -> IntegerMatrix:
    src = _chain_basis(q.size, i, theory)
    rows = len(_chain_basis(q.size, i - 1, theory))
    return IntegerMatrix.from_columns(rows, _columns(q, i, theory, src.codes))


def boundary_matrix(q: FiniteQuandle, i: int, theory: str = "rack", cap: Optional[int] = None) -> IntegerMatrix:
    """Matrix of ``d_i : C_i -> C_{i-1}`` in the :class:`ChainBasis` orders.

    For ``i == 1`` the target is ``C_0 = 0`` and the matrix has no rows.
    """
    if i < 1:
        raise InputError(f"boundary degree must be >= 1, got {i}")
    chain_basis(q, i, theory, cap)
    return _boundary(q, i, theory)


# ------------------------------------------------------------ reduction
#
# Write a tuple as s.y with y its last entry. Then
#     d(s.y) = (d s).y + (-1)^(i+1) (s - s*y),
# where s*y applies (-|>y) to every entry. If y is not the last entry of s,
# the coefficient of s is +-1, and every other term either ends in y or is
# s*y. Fix a set A of "anchor" elements and keep all tuples ending in A.
# Walking backwards from those (s = t*y^-1 for anchors y) gives an order in
# which each reached tuple s has a witness s.y whose boundary expresses d(s)
# through tuples kept or reached earlier. Reached tuples are therefore
# redundant generators of the image of d, and their columns can be dropped.
# Dually, for a reached (i-2)-tuple u with witness y the (i-1)-tuple u.y is
# paired with u by a unitriangular block of d_{i-1}; such rows can be dropped
# from d_i without changing its nonzero invariant factors.

def _uncovered(q: FiniteQuandle, anchors: Sequence[int]) -> int:
    """Orbits of the group generated by translations by ``anchors`` that
    contain no anchor."""
    parent = list(range(q.size))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in anchors:
        for x in range(q.size):
            parent[find(x)] = find(q.op[x][e])
    covered = {find(e) for e in anchors}
    return len({find(x) for x in range(q.size)} - covered)


@lru_cache(maxsize=64)
def anchors(q: FiniteQuandle) -> tuple[int, ...]:
    """A small set of elements from which every element is reachable by
    translations by the set itself (greedy choice)."""
    chosen: list[int] = []
    while _uncovered(q, chosen):
        best = min((_uncovered(q, chosen + [x]), x) for x in range(q.size) if x not in chosen)
        chosen.append(best[1])
    return tuple(chosen)


@dataclass(frozen=True)
class _Collapse:
    keep: tuple[int, ...]          # basis positions kept
    witness: dict[int, int]        # dropped basis position -> anchor used


@lru_cache(maxsize=128)
def _collapse(q: FiniteQuandle, i: int, theory: str) -> _Collapse:
    n = q.size
    basis = _chain_basis(n, i, theory)
    m = len(basis)
    if m == 0:
        return _Collapse((), {})
    A = anchors(q)
    codes = np.array(basis.codes, dtype=np.int64)
    places = np.array([n ** (i - 1 - k) for k in range(i)], dtype=np.int64)
    digits = (codes[:, None] // places) % n
    inv = np.array(q.inv_op, dtype=np.int64)
    if theory == "rack":
        back = {y: ((inv[digits, y] * places).sum(axis=1)).tolist() for y in A}
    else:
        index = basis.index
        back = {y: [index[c] for c in (inv[digits, y] * places).sum(axis=1).tolist()] for y in A}
    anchor_set = set(A)
    state = bytearray(m)  # 0 unseen, 1 kept, 2 dropped
    witness: dict[int, int] = {}
    queue: deque[int] = deque()
    for k, last in enumerate(digits[:, -1].tolist()):
        if last in anchor_set:
            state[k] = 1
            queue.append(k)

    def sweep() -> None:
        while queue:
            t = queue.popleft()
            for y in A:
                s = back[y][t]
                if not state[s]:
                    state[s] = 2
                    witness[s] = y
                    queue.append(s)

    sweep()
    for k in range(m):
        if not state[k]:
            state[k] = 1
            queue.append(k)
            sweep()
    return _Collapse(tuple(k for k in range(m) if state[k] == 1), witness)


@lru_cache(maxsize=128)
def reduced_boundary(q: FiniteQuandle, i: int, theory: str) -> IntegerMatrix:
    """A submatrix of ``d_i`` with the same nonzero invariant factors."""
    n = q.size
    src = _chain_basis(n, i, theory)
    keep = _collapse(q, i, theory).keep
    rows = len(_chain_basis(n, i - 1, theory))
    drop: set[int] = set()
    if i >= 3:
        low = _collapse(q, i - 2, theory)
        low_codes = _chain_basis(n, i - 2, theory).codes
        tgt = _chain_basis(n, i - 1, theory)
        index = tgt.index if theory != "rack" else None
        for k, y in low.witness.items():
            code = low_codes[k] * n + y
            drop.add(code if index is None else index[code])
    renumber = {}
    for r in range(rows):
        if r not in drop:
            renumber[r] = len(renumber)
    columns = [{renumber[r]: v for r, v in col.items() if r in renumber}
               for col in _columns(q, i, theory, [src.codes[k] for k in keep])]
    return IntegerMatrix.from_columns(len(renumber), columns)


@lru_cache(maxsize=128)
def _smith(q: FiniteQuandle, i: int, theory: str) -> SmithForm:
    return smith_normal_form(reduced_boundary(q, i, theory))


def boundary_smith(q: FiniteQuandle, i: int, theory: str = "rack", cap: Optional[int] = None) -> SmithForm:
    """Nonzero invariant factors of ``d_i``."""
    chain_basis(q, i, theory, cap)
    return _smith(q, i, theory)


@dataclass(frozen=True)
class HomologyGroup:
    """``Z^betti + sum Z/d`` over the integers; over a field only ``betti``
    (the dimension) is meaningful and ``torsion`` is empty."""

    betti: int
    torsion: tuple[int, ...] = ()
    coeffs: str = "Z"

    @property
    def dimension(self) -> int:
        return self.betti

    @property
    def exponent(self) -> int:
        """Least common multiple of the torsion coefficients (1 if none)."""
        return lcm(1, *self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        if self.coeffs != "Z":
            return f"{self.coeffs}^{self.betti}"
        return " + ".join(parts) if parts else "0"


def parse_coeffs(coeffs: Union[str, int]) -> Union[str, int]:
    """Normalize ``"Z"``, ``"Q"`` or a prime (``5``, ``"F5"``, ``"F_5"``)."""
    if isinstance(coeffs, int):
        p = coeffs
    else:
        s = coeffs.strip().upper()
        if s in ("Z", "Q"):
            return s
        s = s.removeprefix("GF").removeprefix("F").removeprefix("_")
        try:
            p = int(s)
        except ValueError:
            raise InputError(f"coefficients must be Z, Q or F_p, got {coeffs!r}") from None
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise InputError(f"field coefficients need a prime, got {p}")
    return p


def homology_group(q: FiniteQuandle, i: int, theory: str = "quandle",
                   coeffs: Union[str, int] = "Z", cap: Optional[int] = None) -> HomologyGroup:
    """H_i of the rack, quandle or degenerate complex.

    Over Z the torsion is read off the Smith form of ``d_{i+1}``; over a
    field the dimension is ``dim C_i - rank d_i - rank d_{i+1}`` with ranks
    taken over Q or mod p.
    """
    if i < 1:
        raise InputError(f"homology degree must be >= 1, got {i}")
    coeffs = parse_coeffs(coeffs)
    dim = len(chain_basis(q, i, theory, cap))
    chain_basis(q, i + 1, theory, cap)
    d_in = _smith(q, i, theory)
    d_out = _smith(q, i + 1, theory)
    if coeffs in ("Z", "Q"):
        betti = dim - d_in.rank - d_out.rank
        if coeffs == "Q":
            return HomologyGroup(betti, (), "Q")
        return HomologyGroup(betti, d_out.torsion, "Z")
    betti = dim - d_in.rank_mod(coeffs) - d_out.rank_mod(coeffs)
    return HomologyGroup(betti, (), f"F{coeffs}")


def stable_tail(values: Sequence, k: int = 2):
    """The common value of the last ``k`` entries, or ``None``."""
    if k < 1:
        raise InputError("stability window must be at least 1")
    if len(values) < k:
        return None
    tail = values[-k:]
    return tail[0] if all(v == tail[0] for v in tail) else None


@dataclass(frozen=True)
class ExponentSequence:
    ns: tuple[int, ...]
    exponents: tuple[int, ...]
    groups: tuple[HomologyGroup, ...]
    window: int
    stable_value: Optional[int]

    @property
    def stable(self) -> bool:
        return self.stable_value is not None


def exponent_sequence(family, i: int, ns: Sequence[int], theory: str = "quandle",
                      window: int = 2, cap: Optional[int] = None) -> ExponentSequence:
    """Exponent of the integral ``H_i`` of the family's quandle for each n."""
    from .families import build_quandle

    caps = default_caps()
    groups = []
    for n in ns:
        X = build_quandle(family, n, caps.elements).quandle
        groups.append(homology_group(X, i, theory, "Z", cap))
    exps = tuple(g.exponent for g in groups)
    return ExponentSequence(tuple(ns), exps, tuple(groups), window, stable_tail(exps, window))


# -------------------------------------------------------------- chain maps

def chain_map(src: FiniteQuandle, tgt: FiniteQuandle, elem_map: Sequence[int], i: int,
              theory: str = "quandle") -> IntegerMatrix:
    """Matrix of the tuple-wise map ``C_i(src) -> C_i(tgt)``."""
    _check_theory(theory)
    if len(elem_map) != src.size:
        raise InputError("element map must cover every source element")
    sb = _chain_basis(src.size, i, theory)
    tb = _chain_basis(tgt.size, i, theory)
    tindex = tb.index
    columns = []
    for code in sb.codes:
        image = tuple(elem_map[x] for x in _decode(code, src.size, i))
        k = tindex.get(_encode(image, tgt.size))
        columns.append({} if k is None else {k: 1})
    return IntegerMatrix.from_columns(len(tb), columns)


def check_chain_map(src: FiniteQuandle, tgt: FiniteQuandle, elem_map: Sequence[int], i: int,
                    theory: str = "quandle") -> None:
    """Raise :class:`ConsistencyError` unless ``f d_i == d_i f``."""
    if i < 2:
        return
    lhs = chain_map(src, tgt, elem_map, i - 1, theory) @ _boundary(src, i, theory)
    rhs = _boundary(tgt, i, theory) @ chain_map(src, tgt, elem_map, i, theory)
    if lhs != rhs:
        raise ConsistencyError(f"chain map does not commute with the differential in degree {i}")


def _rref_fraction(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _dense_columns(M: IntegerMatrix) -> list[list[Fraction]]:
    cols = []
    for c in range(M.cols):
        col = [Fraction(0)] * M.rows
        for r, v in M.columns.get(c, {}).items():
            col[r] = Fraction(v)
        cols.append(col)
    return cols


@dataclass(frozen=True)
class RationalHomologyBasis:
    """Cycle representatives of a basis of ``H_i(X; Q)``."""

    boundaries: tuple[tuple[Fraction, ...], ...]  # independent spanning set of im d_{i+1}
    cycles: tuple[tuple[Fraction, ...], ...]      # representatives of a basis of H_i

    def coordinates(self, z: Sequence[Fraction]) -> list[Fraction]:
        """Coordinates of the class of cycle ``z``."""
        vecs = list(self.boundaries) + list(self.cycles)
        n = len(z)
        # solve sum a_k vecs[k] = z through the RREF of the augmented system
        rows = [[vecs[k][r] for k in range(len(vecs))] + [Fraction(z[r])] for r in range(n)]
        m, piv = _rref_fraction(rows, len(vecs) + 1)
        if len(vecs) in piv:
            raise ConsistencyError("vector is not a cycle of the target complex")
        sol = [Fraction(0)] * len(vecs)
        for row, pc in zip(m, piv):
            sol[pc] = row[-1]
        return sol[len(self.boundaries):]


def rational_homology_basis(q: FiniteQuandle, i: int, theory: str = "quandle") -> RationalHomologyBasis:
    dim = len(_chain_basis(q.size, i, theory))
    if i == 1:
        cycle_space = [[Fraction(int(r == c)) for r in range(dim)] for c in range(dim)]
    else:
        d = _boundary(q, i, theory)
        rows = [[Fraction(0)] * dim for _ in range(d.rows)]
        for c, col in d.columns.items():
            for r, v in col.items():
                rows[r][c] = Fraction(v)
        m, piv = _rref_fraction(rows, dim)
        cycle_space = []
        for fc in (c for c in range(dim) if c not in piv):
            v = [Fraction(0)] * dim
            v[fc] = Fraction(1)
            for row, pc in zip(m, piv):
                v[pc] = -row[fc]
            cycle_space.append(v)
    bcols = _dense_columns(_boundary(q, i + 1, theory))
    allvecs = bcols + cycle_space
    rows = [[v[r] for v in allvecs] for r in range(dim)]
    _, piv = _rref_fraction(rows, len(allvecs))
    nb = len(bcols)
    boundaries = tuple(tuple(bcols[p]) for p in piv if p < nb)
    cycles = tuple(tuple(allvecs[p]) for p in piv if p >= nb)
    return RationalHomologyBasis(boundaries, cycles)


def induced_map(src: FiniteQuandle, tgt: FiniteQuandle, elem_map: Sequence[int], i: int,
                theory: str = "quandle") -> list[list[Fraction]]:
    """Matrix of ``H_i(f) : H_i(src; Q) -> H_i(tgt; Q)`` in the bases of
    :func:`rational_homology_basis`; column k is the image of basis class k.

    The chain map is first checked against the differentials in degrees
    ``i`` and ``i+1``.
    """
    check_chain_map(src, tgt, elem_map, i, theory)
    check_chain_map(src, tgt, elem_map, i + 1, theory)
    hs = rational_homology_basis(src, i, theory)
    ht = rational_homology_basis(tgt, i, theory)
    F = chain_map(src, tgt, elem_map, i, theory)
    columns = []
    for z in hs.cycles:
        image = [Fraction(0)] * F.rows
        for c, v in enumerate(z):
            if v:
                for r, w in F.columns.get(c, {}).items():
                    image[r] += w * v
        columns.append(ht.coordinates(image))
    return [[columns[c][r] for c in range(len(columns))] for r in range(len(ht.cycles))]
