"""Conjugacy-class quandles of GL_n(q) and the VIC(q) action on them.

A class of GL_n(q) is encoded by a :class:`PhiSpec`, a map from monic
irreducible polynomials ``f != x`` to partitions: ``F^n`` decomposes as the
sum of ``F[x]/(f^e)`` over the parts ``e`` of ``Phi(f)``. A spec is
primitive when ``Phi(x-1)`` has no part equal to 1, and ``c^n_Phi`` pads
``Phi(x-1)`` with parts of size 1 up to dimension ``n``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import gf as G
from .caps import check
from .errors import InputError, ParseError
from .gf import GF, Matrix
from .perm import ClassQuandle, conjugation_quandle

Poly = tuple[int, ...]


def x_minus_one(F: GF) -> Poly:
    return (F.neg[1], 1)


@dataclass(frozen=True)
class PhiSpec:
    """Finitely supported map ``Poly(q) -> partitions`` over GF(q).

    ``blocks`` holds ``(f, parts)`` pairs sorted by ``f`` with parts in
    decreasing order; polynomials with empty partitions are dropped.
    """

    q: int
    blocks: tuple[tuple[Poly, tuple[int, ...]], ...]

    def __post_init__(self):
        F = G.gf(self.q)
        merged: dict[Poly, list[int]] = {}
        for f, parts in self.blocks:
            f = G.poly_trim(f)
            if f == (0, 1):
                raise InputError("the polynomial x cannot appear: matrices must be invertible")
            if not G.is_irreducible(F, f):
                raise InputError(f"{G.poly_str(f)} is not a monic irreducible polynomial over GF({self.q})")
            for e in parts:
                if int(e) < 1:
                    raise InputError(f"partition parts must be positive, got {e}")
            merged.setdefault(f, []).extend(int(e) for e in parts)
        blocks = tuple(sorted((f, tuple(sorted(p, reverse=True))) for f, p in merged.items() if p))
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, q: int, mapping: dict) -> "PhiSpec":
        return cls(q, tuple((tuple(f), tuple(p)) for f, p in mapping.items()))

    @classmethod
    def unipotent(cls, q: int, parts: Sequence[int]) -> "PhiSpec":
        return cls(q, ((x_minus_one(G.gf(q)), tuple(parts)),))

    @property
    def field(self) -> GF:
        return G.gf(self.q)

    def as_dict(self) -> dict[Poly, tuple[int, ...]]:
        return dict(self.blocks)

    def parts(self, f: Sequence[int]) -> tuple[int, ...]:
        return self.as_dict().get(tuple(f), ())

    @property
    def weight(self) -> int:
        return sum((len(f) - 1) * sum(p) for f, p in self.blocks)

    @property
    def is_primitive(self) -> bool:
        return 1 not in self.parts(x_minus_one(self.field))

    def core(self) -> "PhiSpec":
        """Drop the size-1 parts of ``Phi(x-1)``."""
        u = x_minus_one(self.field)
        return PhiSpec(self.q, tuple((f, tuple(e for e in p if f != u or e > 1)) for f, p in self.blocks))

    def padded(self, n: int) -> "PhiSpec":
        extra = n - self.weight
        if extra < 0:
            raise InputError(f"cannot pad a weight-{self.weight} class down to dimension {n}")
        return PhiSpec(self.q, self.blocks + ((x_minus_one(self.field), (1,) * extra),))

    def __str__(self) -> str:
        u = x_minus_one(self.field)
        items = []
        for f, p in self.blocks:
            name = "x-1" if f == u else G.poly_str(f)
            items.append(f"{name}:{','.join(map(str, p))}")
        return ";".join(items)


# ---------------------------------------------------------------- parsing

_TERM_RE = re.compile(r"^([+-]?)(\d*)\*?(x(?:\^(\d+))?)?$")


def parse_poly(text: str, F: GF, offset: int = 0) -> Poly:
    """Parse ``x-1`` or ``1+x+x^2`` (prime-subfield coefficients)."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial", offset)
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise ParseError(f"cannot parse polynomial {text!r}", offset)
    coeffs: dict[int, int] = {}
    for term in terms:
        m = _TERM_RE.match(term)
        if not m or (not m.group(2) and not m.group(3)):
            raise ParseError(f"bad polynomial term {term!r}", offset)
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            d = int(m.group(4)) if m.group(4) else 1
        else:
            d = 0
        coeffs[d] = coeffs.get(d, 0) + sign * c
    top = max(coeffs)
    f = G.poly_trim([F.from_int(coeffs.get(i, 0)) for i in range(top + 1)])
    if not f or f[-1] != 1:
        raise ParseError(f"polynomial {text!r} is not monic over GF({F.q})", offset)
    return f


def parse_phi(text: str, q: int) -> list[PhiSpec]:
    """Parse ``"x-1:2;1+x+x^2:1|x-1:3"`` into a list of specs."""
    F = G.gf(q)
    specs = []
    offset = 0
    for chunk in text.split("|"):
        blocks = []
        pos = offset
        for item in chunk.split(";"):
            if ":" not in item:
                raise ParseError(f"expected poly:partition, got {item.strip()!r}", pos)
            ptext, parts_text = item.rsplit(":", 1)
            f = parse_poly(ptext, F, pos)
            try:
                parts = tuple(int(t) for t in parts_text.split(","))
            except ValueError:
                raise ParseError(f"bad partition {parts_text!r}", pos) from None
            blocks.append((f, parts))
            pos += len(item) + 1
        try:
            spec = PhiSpec(q, tuple(blocks))
        except InputError as exc:
            raise ParseError(str(exc), offset) from None
        specs.append(spec)
        offset += len(chunk) + 1
    return specs


def validate_family(specs: Iterable[PhiSpec]) -> tuple[PhiSpec, ...]:
    specs = tuple(specs)
    if not specs:
        raise InputError("GL class family must contain at least one spec")
    if len({s.q for s in specs}) != 1:
        raise InputError("all specs in a family must share the same field")
    if len(set(specs)) != len(specs):
        raise InputError("GL class family has duplicate specs")
    for s in specs:
        if not s.is_primitive:
            raise InputError(f"spec {s} is not primitive: Phi(x-1) has a part equal to 1")
        if not s.blocks:
            raise InputError("the empty spec indexes the identity class, which is not allowed")
    return tuple(sorted(specs, key=lambda s: s.blocks))


# ------------------------------------------------------------- invariants

def class_invariant(F: GF, T: Matrix) -> PhiSpec:
    """Recover the class of ``T`` from the ranks of ``f(T)^j``.

    For each irreducible ``f`` dividing the characteristic polynomial, the
    number of parts of ``Phi(f)`` that are at least ``j`` equals
    ``(rank f(T)^(j-1) - rank f(T)^j) / deg f``.
    """
    n = len(T)
    if n and G.det(F, T) == 0:
        raise InputError("class invariant needs an invertible matrix")
    blocks = []
    remaining = n
    for d in range(1, n + 1):
        if remaining < d:
            break
        for f in G.irreducibles(F, d):
            if f == (0, 1):
                continue
            A = G.poly_eval_matrix(F, f, T)
            r_prev, r = n, G.rank(F, A)
            if r == n:
                continue
            at_least = []
            P = A
            while r < r_prev:
                at_least.append((r_prev - r) // d)
                P = G.mat_mul(F, P, A)
                r_prev, r = r, G.rank(F, P)
            parts = []
            for j, cnt in enumerate(at_least, start=1):
                nxt = at_least[j] if j < len(at_least) else 0
                parts.extend([j] * (cnt - nxt))
            blocks.append((f, tuple(parts)))
            remaining -= d * sum(parts)
    return PhiSpec(F.q, tuple(blocks))


def characteristic_polynomial(F: GF, T: Matrix) -> Poly:
    out: Poly = (1,)
    for f, parts in class_invariant(F, T).blocks:
        out = G.poly_mul(F, out, G.poly_pow(F, f, sum(parts)))
    return out


def companion(F: GF, g: Sequence[int]) -> Matrix:
    d = len(g) - 1
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = F.neg[g[i]]
    return tuple(tuple(r) for r in rows)


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    rows = [[0] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                rows[o + i][o + j] = v
        o += len(b)
    return tuple(tuple(r) for r in rows)


def canonical_representative(spec: PhiSpec) -> Matrix:
    """Block-diagonal companion matrices of ``f^e`` for every part ``e``."""
    F = spec.field
    return block_diagonal([companion(F, G.poly_pow(F, f, e)) for f, parts in spec.blocks for e in parts])


@lru_cache(maxsize=None)
def gl_generators(q: int, n: int) -> tuple[tuple[Matrix, Matrix], ...]:
    """Generators of GL_n(q) paired with their inverses."""
    F = G.gf(q)
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                e = [list(r) for r in G.identity(n)]
                e[i][j] = 1
                einv = [list(r) for r in G.identity(n)]
                einv[i][j] = F.neg[1]
                gens.append((tuple(map(tuple, e)), tuple(map(tuple, einv))))
    if n and q > 2:
        w = F.primitive_element()
        d = [list(r) for r in G.identity(n)]
        d[0][0] = w
        dinv = [list(r) for r in G.identity(n)]
        dinv[0][0] = F.inv(w)
        gens.append((tuple(map(tuple, d)), tuple(map(tuple, dinv))))
    return tuple(gens)


def conjugation_orbit(F: GF, T: Matrix, cap: int = 10**6) -> list[Matrix]:
    n = len(T)
    gens = gl_generators(F.q, n)
    seen = {T}
    frontier = deque([T])
    while frontier:
        A = frontier.popleft()
        for g, ginv in gens:
            B = G.mat_mul(F, G.mat_mul(F, g, A), ginv)
            if B not in seen:
                seen.add(B)
                check("GL conjugacy class", len(seen), cap)
                frontier.append(B)
    return sorted(seen)


def class_members_gl(spec: PhiSpec, n: int, cap: int = 10**6, method: str = "orbit") -> list[Matrix]:
    """All matrices of ``c^n_spec``, sorted row-major lexicographically.

    ``method="orbit"`` conjugates the canonical representative by generators
    of GL_n(q); ``method="brute"`` filters all ``q^(n^2)`` matrices by
    :func:`class_invariant` and is kept for cross-checking.
    """
    if n < spec.weight:
        return []
    F = spec.field
    target = spec.padded(n)
    if method == "brute":
        check("brute-force GL enumeration", F.q ** (n * n), cap)
        return [T for T in G.all_matrices(F, n, n) if G.det(F, T) and class_invariant(F, T) == target]
    if method != "orbit":
        raise InputError(f"unknown enumeration method {method!r}")
    return conjugation_orbit(F, canonical_representative(target), cap)


def class_quandle_gl(specs: Iterable[PhiSpec], n: int, cap: int = 10**6) -> ClassQuandle:
    """Conjugation quandle on the union of ``c^n_Phi`` over a primitive family."""
    specs = validate_family(specs)
    F = specs[0].field
    members: set[Matrix] = set()
    for s in specs:
        members.update(class_members_gl(s, n, cap))
        check("GL class family", len(members), cap)
    elements = sorted(members)
    inverses = {T: G.inverse(F, T) for T in elements}

    def conj(x, y):
        return G.mat_mul(F, G.mat_mul(F, y, x), inverses[y])

    return conjugation_quandle(elements, conj)


def family_weight(specs: Iterable[PhiSpec]) -> int:
    return max(s.weight for s in specs)


# ----------------------------------------------------------------- VIC(q)

@dataclass(frozen=True)
class VICMorphism:
    """A VIC(q) morphism ``F^n -> F^m``: an injection plus a complement.

    ``f`` is an ``m x n`` matrix and ``complement`` a tuple of ``m - n``
    column vectors spanning ``W`` with ``im f + W = F^m`` direct.
    """

    q: int
    n: int
    m: int
    f: Matrix
    complement: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        F = G.gf(self.q)
        f = tuple(tuple(r) for r in self.f)
        W = tuple(tuple(v) for v in self.complement)
        if len(f) != self.m or any(len(r) != self.n for r in f):
            raise InputError(f"VIC map must be a {self.m}x{self.n} matrix")
        if len(W) != self.m - self.n or any(len(v) != self.m for v in W):
            raise InputError(f"complement needs {self.m - self.n} vectors of length {self.m}")
        if self.m and G.det(F, self.basis_matrix(f, W)) == 0:
            raise InputError("image and complement do not span F^m directly")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "complement", W)

    def basis_matrix(self, f=None, W=None) -> Matrix:
        f = self.f if f is None else f
        W = self.complement if W is None else W
        return tuple(tuple(f[i]) + tuple(v[i] for v in W) for i in range(self.m))

    @classmethod
    def identity(cls, q: int, n: int) -> "VICMorphism":
        return cls(q, n, n, G.identity(n), ())

    @classmethod
    def standard(cls, q: int, n: int, m: int) -> "VICMorphism":
        f = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(m))
        W = tuple(tuple(1 if i == j else 0 for i in range(m)) for j in range(n, m))
        return cls(q, n, m, f, W)

    def then(self, g: "VICMorphism") -> "VICMorphism":
        """The composite ``g o self``; its complement is ``g(W_self) + W_g``."""
        if g.n != self.m or g.q != self.q:
            raise InputError("VIC morphisms are not composable")
        F = G.gf(self.q)
        f = G.mat_mul(F, g.f, self.f)
        W = tuple(G.mat_vec(F, g.f, v) for v in self.complement) + g.complement
        return VICMorphism(self.q, self.n, g.m, f, W)


def vic_pushforward(morph: VICMorphism, T: Matrix) -> Matrix:
    """Act by ``f T f^-1`` on ``im f`` and by the identity on the complement."""
    if len(T) != morph.n or any(len(r) != morph.n for r in T):
        raise InputError(f"matrix size {len(T)} does not match VIC source dimension {morph.n}")
    F = G.gf(morph.q)
    B, Binv = _frame(morph)
    D = block_diagonal([T, G.identity(morph.m - morph.n)])
    return G.mat_mul(F, G.mat_mul(F, B, D), Binv)


@lru_cache(maxsize=4096)
def _frame(morph: VICMorphism) -> tuple[Matrix, Matrix]:
    B = morph.basis_matrix()
    return B, G.inverse(G.gf(morph.q), B)


@lru_cache(maxsize=None)
def subspaces(q: int, m: int, d: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Every d-dimensional subspace of F^m, as its RREF row basis."""
    F = G.gf(q)
    out = set()
    for M in G.all_matrices(F, d, m):
        R, piv = G.rref(F, M)
        if len(piv) == d:
            out.add(tuple(tuple(r) for r in R))
    return tuple(sorted(out))


def all_vic_morphisms(q: int, n: int, m: int):
    """Every VIC(q) morphism ``F^n -> F^m`` (complements in RREF form)."""
    F = G.gf(q)
    for f in G.all_matrices(F, m, n):
        if G.rank(F, f) != n:
            continue
        for W in subspaces(q, m, m - n):
            B = tuple(tuple(f[i]) + tuple(v[i] for v in W) for i in range(m))
            if m == 0 or G.det(F, B):
                yield VICMorphism(q, n, m, f, W)


def common_fixed_vector(F: GF, Ts: Sequence[Matrix]) -> Optional[tuple[int, ...]]:
    """A nonzero vector fixed by every ``T``, or ``None`` if there is none.

    Returned as the first basis vector of the intersection of the kernels
    of ``T - I``; existence is guaranteed once ``n > len(Ts) * weight``.
    """
    if not Ts:
        raise InputError("need at least one matrix")
    n = len(Ts[0])
    if any(len(T) != n for T in Ts):
        raise InputError("all matrices must have the same size")
    rows = [row for T in Ts for row in G.mat_sub_identity(F, T)]
    basis = G.nullspace(F, rows, n)
    return basis[0] if basis else None
