"""Small finite fields, polynomials and dense matrices over them.

Field elements of GF(p^k) are integers ``0..q-1``; the base-p digits of an
element are the coefficients (constant term first) of its residue modulo
the shipped Conway polynomial. The prime subfield is therefore encoded as
the integers mod p.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .errors import InputError

# Conway polynomials, coefficients constant term first, monic.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
}

MAX_Q = 64


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise InputError(f"field order must be a prime power, got {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1 or not _is_prime(p):
        raise InputError(f"field order must be a prime power, got {q}")
    return p, k


class GF:
    """Arithmetic tables for GF(q)."""

    def __init__(self, q: int, max_q: int = MAX_Q):
        if q > max_q:
            raise InputError(f"q={q} exceeds the supported maximum {max_q}")
        p, k = prime_power(q)
        self.p, self.k, self.q = p, k, q
        if k == 1:
            self.modulus = (0, 1)  # x; residues are the constants
            self.add_t = [[(a + b) % p for b in range(q)] for a in range(q)]
            self.mul_t = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            if (p, k) not in CONWAY:
                raise InputError(f"no modulus shipped for GF({p}^{k})")
            self.modulus = CONWAY[(p, k)]
            digits = [self._digits(a) for a in range(q)]
            self.add_t = [[self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                           for b in range(q)] for a in range(q)]
            self.mul_t = [[self._polymulmod(digits[a], digits[b]) for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add_t[a][b] == 0) for a in range(q)]
        self.inv_t = [None] + [next(b for b in range(q) if self.mul_t[a][b] == 1) for a in range(1, q)]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _polymulmod(self, a: Sequence[int], b: Sequence[int]) -> int:
        p, k, mod = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for d in range(len(prod) - 1, k - 1, -1):
            c = prod[d]
            if c:
                for j in range(k + 1):
                    prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
        return self._undigits(prod[:k])

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_t[a]

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime subfield."""
        return n % self.p

    def primitive_element(self) -> int:
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = self.mul_t[x][g]
                order += 1
            if order == self.q - 1:
                return g
        raise AssertionError("no primitive element")


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    return GF(q)


# ---------------------------------------------------------------- polynomials
# Tuples of field elements, constant term first, no trailing zeros.

def poly_trim(a: Sequence[int]) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_mul(F: GF, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add_t[out[i + j]][F.mul_t[x][y]]
    return poly_trim(out)


def poly_divmod(F: GF, a: Sequence[int], b: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(poly_trim(a))
    lead_inv = F.inv(b[-1])
    qt = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b) and r:
        c = F.mul_t[r[-1]][lead_inv]
        shift = len(r) - len(b)
        qt[shift] = c
        for j, bj in enumerate(b):
            r[shift + j] = F.sub(r[shift + j], F.mul_t[c][bj])
        r = list(poly_trim(r))
    return poly_trim(qt), tuple(r)


def poly_pow(F: GF, a: Sequence[int], e: int) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for _ in range(e):
        out = poly_mul(F, out, a)
    return out


def monic_polys(F: GF, degree: int) -> Iterator[tuple[int, ...]]:
    for low in itertools.product(range(F.q), repeat=degree):
        yield tuple(low) + (1,)


@lru_cache(maxsize=None)
def _irreducibles(q: int, degree: int) -> tuple[tuple[int, ...], ...]:
    F = gf(q)
    smaller = [f for d in range(1, degree // 2 + 1) for f in _irreducibles(q, d)]
    out = []
    for f in monic_polys(F, degree):
        if all(poly_divmod(F, f, g)[1] for g in smaller):
            out.append(f)
    return tuple(out)


def irreducibles(F: GF, degree: int) -> tuple[tuple[int, ...], ...]:
    """Monic irreducible polynomials of the given degree, including ``x``."""
    return _irreducibles(F.q, degree)


def is_irreducible(F: GF, f: Sequence[int]) -> bool:
    f = poly_trim(f)
    return len(f) >= 2 and f[-1] == 1 and tuple(f) in irreducibles(F, len(f) - 1)


def poly_str(f: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(f):
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if i == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return "+".join(terms) if terms else "0"


# -------------------------------------------------------------------- matrices
# Row-major tuples of tuples.

Matrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def mat_mul(F: GF, a: Matrix, b: Matrix) -> Matrix:
    add, mul = F.add_t, F.mul_t
    cols = list(zip(*b)) if b else []
    out = []
    for row in a:
        new = []
        for col in cols:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s = add[s][mul[x][y]]
            new.append(s)
        out.append(tuple(new))
    return tuple(out)


def mat_add(F: GF, a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(F.add_t[x][y] for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(F: GF, c: int, a: Matrix) -> Matrix:
    return tuple(tuple(F.mul_t[c][x] for x in row) for row in a)


def mat_sub_identity(F: GF, a: Matrix) -> Matrix:
    return tuple(tuple(F.sub(x, 1) if i == j else x for j, x in enumerate(row)) for i, row in enumerate(a))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_vec(F: GF, a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    out = []
    for row in a:
        s = 0
        for x, y in zip(row, v):
            if x and y:
                s = F.add_t[s][F.mul_t[x][y]]
        out.append(s)
    return tuple(out)


def rref(F: GF, a: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul_t[inv][x] for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul_t[f][y]) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(F: GF, a: Sequence[Sequence[int]]) -> int:
    return len(rref(F, a)[1])


def nullspace(F: GF, a: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[tuple[int, ...]]:
    """Basis of ``{v : a v = 0}``, one vector per free column, in column order."""
    if ncols is None:
        ncols = len(a[0])
    if not a:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    m, pivots = rref(F, a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(m, pivots):
            v[pc] = F.neg[row[fc]]
        basis.append(tuple(v))
    return basis


def det(F: GF, a: Matrix) -> int:
    m = [list(r) for r in a]
    n = len(m)
    d = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            d = F.neg[d]
        d = F.mul_t[d][m[c][c]]
        inv = F.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = F.mul_t[m[i][c]][inv]
                m[i] = [F.sub(x, F.mul_t[f][y]) for x, y in zip(m[i], m[c])]
    return d


def inverse(F: GF, a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + list(e) for row, e in zip(a, identity(n))]
    m, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise InputError("matrix is singular")
    return tuple(tuple(row[n:]) for row in m)


def mat_pow(F: GF, a: Matrix, e: int) -> Matrix:
    out = identity(len(a))
    for _ in range(e):
        out = mat_mul(F, out, a)
    return out


def poly_eval_matrix(F: GF, f: Sequence[int], a: Matrix) -> Matrix:
    """``f(a)`` by Horner's rule."""
    n = len(a)
    out = zeros(n, n)
    for c in reversed(f):
        out = mat_mul(F, out, a)
        if c:
            out = mat_add(F, out, mat_scale(F, c, identity(n)))
    return out


def all_matrices(F: GF, rows: int, cols: int) -> Iterator[Matrix]:
    for entries in itertools.product(range(F.q), repeat=rows * cols):
        yield tuple(tuple(entries[r * cols:(r + 1) * cols]) for r in range(rows))


def general_linear_group(F: GF, n: int) -> list[Matrix]:
    """All of GL_n(q) by brute force, sorted; only for tiny n and q."""
    return sorted(m for m in all_matrices(F, n, n) if det(F, m))
