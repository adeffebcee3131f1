"""Dimension sequences of coloring spaces and their polynomial fits.

For a link diagram L and a class family, ``values[n]`` is the number of
colorings of L by the family's quandle at size n. Symmetric families are
fitted in the binomial basis ``sum c_k C(n, k)``; GL families are compared
against a low-degree polynomial in ``q^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Optional, Sequence

from .caps import default_caps
from .errors import InputError, ResourceError
from .families import Family, build_quandle, describe, is_gl_family, weight
from .homology import stable_tail
from .links import LinkDiagram, enumerate_colorings, fundamental_presentation
from .perm import ClassFamilySpec, Partition, class_size_poly, conjugate


@dataclass(frozen=True)
class DimSequence:
    """``values[k]`` is the dimension at ``n = start + k``. If a resource cap
    stopped the computation, ``truncated_at`` is the first missing n."""

    values: tuple[int, ...]
    family: str = ""
    start: int = 0
    parameter: str = "n"
    truncated_at: Optional[int] = None
    stop_reason: str = ""

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise InputError("dimension sequences are non-negative")

    @property
    def ns(self) -> range:
        return range(self.start, self.start + len(self.values))

    @property
    def complete(self) -> bool:
        return self.truncated_at is None


def dims_for_link(d: LinkDiagram, family: Family, N: int, cap: Optional[int] = None,
                  jobs: int = 1) -> DimSequence:
    """``chi(d, X_n)`` for ``n = 0..N``. Stops at the first n whose quandle or
    search would exceed a cap and marks the sequence as truncated there."""
    caps = default_caps()
    p = fundamental_presentation(d)
    values = []
    stop, reason = None, ""
    for n in range(N + 1):
        try:
            X = build_quandle(family, n, caps.elements if cap is None else cap).quandle
            values.append(enumerate_colorings(p, X, "count", cap, jobs))
        except ResourceError as exc:
            stop, reason = n, str(exc)
            break
    return DimSequence(tuple(values), describe(family), 0, "q^n" if is_gl_family(family) else "n",
                       stop, reason)


# ---------------------------------------------------------- binomial basis

@dataclass(frozen=True)
class BinomialPoly:
    """``sum_k coeffs[k] * C(n, k)``; zero coefficients are not stored."""

    coeffs: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {k: c for k, c in sorted(self.coeffs.items()) if c})

    @property
    def degree(self) -> int:
        """Largest k with a nonzero coefficient; -1 for the zero polynomial."""
        return max(self.coeffs, default=-1)

    def __call__(self, n: int) -> int:
        return sum(c * comb(n, k) for k, c in self.coeffs.items())

    def __add__(self, other: "BinomialPoly") -> "BinomialPoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return BinomialPoly(out)

    @property
    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in self.coeffs.items():
            terms.append(f"{c}" if k == 0 else (f"C(n,{k})" if c == 1 else f"{c}*C(n,{k})"))
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class BinomialFit:
    poly: BinomialPoly
    exact: bool                   # reproduces every supplied value
    residuals: tuple[int, ...]    # value minus fit, per supplied n

    @property
    def nonnegative(self) -> bool:
        return self.poly.nonnegative


def forward_differences(values: Sequence[int]) -> list[int]:
    """``[D^0 s(0), D^1 s(0), ...]``."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return out


def fit_binomial(values: Sequence[int], max_degree: Optional[int] = None) -> BinomialFit:
    """Fit ``values`` (indexed from n = 0) by ``c_k = D^k s(0)`` for
    ``k <= max_degree``. At least ``max_degree + 3`` values are required so
    that two values check the fit; the default degree is ``len - 3``."""
    values = list(values)
    if max_degree is None:
        max_degree = len(values) - 3
    need = max_degree + 3
    if max_degree < 0 or len(values) < need:
        raise InputError(f"fitting degree {max_degree} needs at least {max(need, 3)} values, got {len(values)}")
    diffs = forward_differences(values)
    poly = BinomialPoly({k: diffs[k] for k in range(max_degree + 1)})
    residuals = tuple(v - poly(n) for n, v in enumerate(values))
    return BinomialFit(poly, not any(residuals), residuals)


@dataclass(frozen=True)
class BoundCheck:
    degree: int
    bound: int
    ok: bool


def degree_bound_check(poly: BinomialPoly, d: LinkDiagram, family: Family) -> BoundCheck:
    """Generation degree against ``arcs * |family|``."""
    bound = d.arc_count * weight(family)
    return BoundCheck(poly.degree, bound, poly.degree <= bound)


@dataclass(frozen=True)
class Normalized:
    """Quotient ``poly / (C(n, m) |c_lam|)`` written as
    ``sum_j coeffs[j] * C(n - m, j)``, or a failure description."""

    divisible: bool
    coeffs: dict[int, Fraction] = field(default_factory=dict)
    shift: int = 0
    reason: str = ""

    def __call__(self, n: int) -> Fraction:
        return sum((c * comb(n - self.shift, j) for j, c in self.coeffs.items()), Fraction(0))

    def __str__(self) -> str:
        if not self.divisible:
            return f"not divisible: {self.reason}"
        m = self.shift
        base = "n" if m == 0 else f"n-{m}"
        terms = []
        for j, c in self.coeffs.items():
            if j == 0:
                terms.append(str(c))
            else:
                b = base if j == 1 else f"C({base},{j})"
                terms.append(b if c == 1 else f"{c}*({b})" if j == 1 else f"{c}*{b}")
        return " + ".join(terms) if terms else "0"


def normalized_poly(poly: BinomialPoly, lam: Partition) -> Normalized:
    """Divide a dimension polynomial by the class-size polynomial of ``lam``."""
    m = lam.weight
    size = lambda n: class_size_poly(lam, n)  # noqa: E731
    for n in range(m):
        if poly(n):
            return Normalized(False, reason=f"value {poly(n)} at n={n} where the class is empty")
    top = max(poly.degree, m)
    pts = [Fraction(poly(n), size(n)) for n in range(m, top + 2)]
    diffs = forward_differences(pts)
    coeffs = {j: c for j, c in enumerate(diffs) if c}
    out = Normalized(True, coeffs, m)
    # interpolation fixes the quotient on n = m..top+1; check further points
    for n in range(top + 2, top + 6):
        if out(n) * size(n) != poly(n):
            return Normalized(False, reason=f"quotient disagrees at n={n}")
    if max(coeffs, default=0) > poly.degree - m:
        return Normalized(False, reason="quotient is not a polynomial")
    return out


def to_monomial(poly: BinomialPoly) -> list[Fraction]:
    """Coefficients of ``n^0, n^1, ...`` (display only)."""
    out = [Fraction(0)] * (poly.degree + 1)
    for k, c in poly.coeffs.items():
        falling = [Fraction(1)]  # n(n-1)...(n-k+1), ascending powers
        for r in range(k):
            nxt = [Fraction(0)] * (len(falling) + 1)
            for i, a in enumerate(falling):
                nxt[i + 1] += a
                nxt[i] -= r * a
            falling = nxt
        for i, a in enumerate(falling):
            out[i] += c * a / factorial(k)
    return out


# -------------------------------------------------------------- GL side

@dataclass(frozen=True)
class QPowerFit:
    """Least-degree polynomial in ``x = q^n`` through the last three points."""

    q: int
    coeffs: tuple[Fraction, ...]          # ascending powers of x
    residuals: dict[int, Fraction]        # n -> value minus fit at earlier points

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, n: int) -> Fraction:
        x = self.q ** n
        return sum((c * x**k for k, c in enumerate(self.coeffs)), Fraction(0))


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> tuple[Fraction, ...]:
    """Least-degree interpolating polynomial, ascending coefficients."""
    for deg in range(len(xs)):
        pts = list(zip(xs, ys))[-(deg + 1):]
        # Lagrange form expanded to coefficients
        coeffs = [Fraction(0)] * (deg + 1)
        for i, (xi, yi) in enumerate(pts):
            basis = [Fraction(1)]
            denom = Fraction(1)
            for j, (xj, _) in enumerate(pts):
                if j == i:
                    continue
                basis = [Fraction(0)] + basis
                for t in range(len(basis) - 1):
                    basis[t] -= xj * basis[t + 1]
                denom *= xi - xj
            for t, b in enumerate(basis):
                coeffs[t] += yi * b / denom
        if all(sum(c * x**k for k, c in enumerate(coeffs)) == y for x, y in zip(xs, ys)):
            while len(coeffs) > 1 and coeffs[-1] == 0:
                coeffs.pop()
            return tuple(coeffs)
    raise AssertionError("unreachable")


def fit_q_power(seq: DimSequence, q: int) -> QPowerFit:
    if len(seq.values) < 3:
        raise InputError(f"q^n fit needs at least 3 values, got {len(seq.values)}")
    ns = list(seq.ns)
    xs = [q**n for n in ns[-3:]]
    coeffs = _interpolate(xs, seq.values[-3:])
    fit = QPowerFit(q, coeffs, {})
    residuals = {n: v - fit(n) for n, v in zip(ns[:-3], seq.values[:-3])}
    return QPowerFit(q, coeffs, residuals)


def dims_for_link_gl(d: LinkDiagram, specs: Family, N: int, cap: Optional[int] = None,
                     jobs: int = 1) -> tuple[DimSequence, Optional[QPowerFit]]:
    """Coloring counts for a GL family for n = 0..N and a q^n fit when at
    least three values are available."""
    if not is_gl_family(specs):
        raise InputError("dims_for_link_gl needs a family of PhiSpec")
    seq = dims_for_link(d, specs, N, cap, jobs)
    q = list(specs)[0].q
    fit = fit_q_power(seq, q) if len(seq.values) >= 3 else None
    return seq, fit


# ------------------------------------------------- trivial representation

def _conjugation_actions(elements: Sequence[tuple[int, ...]], index: dict, n: int) -> list[list[int]]:
    """Index permutations of the class elements induced by conjugating with
    the generators (0 1) and (0 1 ... n-1) of S_n."""
    if n < 2:
        return []
    swap = tuple([1, 0] + list(range(2, n)))
    cycle = tuple(list(range(1, n)) + [0])
    return [[index[conjugate(x, g)] for x in elements] for g in (swap, cycle)]


def coloring_orbits(d: LinkDiagram, spec: ClassFamilySpec, n: int, cap: Optional[int] = None) -> int:
    """Number of S_n-orbits on the colorings of ``d`` by ``c^n_spec``, under
    simultaneous conjugation of all colors."""
    caps = default_caps()
    cq = build_quandle(spec, n, caps.elements)
    cols = enumerate_colorings(fundamental_presentation(d), cq.quandle, "list", cap)
    if not cols:
        return 0
    gens = _conjugation_actions(cq.elements, cq.index, n)
    where = {c: i for i, c in enumerate(cols)}
    parent = list(range(len(cols)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for i, c in enumerate(cols):
            j = where[tuple(g[x] for x in c)]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    return len({find(i) for i in range(len(cols))})


@dataclass(frozen=True)
class OrbitReport:
    ns: tuple[int, ...]
    counts: tuple[int, ...]
    window: int
    stable_value: Optional[int]

    @property
    def stable(self) -> bool:
        return self.stable_value is not None


def trivial_multiplicity_stable(d: LinkDiagram, spec: ClassFamilySpec, ns: Sequence[int],
                                window: int = 2, cap: Optional[int] = None) -> OrbitReport:
    """Multiplicity of the trivial representation (the orbit count) per n,
    with the common value of the last ``window`` entries if they agree."""
    counts = tuple(coloring_orbits(d, spec, n, cap) for n in ns)
    return OrbitReport(tuple(ns), counts, window, stable_tail(counts, window))


def fit_report(d: LinkDiagram, name: str, family: Family, N: int, cap: Optional[int] = None,
               jobs: int = 1, seq: Optional[DimSequence] = None) -> dict:
    """The JSON record for one link and one symmetric family."""
    if seq is None:
        seq = dims_for_link(d, family, N, cap, jobs)
    fit = fit_binomial(seq.values)
    bound = degree_bound_check(fit.poly, d, family)
    normalized = []
    if isinstance(family, ClassFamilySpec) and len(family.partitions) == 1:
        normalized.append(str(normalized_poly(fit.poly, family.partitions[0])))
    return {
        "link": name,
        "family": describe(family),
        "values": list(seq.values),
        "truncated_at": seq.truncated_at,
        "binomial_coeffs": {str(k): c for k, c in fit.poly.coeffs.items()},
        "exact": fit.exact,
        "nonnegative": fit.nonnegative,
        "degree": fit.poly.degree,
        "bound": bound.bound,
        "bound_ok": bound.ok,
        "normalized": normalized,
    }

