"""Built-in quandle catalog and the oracle suite run over it.

Each entry is checked against: the quandle axioms, the rational Betti
formulas (``m^i`` rack, ``m(m-1)^(i-1)`` quandle for m orbits), torsion
primes dividing ``|Inn(X)|``, the rack = quandle + degenerate splitting of
rational dimensions, and functoriality of the FI / VIC structure maps
(pushforward laws, homomorphism property, commuting with the differential).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import gf as G
from .errors import QuandleError
from .glclasses import PhiSpec, VICMorphism, class_quandle_gl, vic_pushforward
from .homology import HomologyGroup, check_chain_map, homology_group
from .perm import ClassFamilySpec, ClassQuandle, FIMorphism, class_quandle, fi_pushforward
from .quandle import FiniteQuandle, check_axioms, dihedral_quandle, inn_group, orbits

ORACLES = ("axioms", "betti", "torsion", "splitting", "functorial")
THEORIES = ("rack", "quandle", "degenerate")


@dataclass(frozen=True)
class Structure:
    """A structure map ``src -> tgt`` with the pushforward used to build it.

    ``push(morphism, element)`` is the pushforward; ``morphism`` is the
    standard inclusion, ``automorphism`` an automorphism of the target
    object used for the identity and composition laws.
    """

    src: ClassQuandle
    tgt: ClassQuandle
    push: Callable
    morphism: object
    identity: object
    automorphism: object


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: Callable[[], FiniteQuandle]
    structure: Optional[Callable[[], Structure]] = None


def _fi_entry(lam: tuple[int, ...], n: int) -> CatalogEntry:
    spec = ClassFamilySpec.of(lam)
    cls = {}

    def tgt() -> ClassQuandle:
        if "q" not in cls:
            cls["q"] = class_quandle(spec, n)
        return cls["q"]

    def structure() -> Structure:
        shift = FIMorphism(n, n, tuple((i + 1) % n for i in range(n)))
        return Structure(class_quandle(spec, n - 1), tgt(), fi_pushforward,
                         FIMorphism.inclusion(n - 1, n), FIMorphism.identity(n), shift)

    name = f"c{n}_({','.join(map(str, lam))})"
    return CatalogEntry(name, lambda: tgt().quandle, structure)


def _vic_entry(q: int, n: int) -> CatalogEntry:
    specs = (PhiSpec.unipotent(q, (2,)),)
    cls = {}

    def tgt() -> ClassQuandle:
        if "q" not in cls:
            cls["q"] = class_quandle_gl(specs, n)
        return cls["q"]

    def structure() -> Structure:
        # an elementary transvection as the automorphism of F^n
        A = tuple(tuple(int(i == j or (i == 0 and j == n - 1)) for j in range(n)) for i in range(n))
        auto = VICMorphism(q, n, n, A, ())
        return Structure(class_quandle_gl(specs, n - 1), tgt(), vic_pushforward,
                         VICMorphism.standard(q, n - 1, n), VICMorphism.identity(q, n), auto)

    return CatalogEntry(f"GL{n}({q})_transv", lambda: tgt().quandle, structure)


def default_catalog() -> list[CatalogEntry]:
    entries = [CatalogEntry(f"R{r}", lambda r=r: dihedral_quandle(r)) for r in (3, 4, 5)]
    entries += [_fi_entry((2,), n) for n in range(2, 6)]
    entries += [_fi_entry((3,), n) for n in range(3, 6)]
    entries += [_vic_entry(2, n) for n in (2, 3)]
    return entries


@dataclass
class EntryResult:
    name: str
    size: int = 0
    orbit_count: int = 0
    inn_order: int = 0
    results: dict[str, str] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    groups: dict[str, list[str]] = field(default_factory=dict)

    def record(self, oracle: str, problems: Sequence[str]) -> None:
        self.results[oracle] = "FAIL" if problems else "pass"
        self.failures.extend(f"{oracle}: {p}" for p in problems)

    def as_dict(self) -> dict:
        return {"name": self.name, "size": self.size, "orbits": self.orbit_count,
                "inn_order": self.inn_order, "results": dict(self.results),
                "failures": list(self.failures), "homology": dict(self.groups)}


@dataclass
class CatalogReport:
    entries: list[EntryResult]
    max_degree: int

    @property
    def ok(self) -> bool:
        return all(not e.failures for e in self.entries)

    def failed_oracles(self) -> list[str]:
        return sorted({o for e in self.entries for o, r in e.results.items() if r == "FAIL"})

    def table(self) -> str:
        width = max(len(e.name) for e in self.entries) if self.entries else 4
        head = f"{'quandle':<{width}}  {'|X|':>4}  " + "  ".join(f"{o:<10}" for o in ORACLES)
        lines = [head, "-" * len(head)]
        for e in self.entries:
            cells = "  ".join(f"{e.results.get(o, '-'):<10}" for o in ORACLES)
            lines.append(f"{e.name:<{width}}  {e.size:>4}  {cells}")
        for e in self.entries:
            for f in e.failures:
                lines.append(f"{e.name}: {f}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "max_degree": self.max_degree,
                "entries": [e.as_dict() for e in self.entries]}


def _prime_factors(n: int) -> set[int]:
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def _check_homology(X: FiniteQuandle, res: EntryResult, max_degree: int) -> None:
    m = res.orbit_count
    H: dict[str, list[HomologyGroup]] = {
        t: [homology_group(X, i, t, "Z") for i in range(1, max_degree + 1)] for t in THEORIES}
    res.groups = {t: [str(g) for g in gs] for t, gs in H.items()}

    betti = []
    for i in range(1, max_degree + 1):
        rack, quandle = H["rack"][i - 1].betti, H["quandle"][i - 1].betti
        if rack != m ** i:
            betti.append(f"rack H_{i} has rank {rack}, expected {m ** i}")
        if quandle != m * (m - 1) ** (i - 1):
            betti.append(f"quandle H_{i} has rank {quandle}, expected {m * (m - 1) ** (i - 1)}")
    res.record("betti", betti)

    torsion = []
    for t, gs in H.items():
        for i, g in enumerate(gs, 1):
            for d in g.torsion:
                bad = sorted(p for p in _prime_factors(d) if res.inn_order % p)
                if bad:
                    torsion.append(f"{t} H_{i} torsion Z/{d} has prime {bad[0]} not dividing |Inn| = {res.inn_order}")
    res.record("torsion", torsion)

    split = []
    for i in range(max_degree):
        r, q, d = (H[t][i].betti for t in THEORIES)
        if r != q + d:
            split.append(f"degree {i + 1}: rack {r} != quandle {q} + degenerate {d}")
    res.record("splitting", split)


def _check_structure(s: Structure, max_degree: int) -> list[str]:
    problems = []
    for x in s.tgt.elements:
        if s.push(s.identity, x) != x:
            problems.append(f"identity pushforward moves {x}")
            break
    composite = s.morphism.then(s.automorphism)
    for x in s.src.elements:
        if s.push(composite, x) != s.push(s.automorphism, s.push(s.morphism, x)):
            problems.append(f"composition law fails at {x}")
            break
    elem_map = []
    for x in s.src.elements:
        y = s.push(s.morphism, x)
        if y not in s.tgt.index:
            problems.append(f"pushforward of {x} leaves the target class")
            return problems
        elem_map.append(s.tgt.index[y])
    src, tgt = s.src.quandle, s.tgt.quandle
    for a in range(src.size):
        for b in range(src.size):
            if elem_map[src.op[a][b]] != tgt.op[elem_map[a]][elem_map[b]]:
                problems.append(f"pushforward is not a quandle map at ({a}, {b})")
                return problems
    for i in range(2, max_degree + 1):
        try:
            check_chain_map(src, tgt, elem_map, i, "quandle")
        except QuandleError as exc:
            problems.append(str(exc))
    return problems


def check_entry(entry: CatalogEntry, max_degree: int = 3) -> EntryResult:
    res = EntryResult(entry.name)
    X = entry.build()
    res.size = X.size
    axioms = check_axioms(X.op)
    res.record("axioms", [] if axioms else [axioms.describe()])
    if not axioms:
        # nothing downstream is meaningful for a non-quandle
        return res
    res.orbit_count = orbits(X).orbit_count
    res.inn_order = inn_group(X).order
    _check_homology(X, res, max_degree)
    if entry.structure is None:
        res.results["functorial"] = "n/a"
    else:
        res.record("functorial", _check_structure(entry.structure(), max_degree))
    return res


def catalog_check(catalog: Optional[Sequence[CatalogEntry]] = None, max_degree: int = 3) -> CatalogReport:
    """Run every oracle over ``catalog`` (the built-in one by default)."""
    if catalog is None:
        catalog = default_catalog()
    return CatalogReport([check_entry(e, max_degree) for e in catalog], max_degree)
