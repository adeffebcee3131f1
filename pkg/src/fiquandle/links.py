"""Link diagrams in PD notation, their fundamental quandle presentations,
and enumeration of quandle colorings.

A crossing ``X[a,b,c,d]`` lists its four edge labels counterclockwise,
starting from the under-strand edge entering the crossing; ``c`` is the
under-strand edge leaving it. The over strand runs either ``d -> b`` (a
positive crossing) or ``b -> d`` (negative). Orientations of over-strand
edges are not written down in PD and are recovered by propagation along
each component.

Colorings: at a positive crossing the outgoing under arc is
``in |> over``; at a negative one it is ``in |>^-1 over``.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence, Union

from .caps import default_caps
from .errors import InputError, ParseError, ResourceError
from .quandle import FiniteQuandle


@dataclass(frozen=True)
class Crossing:
    edges: tuple[int, int, int, int]   # PD labels a, b, c, d
    sign: int                          # +1 if the over strand runs d -> b

    @property
    def over_in(self) -> int:
        return self.edges[3] if self.sign > 0 else self.edges[1]

    @property
    def over_out(self) -> int:
        return self.edges[1] if self.sign > 0 else self.edges[3]


@dataclass(frozen=True)
class LinkDiagram:
    """Validated PD diagram. ``arc_of`` maps each edge label to its arc
    (a maximal over-strand), numbered 0..arc_count-1."""

    crossings: tuple[Crossing, ...]
    arc_of: dict[int, int]
    arc_count: int
    components: int

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(x.sign for x in self.crossings)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def pd(self) -> str:
        return " ".join("X[" + ",".join(map(str, x.edges)) + "]" for x in self.crossings)


UNKNOT = LinkDiagram((), {}, 1, 1)

_TOKEN = re.compile(r"\s*(?:X\s*\[([^\]]*)\]|PD\s*\[|\]|,)")


def _scan(text: str) -> list[tuple[tuple[int, ...], int]]:
    """Crossing tuples with their text offsets. Accepts ``X[...]`` items
    separated by whitespace or commas, optionally wrapped in ``PD[...]``."""
    out = []
    pos = 0
    depth = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"expected 'X[a,b,c,d]', found {text[start:start + 12]!r}", start)
        tok = m.group(0).strip()
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1) is not None:
            fields = [f.strip() for f in m.group(1).split(",")]
            if len(fields) != 4:
                raise ParseError(f"crossing needs 4 labels, got {len(fields)}", start)
            try:
                labels = tuple(int(f) for f in fields)
            except ValueError:
                raise ParseError(f"crossing labels must be integers: {tok!r}", start) from None
            out.append((labels, start))
        elif tok.startswith("PD"):
            depth += 1
        elif tok == "]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ']'", start)
        pos = m.end()
    if depth:
        raise ParseError("unterminated 'PD['", len(text))
    return out


def parse_pd(text: str) -> LinkDiagram:
    """Parse PD text such as ``"X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"``.

    Empty text is the unknot with a single arc.
    """
    items = _scan(text)
    if not items:
        return UNKNOT
    # every label must occur exactly twice
    where: dict[int, list[tuple[int, int]]] = {}
    for k, (labels, _) in enumerate(items):
        for p, e in enumerate(labels):
            where.setdefault(e, []).append((k, p))
    for e, occ in where.items():
        if len(occ) != 2:
            k = occ[0][0]
            what = "dangling" if len(occ) == 1 else f"appears {len(occ)} times"
            raise ParseError(f"edge {e} is {what}", items[k][1])

    def other(e: int, end: tuple[int, int]) -> tuple[int, int]:
        a, b = where[e]
        return b if a == end else a

    # head[e]: the endpoint (crossing, position) where edge e enters a crossing
    head: dict[int, tuple[int, int]] = {}
    sign: list[Optional[int]] = [None] * len(items)
    queue: list[int] = []

    def orient(e: int, end: tuple[int, int], k: int) -> None:
        if e in head:
            if head[e] != end:
                raise ParseError(f"inconsistent orientation on edge {e}", items[k][1])
            return
        head[e] = end
        queue.append(e)

    def decide(k: int, s: int) -> None:
        if sign[k] is not None:
            if sign[k] != s:
                raise ParseError(f"inconsistent orientation at crossing {k + 1}", items[k][1])
            return
        sign[k] = s
        _, b, _, d = items[k][0]
        enter, leave = ((d, 3), (b, 1)) if s > 0 else ((b, 1), (d, 3))
        orient(enter[0], (k, enter[1]), k)
        orient(leave[0], other(leave[0], (k, leave[1])), k)

    for k, (labels, _) in enumerate(items):
        orient(labels[0], (k, 0), k)
        orient(labels[2], other(labels[2], (k, 2)), k)
    while True:
        while queue:
            e = queue.pop()
            for k, pos in where[e]:
                if pos in (1, 3):
                    enters = head[e] == (k, pos)
                    decide(k, 1 if enters == (pos == 3) else -1)
        open_ = [k for k in range(len(items)) if sign[k] is None]
        if not open_:
            break
        # a component that only passes over: orient its first crossing d -> b
        decide(open_[0], 1)

    crossings = tuple(Crossing(labels, sign[k]) for k, (labels, _) in enumerate(items))

    # arcs: edges joined through over-crossings
    parent = {e: e for e in where}

    def find(e: int) -> int:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in crossings:
        ra, rb = find(x.edges[1]), find(x.edges[3])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(e) for e in where})
    number = {r: k for k, r in enumerate(roots)}
    arc_of = {e: number[find(e)] for e in sorted(where)}

    # components: follow edges head -> next edge along the strand
    nxt = {}
    for x in crossings:
        nxt[x.edges[0]] = x.edges[2]
        nxt[x.over_in] = x.over_out
    seen: set[int] = set()
    components = 0
    for e in sorted(where):
        if e in seen:
            continue
        components += 1
        while e not in seen:
            seen.add(e)
            e = nxt[e]
    return LinkDiagram(crossings, arc_of, len(roots), components)


def face_count(d: LinkDiagram) -> int:
    """Number of regions of the plane cut out by the diagram (as a 4-valent
    planar graph). Used to sanity-check that PD data is planar."""
    if not d.crossings:
        return 2
    ends: dict[int, list[tuple[int, int]]] = {}
    for k, x in enumerate(d.crossings):
        for p, e in enumerate(x.edges):
            ends.setdefault(e, []).append((k, p))
    seen = set()
    faces = 0
    for k in range(len(d.crossings)):
        for p in range(4):
            if (k, p) in seen:
                continue
            faces += 1
            dart = (k, p)
            while dart not in seen:
                seen.add(dart)
                e = d.crossings[dart[0]].edges[dart[1]]
                a, b = ends[e]
                other = b if a == dart else a
                dart = (other[0], (other[1] - 1) % 4)
    return faces


# --------------------------------------------------------- presentations

@dataclass(frozen=True)
class Relation:
    out: int
    inp: int
    over: int
    sign: int

    def holds(self, q: FiniteQuandle, colors: Sequence[int]) -> bool:
        table = q.op if self.sign > 0 else q.inv_op
        return table[colors[self.inp]][colors[self.over]] == colors[self.out]


@dataclass(frozen=True)
class QuandlePresentation:
    generators: int
    relations: tuple[Relation, ...]


def fundamental_presentation(d: LinkDiagram) -> QuandlePresentation:
    """One generator per arc and one relation per crossing."""
    rels = tuple(
        Relation(d.arc_of[x.edges[2]], d.arc_of[x.edges[0]], d.arc_of[x.edges[1]], x.sign)
        for x in d.crossings)
    return QuandlePresentation(d.arc_count, rels)


# -------------------------------------------------------------- colorings

@dataclass
class _Search:
    p: QuandlePresentation
    q: FiniteQuandle
    order: list[int]
    by_arc: list[list[Relation]]
    cap: int
    nodes: int = 0

    def _set(self, colors: list[int], arc: int, value: int, trail: list[int]) -> bool:
        """Assign and propagate forced values. False on contradiction."""
        stack = [(arc, value)]
        op, inv = self.q.op, self.q.inv_op
        while stack:
            a, v = stack.pop()
            cur = colors[a]
            if cur >= 0:
                if cur != v:
                    return False
                continue
            colors[a] = v
            trail.append(a)
            for r in self.by_arc[a]:
                i, o, z = colors[r.inp], colors[r.over], colors[r.out]
                if o < 0:
                    continue
                fwd, back = (op, inv) if r.sign > 0 else (inv, op)
                if i >= 0:
                    want = fwd[i][o]
                    if z >= 0:
                        if z != want:
                            return False
                    else:
                        stack.append((r.out, want))
                elif z >= 0:
                    stack.append((r.inp, back[z][o]))
        return True

    def run(self, colors: list[int], depth: int, sink) -> int:
        while depth < len(self.order) and colors[self.order[depth]] >= 0:
            depth += 1
        if depth == len(self.order):
            if sink is not None:
                sink.append(tuple(colors))
            return 1
        arc = self.order[depth]
        total = 0
        for v in range(self.q.size):
            self.nodes += 1
            if self.nodes > self.cap:
                raise ResourceError("coloring search nodes", self.nodes, self.cap)
            trail: list[int] = []
            if self._set(colors, arc, v, trail):
                total += self.run(colors, depth + 1, sink)
            for a in trail:
                colors[a] = -1
        return total


def _search(p: QuandlePresentation, q: FiniteQuandle, cap: int) -> _Search:
    by_arc: list[list[Relation]] = [[] for _ in range(p.generators)]
    for r in p.relations:
        for a in {r.out, r.inp, r.over}:
            by_arc[a].append(r)
    order = sorted(range(p.generators), key=lambda a: (-len(by_arc[a]), a))
    return _Search(p, q, order, by_arc, cap)


def _branch(args) -> tuple[int, list]:
    p, q, cap, value, listing = args
    s = _search(p, q, cap)
    colors = [-1] * p.generators
    sink = [] if listing else None
    trail: list[int] = []
    if not s._set(colors, s.order[0], value, trail):
        return 0, []
    return s.run(colors, 1, sink), sink or []


def enumerate_colorings(p: QuandlePresentation, q: FiniteQuandle, mode: str = "count",
                        cap: Optional[int] = None, jobs: int = 1) -> Union[int, list[tuple[int, ...]]]:
    """Count (``mode="count"``) or list (``mode="list"``) all colorings of the
    generators by elements of ``q`` satisfying every relation.

    Listed colorings are tuples indexed by generator, in lexicographic order.
    With ``jobs > 1`` the first branching generator's values are split
    across worker processes; results do not depend on ``jobs``.
    """
    if mode not in ("count", "list"):
        raise InputError(f"mode must be 'count' or 'list', got {mode!r}")
    cap = default_caps().search if cap is None else cap
    listing = mode == "list"
    if p.generators == 0:
        return [()] if listing else 1
    if q.size == 0:
        return [] if listing else 0
    args = [(p, q, cap, v, listing) for v in range(q.size)]
    if jobs > 1 and q.size > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_branch, args))
    else:
        parts = [_branch(a) for a in args]
    if listing:
        return sorted(c for _, found in parts for c in found)
    return sum(n for n, _ in parts)


def chi(d: LinkDiagram, q: FiniteQuandle, cap: Optional[int] = None, jobs: int = 1) -> int:
    """The counting invariant: number of colorings of ``d`` by ``q``."""
    return enumerate_colorings(fundamental_presentation(d), q, "count", cap, jobs)


# --------------------------------------------------------------- fixtures

@lru_cache(maxsize=1)
def _fixtures() -> dict[str, dict]:
    with resources.files("fiquandle").joinpath("fixtures.json").open() as fh:
        return json.load(fh)


def fixture_names() -> list[str]:
    return sorted(_fixtures())


def fixture_info(name: str) -> dict:
    data = _fixtures()
    if name not in data:
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    return data[name]


def load_fixture(name: str) -> LinkDiagram:
    return parse_pd(fixture_info(name)["pd"])
