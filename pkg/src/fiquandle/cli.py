"""Command-line front end.

Structured results are written as JSON (sorted keys) to standard output or
``--output``; human-readable summaries go to standard error. Exit status is
0 on success, 1 when an oracle fails, 2 on bad input and 3 when a resource
cap is hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ConsistencyError, InputError, ResourceError

EXIT_OK, EXIT_ORACLE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass(frozen=True)
class JobConfig:
    command: str
    family: Optional[str]
    phi: Optional[str]
    q: int
    dihedral: Optional[int]
    fixture: Optional[str]
    pd: Optional[str]
    n: Optional[int]
    n_max: Optional[int]
    degree: int
    theory: str
    coeff: str
    mode: str
    cap: Optional[int]
    jobs: int
    output: Optional[str]

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "JobConfig":
        get = lambda k, default=None: getattr(ns, k, default)  # noqa: E731
        cfg = cls(ns.command, get("family"), get("phi"), get("q", 2), get("dihedral"),
                  get("fixture"), get("pd"), get("n"), get("n_max"), get("degree", 1),
                  get("theory", "quandle"), get("coeff", "Z"), get("mode", "count"),
                  ns.cap, ns.jobs, ns.output)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.cap is not None and self.cap <= 0:
            raise InputError(f"--cap must be positive, got {self.cap}")
        if self.jobs < 1:
            raise InputError(f"--jobs must be at least 1, got {self.jobs}")
        if self.command in ("homology", "colorings", "fit", "glfit"):
            sources = sum(x is not None for x in (self.family, self.phi, self.dihedral))
            if sources != 1:
                raise InputError("give exactly one of --family, --phi or --dihedral")
        if self.command in ("fit",) and self.family is None:
            raise InputError("fit needs a symmetric family (--family)")
        if self.command == "glfit" and self.phi is None:
            raise InputError("glfit needs a GL family (--phi with --q)")
        if self.command in ("colorings", "fit", "glfit") and (self.fixture is None) == (self.pd is None):
            raise InputError("give exactly one of --fixture or --pd")
        if self.command in ("homology", "colorings") and self.dihedral is None and self.n is None:
            raise InputError("--n is required for a family")
        for name in ("n", "n_max"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InputError(f"--{name.replace('_', '-')} must be non-negative, got {v}")
        if self.degree < 1:
            raise InputError(f"--degree must be at least 1, got {self.degree}")


def _family(cfg: JobConfig):
    from .glclasses import parse_phi, validate_family
    from .perm import parse_family

    if cfg.family is not None:
        return parse_family(cfg.family)
    return validate_family(parse_phi(cfg.phi, cfg.q))


def _quandle(cfg: JobConfig):
    """The quandle selected by the flags and a short label for it."""
    from .families import build_quandle, describe
    from .quandle import dihedral_quandle

    if cfg.dihedral is not None:
        if cfg.dihedral < 1:
            raise InputError(f"--dihedral must be positive, got {cfg.dihedral}")
        return dihedral_quandle(cfg.dihedral), f"R{cfg.dihedral}"
    fam = _family(cfg)
    return build_quandle(fam, cfg.n).quandle, f"{describe(fam)} n={cfg.n}"


def _diagram(cfg: JobConfig):
    from .links import load_fixture, parse_pd

    if cfg.fixture is not None:
        return load_fixture(cfg.fixture), cfg.fixture
    return parse_pd(cfg.pd), "pd"


def run_homology(cfg: JobConfig) -> tuple[dict, str]:
    from .homology import homology_group, parse_coeffs

    X, label = _quandle(cfg)
    coeffs = parse_coeffs(cfg.coeff)
    H = homology_group(X, cfg.degree, cfg.theory, coeffs)
    record = {"theory": cfg.theory, "degree": cfg.degree, "n": cfg.n, "quandle": label,
              "coeffs": H.coeffs, "betti": H.betti, "torsion": list(H.torsion),
              "exponent": H.exponent}
    return record, f"H^{cfg.theory}_{cfg.degree}({label}; {H.coeffs}) = {H}"


def run_colorings(cfg: JobConfig) -> tuple[dict, str]:
    from .links import enumerate_colorings, fundamental_presentation

    d, name = _diagram(cfg)
    X, label = _quandle(cfg)
    p = fundamental_presentation(d)
    result = enumerate_colorings(p, X, cfg.mode, None, cfg.jobs)
    record = {"link": name, "quandle": label, "n": cfg.n, "arcs": d.arc_count}
    if cfg.mode == "list":
        record["colorings"] = [list(c) for c in result]
        record["count"] = len(result)
    else:
        record["count"] = result
    return record, f"chi({name}, {label}) = {record['count']}"


def _table(ns: Sequence[int], values: Sequence[int], fitted) -> str:
    lines = ["   n  value  fitted"]
    for n, v in zip(ns, values):
        lines.append(f"{n:>4}  {v:>5}  {fitted(n)}")
    return "\n".join(lines)


def run_fit(cfg: JobConfig) -> tuple[dict, str]:
    from .fipoly import BinomialPoly, dims_for_link, fit_report

    d, name = _diagram(cfg)
    fam = _family(cfg)
    n_max = 6 if cfg.n_max is None else cfg.n_max
    seq = dims_for_link(d, fam, n_max, None, cfg.jobs)
    if seq.truncated_at is not None and len(seq.values) < 3:
        raise ResourceError(f"too few values to fit; stopped at n={seq.truncated_at} ({seq.stop_reason})")
    record = fit_report(d, name, fam, n_max, None, cfg.jobs, seq)

    poly = BinomialPoly({int(k): v for k, v in record["binomial_coeffs"].items()})
    text = _table(range(len(record["values"])), record["values"], poly)
    text += f"\np(n) = {poly}; degree {record['degree']} vs bound {record['bound']}"
    if record["normalized"]:
        text += f"\nnormalized: {record['normalized'][0]}"
    return record, text


def run_glfit(cfg: JobConfig) -> tuple[dict, str]:
    from .families import describe
    from .fipoly import dims_for_link_gl

    d, name = _diagram(cfg)
    fam = _family(cfg)
    n_max = 4 if cfg.n_max is None else cfg.n_max
    seq, fit = dims_for_link_gl(d, fam, n_max, None, cfg.jobs)
    record = {"link": name, "family": describe(fam), "q": cfg.q, "values": list(seq.values),
              "truncated_at": seq.truncated_at, "qpower_coeffs": None, "residuals": None}
    text = "   n  value\n" + "\n".join(f"{n:>4}  {v:>5}" for n, v in zip(seq.ns, seq.values))
    if fit is not None:
        record["qpower_coeffs"] = [str(c) for c in fit.coeffs]
        record["residuals"] = {str(n): str(r) for n, r in sorted(fit.residuals.items())}
        terms = " + ".join(f"({c})*x^{k}" for k, c in enumerate(fit.coeffs))
        text += f"\nfit in x = {cfg.q}^n: {terms}"
    return record, text


def run_catalog(cfg: JobConfig) -> tuple[dict, str]:
    from .catalog import catalog_check

    report = catalog_check(max_degree=cfg.degree)
    return report.as_dict(), report.table()


COMMANDS = {
    "homology": run_homology,
    "colorings": run_colorings,
    "fit": run_fit,
    "glfit": run_glfit,
    "catalog-check": run_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiquandle",
        description="Quandle homology, coloring invariants and their growth in n.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None,
                        help="override every resource cap (default: QF_CAP or built-in caps)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for coloring searches")
    common.add_argument("--output", default=None, help="write JSON here instead of stdout")

    def quandle_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", default=None, help='symmetric family, e.g. "2" or "2|3"')
        p.add_argument("--phi", default=None, help='GL family, e.g. "x-1:2"')
        p.add_argument("--q", type=int, default=2, help="field size for --phi")

    def link_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--fixture", default=None, help="shipped link diagram name")
        p.add_argument("--pd", default=None, help='PD code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"')

    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("homology", parents=[common], formatter_class=fmt,
                       help="integral or field homology of one quandle")
    quandle_flags(p)
    p.add_argument("--dihedral", type=int, default=None, help="use the dihedral quandle R_r")
    p.add_argument("--n", type=int, default=None, help="family parameter n")
    p.add_argument("--degree", type=int, default=1, help="homological degree i")
    p.add_argument("--theory", choices=("rack", "quandle", "degenerate"), default="quandle")
    p.add_argument("--coeff", default="Z", help="Z, Q or a prime p")

    p = sub.add_parser("colorings", parents=[common], formatter_class=fmt,
                       help="count or list quandle colorings of a link diagram")
    quandle_flags(p)
    link_flags(p)
    p.add_argument("--dihedral", type=int, default=None, help="use the dihedral quandle R_r")
    p.add_argument("--n", type=int, default=None, help="family parameter n")
    p.add_argument("--mode", choices=("count", "list"), default="count")

    p = sub.add_parser("fit", parents=[common], formatter_class=fmt,
                       help="binomial fit of coloring counts for a symmetric family")
    quandle_flags(p)
    link_flags(p)
    p.add_argument("--n-max", type=int, default=6, help="compute n = 0..n-max")

    p = sub.add_parser("glfit", parents=[common], formatter_class=fmt,
                       help="coloring counts for a GL family with a fit in q^n")
    quandle_flags(p)
    link_flags(p)
    p.add_argument("--n-max", type=int, default=4, help="compute n = 0..n-max")

    p = sub.add_parser("catalog-check", parents=[common], formatter_class=fmt,
                       help="run the oracle suite over the built-in catalog")
    p.add_argument("--degree", type=int, default=3, help="check degrees 1..degree")
    return parser


def _emit(record: dict, path: Optional[str]) -> None:
    text = json.dumps(record, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _with_cap(cfg: JobConfig) -> tuple[dict, str]:
    if cfg.cap is None:
        return COMMANDS[cfg.command](cfg)
    # every module reads its caps from the environment
    saved = os.environ.get("QF_CAP")
    os.environ["QF_CAP"] = str(cfg.cap)
    try:
        return COMMANDS[cfg.command](cfg)
    finally:
        if saved is None:
            del os.environ["QF_CAP"]
        else:
            os.environ["QF_CAP"] = saved


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = JobConfig.from_args(ns)
        record, summary = _with_cap(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConsistencyError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    print(summary, file=sys.stderr)
    _emit(record, cfg.output)
    if record.get("truncated_at") is not None:
        print(f"resource cap: sequence stopped at n={record['truncated_at']}; the output is partial",
              file=sys.stderr)
        return EXIT_RESOURCE
    if cfg.command == "catalog-check" and not record["ok"]:
        failed = sorted({o for e in record["entries"] for o, r in e["results"].items() if r == "FAIL"})
        print(f"oracle failure: {', '.join(failed)}", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
