from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational, interpolate, symbols, Poly

from fiquandle.errors import InputError
from fiquandle.fipoly import (BinomialPoly, DimSequence, coloring_orbits, degree_bound_check,
                              dims_for_link, dims_for_link_gl, fit_binomial, fit_q_power, fit_report,
                              forward_differences, normalized_poly, to_monomial,
                              trivial_multiplicity_stable)
from fiquandle.glclasses import PhiSpec
from fiquandle.links import UNKNOT, enumerate_colorings, fundamental_presentation, load_fixture
from fiquandle.perm import ClassFamilySpec, Partition, class_quandle
from oracles import newton_coeffs, orbit_count_full

TRANSP = ClassFamilySpec.of((2,))
TREFOIL_SEQ = (0, 0, 1, 9, 30, 70, 135)


def test_dims_for_link_examples():
    assert dims_for_link(load_fixture("trefoil"), TRANSP, 5).values == TREFOIL_SEQ[:6]
    assert dims_for_link(load_fixture("hopf"), TRANSP, 4).values == (0, 0, 1, 3, 12)
    assert dims_for_link(UNKNOT, TRANSP, 7).values == tuple(comb(n, 2) for n in range(8))


def test_dims_truncate_at_cap():
    seq = dims_for_link(load_fixture("trefoil"), TRANSP, 8, cap=12)
    assert not seq.complete and seq.truncated_at == len(seq.values)
    assert seq.values == TREFOIL_SEQ[:len(seq.values)]
    assert seq.stop_reason


def test_fit_examples():
    fit = fit_binomial(TREFOIL_SEQ)
    assert fit.poly.coeffs == {2: 1, 3: 6} and fit.exact and fit.nonnegative
    assert fit_binomial([4] * 6).poly.coeffs == {0: 4}
    assert fit_binomial([comb(n, 2) for n in range(7)]).poly.coeffs == {2: 1}


def test_fit_rejects_short_sequences():
    with pytest.raises(InputError, match="at least 5"):
        fit_binomial([0, 1, 3, 6], max_degree=2)
    with pytest.raises(InputError):
        fit_binomial([1, 2])


def test_inexact_fit_is_reported():
    fit = fit_binomial([2 ** n for n in range(6)], max_degree=2)
    assert not fit.exact and any(fit.residuals)


@settings(max_examples=60)
@given(st.dictionaries(st.integers(0, 5), st.integers(-20, 20), max_size=4), st.integers(0, 4))
def test_fit_recovers_binomial_coefficients(coeffs, extra):
    p = BinomialPoly(coeffs)
    values = [p(n) for n in range(max(p.degree, 0) + 3 + extra)]
    fit = fit_binomial(values)
    assert fit.exact and fit.poly == p
    assert forward_differences(values)[:len(newton_coeffs(values))] == newton_coeffs(values)


@settings(max_examples=40)
@given(st.dictionaries(st.integers(0, 5), st.integers(-9, 9), max_size=4))
def test_monomial_conversion_matches_sympy(coeffs):
    p = BinomialPoly(coeffs)
    n = symbols("n")
    pts = [(k, p(k)) for k in range(p.degree + 2)]
    want = Poly(interpolate(pts, n), n).all_coeffs()[::-1] if pts else []
    got = to_monomial(p)
    want = [Fraction(int(Rational(c).p), int(Rational(c).q)) for c in want][:len(got)]
    assert got[:len(want)] == want + [0] * (len(got) - len(want)) if len(want) < len(got) else got == want


def test_monomial_trefoil():
    assert to_monomial(BinomialPoly({2: 1, 3: 6})) == [0, Fraction(3, 2), Fraction(-5, 2), 1]


def test_degree_bound_examples():
    tre, hopf = load_fixture("trefoil"), load_fixture("hopf")
    b = degree_bound_check(BinomialPoly({2: 1, 3: 6}), tre, TRANSP)
    assert (b.degree, b.bound, b.ok) == (3, 6, True)
    b = degree_bound_check(BinomialPoly({2: 1, 4: 6}), hopf, TRANSP)
    assert (b.degree, b.bound, b.ok) == (4, 4, True)
    assert not degree_bound_check(BinomialPoly({7: 1}), tre, TRANSP).ok


def test_normalized_examples():
    lam = Partition((2,))
    assert str(normalized_poly(BinomialPoly({2: 1}), lam)) == "1"
    tre = normalized_poly(BinomialPoly({2: 1, 3: 6}), lam)
    assert str(tre) == "1 + 2*(n-2)"
    assert all(tre(n) == 1 + 2 * (n - 2) for n in range(2, 12))
    hopf = normalized_poly(BinomialPoly({2: 1, 4: 6}), lam)
    assert str(hopf) == "1 + C(n-2,2)"
    assert all(hopf(n) == 1 + comb(n - 2, 2) for n in range(2, 12))


def test_normalized_failures():
    lam = Partition((2,))
    assert not normalized_poly(BinomialPoly({1: 1}), lam).divisible       # nonzero at n = 1
    assert not normalized_poly(BinomialPoly({0: 1}), lam).divisible
    # rational quotients are allowed: C(n,3)/C(n,2) = (n-2)/3
    third = normalized_poly(BinomialPoly({2: 1, 3: 1}), lam)
    assert third.divisible and third(5) == 2


def test_fit_report_record():
    rec = fit_report(load_fixture("hopf"), "hopf", TRANSP, 6)
    assert rec["values"] == [0, 0, 1, 3, 12, 40, 105]
    assert rec["binomial_coeffs"] == {"2": 1, "4": 6}
    assert rec["degree"] == 4 and rec["bound"] == 4 and rec["bound_ok"] and rec["exact"]
    assert rec["normalized"] == ["1 + C(n-2,2)"]


@pytest.mark.parametrize("name", ["trefoil", "figure8", "unknot"])
def test_knot_additivity(name):
    d = load_fixture(name)
    N = 7
    union = fit_binomial(dims_for_link(d, ClassFamilySpec.of((2,), (3,)), N).values).poly
    single = [fit_binomial(dims_for_link(d, ClassFamilySpec.of(l), N).values).poly for l in [(2,), (3,)]]
    assert union == single[0] + single[1]


@pytest.mark.parametrize("name", ["trefoil", "figure8", "hopf", "unlink2"])
def test_fits_are_exact_nonnegative_and_bounded(name):
    d = load_fixture(name)
    for lams in ([(2,)], [(3,)]):
        fam = ClassFamilySpec.of(*lams)
        N = 7 if lams == [(2,)] else 9
        fit = fit_binomial(dims_for_link(d, fam, N).values)
        assert fit.exact and fit.nonnegative
        assert degree_bound_check(fit.poly, d, fam).ok


def test_gl_unknot_transvections():
    seq, fit = dims_for_link_gl(UNKNOT, [PhiSpec.unipotent(2, (2,))], 4)
    assert seq.values == (0, 0, 3, 21, 105) and seq.parameter == "q^n"
    assert fit.coeffs == (1, Fraction(-3, 2), Fraction(1, 2))
    assert all(r == 0 for r in fit.residuals.values())
    assert all(fit(n) == v for n, v in zip(seq.ns, seq.values))


def test_gl_edge_cases():
    seq, _ = dims_for_link_gl(UNKNOT, [PhiSpec.of(2, {(1, 1, 1): (1,)})], 2)
    assert seq.values == (0, 0, 2)
    seq, fit = dims_for_link_gl(UNKNOT, [PhiSpec.unipotent(2, (2,))], 1)
    assert seq.values == (0, 0) and fit is None
    with pytest.raises(InputError):
        fit_q_power(DimSequence((1, 2)), 2)
    with pytest.raises(InputError):
        dims_for_link_gl(UNKNOT, TRANSP, 3)


def test_orbit_counts_match_full_group_oracle():
    for name in ("trefoil", "hopf", "figure8"):
        d = load_fixture(name)
        p = fundamental_presentation(d)
        for n in (2, 3, 4, 5):
            X = class_quandle(TRANSP, n)
            cols = enumerate_colorings(p, X.quandle, "list")
            assert coloring_orbits(d, TRANSP, n) == orbit_count_full(cols, X.elements, n)


def test_trivial_multiplicity_examples():
    rep = trivial_multiplicity_stable(UNKNOT, TRANSP, [2, 3, 4, 5])
    assert rep.counts == (1, 1, 1, 1) and rep.stable_value == 1
    rep = trivial_multiplicity_stable(load_fixture("trefoil"), TRANSP, [3, 4, 5])
    assert rep.counts == (2, 2, 2) and rep.stable_value == 2
    assert coloring_orbits(load_fixture("trefoil"), TRANSP, 1) == 0
