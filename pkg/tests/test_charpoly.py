import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wreathfpp.charpoly import (
    BRACKET,
    EXACT_ONE,
    EXACT_ZERO,
    DerangementProfile,
    RationalPoly,
    char_polynomial,
    coset_average_fixed,
    derivative_at_zero,
    fixed_point_gap,
    fpp_from_profile,
    fpp_of_set,
    frac_str,
    mean_fpp,
    parse_frac,
    profile,
    star_orbit_count,
    to_decimal,
)
from wreathfpp.errors import ValidationError
from wreathfpp.permgroup import (
    Perm,
    conjugate_set,
    cosets,
    normalizer_in_sym,
    parse_perm,
    perm_set,
    subgroup_classes,
    symmetric_group,
)

from conftest import group, random_subset

profiles4 = st.lists(st.integers(0, 6), min_size=4, max_size=4).filter(any).map(
    lambda c: DerangementProfile(4, (c[0], c[1], c[2], 0, c[3]), sum(c)))


def brute_poly_value(p, x):
    return sum(Fraction(p.counts[k], p.total) * (1 - (1 - x) ** k) for k in range(p.d + 1))


class TestProfile:
    def test_examples(self):
        assert profile(symmetric_group(3)).counts == (2, 3, 0, 1)
        assert profile(group("(1,2),(3,4)", 4)).counts == (1, 0, 2, 0, 1)
        assert profile([Perm.identity(2)]).counts == (0, 0, 1)

    def test_empty(self):
        with pytest.raises(ValidationError):
            profile([])

    def test_invalid_d_minus_one(self):
        with pytest.raises(ValidationError):
            DerangementProfile(3, (0, 0, 1, 0), 1)

    def test_conjugation_invariant(self):
        rng = random.Random(7)
        for _ in range(20):
            S = random_subset(rng, 4)
            g = rng.choice(symmetric_group(4).sorted())
            assert profile(conjugate_set(S, g)) == profile(S)


class TestPolynomial:
    def test_cyclic3(self):
        f = char_polynomial(profile(group("(1,2,3)", 3)))
        assert f.coeffs == (0, 1, -1, Fraction(1, 3))
        # equals 1/3*(x - 1)^3 + 1/3
        for x in (Fraction(0), Fraction(1, 7), Fraction(1)):
            assert f(x) == Fraction(1, 3) * (x - 1) ** 3 + Fraction(1, 3)

    def test_sym2(self):
        assert char_polynomial(profile(symmetric_group(2))).coeffs == (0, 1, Fraction(-1, 2))

    def test_derangements_only(self):
        f = char_polynomial(profile(perm_set([parse_perm("(1,2,3)", 3)])))
        assert f.is_zero() and f.degree == -1

    def test_arithmetic(self):
        a = RationalPoly((1, 2))
        b = RationalPoly((0, 1, 1))
        assert (a * b).coeffs == (0, 1, 3, 2)
        assert (a + b - b) == a
        assert b.derivative().coeffs == (1, 2)
        assert b.shift_down().coeffs == (1, 1)

    @given(profiles4, st.fractions(0, 1))
    def test_matches_definition(self, p, x):
        assert char_polynomial(p)(x) == brute_poly_value(p, x)

    @given(profiles4, st.fractions(0, 1))
    def test_shape_properties(self, p, x):
        f = char_polynomial(p)
        assert f(0) == 0
        assert 0 <= f(x) <= 1
        assert f.derivative()(x) >= 0
        assert f.derivative().derivative()(x) <= 0

    @given(profiles4)
    def test_denominators_power_of_size(self, p):
        g = fixed_point_gap(p)
        assert g.degree <= p.d - 1
        for c in g.coeffs:
            assert p.total ** p.d % c.denominator == 0


class TestDerivative:
    def test_examples(self):
        assert derivative_at_zero(profile(symmetric_group(3))) == 1
        assert derivative_at_zero(profile(group("(1,2)", 3))) == 2
        assert derivative_at_zero(profile([Perm.identity(5)])) == 5

    def test_matches_polynomial(self):
        p = profile(group("(1,2),(3,4)", 4))
        assert char_polynomial(p).derivative()(0) == derivative_at_zero(p)

    def test_equals_burnside_for_groups(self):
        for H in subgroup_classes(4):
            assert derivative_at_zero(profile(H)) == coset_average_fixed(H)


class TestClassifier:
    def test_sym3(self):
        v = fpp_of_set(symmetric_group(3))
        assert v.kind == EXACT_ZERO and v.certificate.data["derivative_at_zero"] == "1/1"

    def test_transposition(self):
        v = fpp_of_set(group("(1,2)", 3))
        assert v.kind == EXACT_ONE and v.certificate.reason == "DerangementFree"

    @pytest.mark.parametrize("gens,ref", [
        ("(1,2)(3,4)", "0.4563109873079255"),
        ("(1,2),(3,4)", "0.7044022574778126"),
    ])
    def test_reference_roots(self, gens, ref):
        v = fpp_of_set(group(gens, 4))
        assert v.kind == BRACKET
        assert v.lo < Fraction(ref) < v.hi or abs(v.midpoint - Fraction(ref)) < Fraction(1, 10**12)
        assert abs(float(v) - float(ref)) < 1e-12

    def test_cubic_cross_check(self):
        # x = 1 - u, u the real root of u^3 + u^2 + u - 1
        mpmath.mp.dps = 40
        u = mpmath.findroot(lambda u: u**3 + u**2 + u - 1, 0.5)
        v = fpp_of_set(group("(1,2)(3,4)", 4))
        x = mpmath.mpf(1) - u
        assert mpmath.mpf(v.lo.numerator) / v.lo.denominator <= x
        assert x <= mpmath.mpf(v.hi.numerator) / v.hi.denominator

    def test_decimal_digits(self):
        assert fpp_of_set(group("(1,2)(3,4)", 4)).decimal == "0.456310987307924"
        assert fpp_of_set(group("(1,2),(3,4)", 4)).decimal == "0.704402257477915"

    @pytest.mark.parametrize("prec", [1, 10, 60, 200])
    def test_precision(self, prec):
        p = profile(group("(1,2),(3,4)", 4))
        v = fpp_from_profile(p, precision=prec)
        g = fixed_point_gap(p)
        assert v.hi - v.lo <= Fraction(1, 2 ** prec)
        assert g(v.lo) > 0 > g(v.hi)

    def test_exact_root_is_bracketed(self):
        # f = (2/3)(2x - x^2) has the dyadic fixed point 1/2, which bisection hits
        p = DerangementProfile(2, (1, 0, 2), 3)
        assert fixed_point_gap(p)(Fraction(1, 2)) == 0
        v = fpp_from_profile(p, precision=20)
        assert v.kind == BRACKET
        assert v.lo < Fraction(1, 2) < v.hi
        assert v.hi - v.lo <= Fraction(1, 2 ** 20)

    def test_bad_precision(self):
        with pytest.raises(ValidationError):
            fpp_from_profile(profile(symmetric_group(3)), precision=0)

    def test_record_roundtrip(self):
        rec = fpp_of_set(group("(1,2)(3,4)", 4)).to_record()
        assert parse_frac(rec["bracket_lo"]) < parse_frac(rec["bracket_hi"])
        assert rec["certificate_reason"] == "RootBracket"

    @settings(max_examples=60, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_brackets_certified(self, rnd):
        S = random_subset(rnd, 4)
        v = fpp_of_set(S)
        p = profile(S)
        if p.counts[0] == 0:
            assert v.kind == EXACT_ONE
        elif derivative_at_zero(p) <= 1:
            assert v.kind == EXACT_ZERO
        else:
            g = fixed_point_gap(p)
            assert v.kind == BRACKET
            assert 0 < v.lo < v.hi < 1
            assert g(v.lo) > 0 > g(v.hi)


class TestMean:
    def test_exact_average(self):
        one = fpp_of_set(group("(1,2)", 3))
        zero = fpp_of_set(symmetric_group(3))
        m = mean_fpp([one, zero])
        assert m.is_exact and m.value == Fraction(1, 2)

    def test_bracket_average_width(self):
        a = fpp_of_set(group("(1,2)(3,4)", 4))
        b = fpp_of_set(group("(1,2),(3,4)", 4))
        m = mean_fpp([a, b, fpp_of_set(symmetric_group(4))])
        assert m.kind == BRACKET
        assert m.hi - m.lo <= Fraction(1, 2 ** 60)
        assert m.lo <= (a.hi + b.hi) / 3 and m.hi >= (a.lo + b.lo) / 3


class TestBurnside:
    def test_transposition_coset(self):
        Q = group("(1,2,3)", 3)
        A = cosets(Q, symmetric_group(3))[1]
        assert coset_average_fixed(A) == 1

    def test_normalizer_case(self):
        H = group("(1,2)", 3)
        g = parse_perm("(1,2)", 3)
        assert coset_average_fixed(H) == 2
        assert star_orbit_count(H, g) == 2

    def test_transitive_sym(self):
        assert coset_average_fixed(symmetric_group(4)) == 1

    def test_part_two_all_normalizers(self):
        for H in subgroup_classes(4):
            N = normalizer_in_sym(H)
            for A in cosets(H, N):
                assert coset_average_fixed(A) == star_orbit_count(H, A.representative)


class TestFormatting:
    def test_frac_str(self):
        assert frac_str(Fraction(0)) == "0/1"
        assert frac_str(Fraction(-3, 6)) == "-1/2"
        assert parse_frac("6/4") == Fraction(3, 2)

    def test_to_decimal(self):
        assert to_decimal(Fraction(1, 3), 4) == "0.3333"
        assert to_decimal(Fraction(1), 15) == "1"
        assert to_decimal(Fraction(0)) == "0"
        assert to_decimal(Fraction(2, 3), 3) == "0.667"
