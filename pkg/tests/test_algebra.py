"""Exact-arithmetic layer: rings, canonical strings, numeric evaluation."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpvolterra.algebra import (QQ, SYMBOLIC, ExactDivisionError, PhaseRing,
                                QuadraticRing, RationalRing, alpha_polynomial,
                                canonical, evaluate_numeric, format_element,
                                numeric_ring, parse_element, rational_sqrt)

R = SYMBOLIC


def frac(el_text):
    el, amp = parse_element(R, el_text)
    return el, amp


class TestScalars:
    def test_rational_arithmetic(self):
        assert QQ(1, 2) + QQ(1, 3) == QQ(5, 6)
        assert QQ(7, -14) == QQ(-1, 2)

    def test_rational_sqrt(self):
        assert rational_sqrt(QQ(9, 4)) == QQ(3, 2)
        assert rational_sqrt(QQ(0)) == QQ(0)
        assert rational_sqrt(QQ(2)) is None
        assert rational_sqrt(QQ(49, 36)) == QQ(7, 6)


class TestSymbolicRing:
    def test_add_cancel(self):
        s = R.s(1)
        assert R.is_zero(R.add(s, R.neg(s)))

    def test_s_squares_to_alpha(self):
        assert R.eq(R.mul(R.s(1), R.s(1)), R.s(2))
        assert R.eq(R.mul(R.s(1), R.s(-1)), R.one())

    def test_exact_division(self):
        # (alpha^2 - 1) / (alpha - 1) = alpha + 1
        num = R.sub(R.s(4), R.one())
        den = R.sub(R.s(2), R.one())
        q = R.div(num, den)
        assert R.eq(q, R.add(R.s(2), R.one()))

    def test_division_by_monomial(self):
        x = R.scale(R.s(3), QQ(5, 7))
        assert R.eq(R.div(x, R.s(1)), R.scale(R.s(2), QQ(5, 7)))

    def test_inexact_division_raises(self):
        with pytest.raises(ExactDivisionError):
            R.div(R.add(R.s(2), R.one()), R.add(R.s(2), R.s(1)))

    def test_alpha_polynomial_even_only(self):
        x = R.add(R.s(4), R.scale(R.s(2), QQ(3)))
        assert alpha_polynomial(x) == {2: QQ(1), 1: QQ(3)}
        assert alpha_polynomial(R.s(1)) is None
        assert alpha_polynomial(R.s(-2)) is None


class TestNumericRings:
    def test_square_alpha_uses_rationals(self):
        ring = numeric_ring(1)
        assert isinstance(ring, RationalRing)
        assert ring.s(1) == QQ(1)
        ring4 = numeric_ring(4)
        assert ring4.s(1) == QQ(2)
        assert ring4.s(-1) == QQ(1, 2)

    def test_non_square_alpha_uses_quadratic_pairs(self):
        ring = numeric_ring(2)
        assert isinstance(ring, QuadraticRing)
        s = ring.s(1)
        assert ring.eq(ring.mul(s, s), ring.from_fraction(QQ(2)))
        # 1/sqrt(2) * sqrt(2) = 1
        assert ring.eq(ring.mul(ring.s(-1), s), ring.one())

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            numeric_ring(0)
        with pytest.raises(ValueError):
            numeric_ring(-3)


class TestPhaseRing:
    def test_product_to_sum(self):
        P = PhaseRing(R)
        x = P.scale(P.sin_phi(1), QQ(1, 4))
        y = P.scale(P.cos_phi(3), QQ(1, 3))
        prod = P.mul(x, y)
        # sin(phi)cos(3phi)/12 = sin(4phi)/24 - sin(2phi)/24
        want = P.sub(P.scale(P.sin_phi(4), QQ(1, 24)),
                     P.scale(P.sin_phi(2), QQ(1, 24)))
        assert P.eq(prod, want)

    def test_sin_cos_identity(self):
        P = PhaseRing(R)
        one = P.add(P.mul(P.sin_phi(1), P.sin_phi(1)),
                    P.mul(P.cos_phi(1), P.cos_phi(1)))
        assert P.eq(one, P.one())

    def test_doubling(self):
        P = PhaseRing(R)
        lhs = P.scale(P.mul(P.sin_phi(1), P.cos_phi(1)), QQ(2))
        assert P.eq(lhs, P.sin_phi(2))


GOLDEN_OMEGA4 = "-(A^4*sqrt(alpha)*(5*alpha^2+34*alpha+29))/6912"


class TestCanonicalStrings:
    def test_golden_frequency_string_round_trip(self):
        el, amp = parse_element(R, GOLDEN_OMEGA4)
        assert amp == 4
        assert format_element(R, el, 4) == GOLDEN_OMEGA4

    def test_content_factoring(self):
        el, _ = parse_element(R, "(alpha^2-1)/3")
        assert format_element(R, el) == "(alpha^2-1)/3"
        el2 = R.scale(el, QQ(-2))
        assert format_element(R, el2) == "-(2*(alpha^2-1))/3"

    def test_negative_powers_go_to_denominator(self):
        el = R.scale(R.s(-1), QQ(1, 2))
        assert format_element(R, el) == "1/(2*sqrt(alpha))"

    def test_zero(self):
        assert format_element(R, R.zero()) == "0"
        el, amp = parse_element(R, "0")
        assert R.is_zero(el) and amp == 0

    def test_canonical_idempotent_on_text(self):
        text = "A^2*((sqrt(alpha)*sin(2*phi))/6-(alpha*cos(2*phi))/3)"
        P = PhaseRing(R)
        once = canonical(P, text)
        assert canonical(P, once) == once

    def test_numeric_ring_strings(self):
        ring = numeric_ring(2)
        s_inv = ring.s(-1)
        # 1/sqrt(2) = sqrt(2)/2, printed in terms of sqrt(alpha)
        assert format_element(ring, s_inv) == "sqrt(alpha)/2"

    def test_phase_parse_matches_build(self):
        P = PhaseRing(R)
        el, amp = parse_element(
            P, "A^3*((alpha*(alpha+1)*sin(phi))/48+(sqrt(alpha)*(alpha+1)*cos(phi))/48)")
        assert amp == 3
        apo = R.scale(R.add(R.s(2), R.one()), QQ(1, 48))
        want = P.add(P.mul(P.lift(R.mul(apo, R.s(2))), P.sin_phi(1)),
                     P.mul(P.lift(R.mul(apo, R.s(1))), P.cos_phi(1)))
        assert P.eq(el, want)

    def test_rejects_mixed_amplitude_sum(self):
        with pytest.raises(ValueError):
            parse_element(R, "A^2*alpha+A^3*alpha")


class TestNumericEvaluation:
    def test_polynomial_at_alpha_one(self):
        el, _ = parse_element(R, "alpha+7")
        v = evaluate_numeric(R, el, alpha=1)
        assert v == 8

    def test_golden_omega4_at_alpha_one(self):
        el, _ = parse_element(R, GOLDEN_OMEGA4)
        with mpmath.workdps(60):
            want = -mpmath.mpf(68) / 6912
            got = evaluate_numeric(R, el, alpha=1, dps=60)
            assert abs(got - want) < mpmath.mpf(10) ** -50

    def test_phase_evaluation(self):
        P = PhaseRing(R)
        el = P.sin_phi(3)
        with mpmath.workdps(60):
            v = evaluate_numeric(P, el, alpha=QQ(7, 3), phi=mpmath.pi / 6, dps=60)
            assert abs(v - 1) < mpmath.mpf(10) ** -55

    def test_fixed_ring_alpha_consistency(self):
        ring = numeric_ring(2)
        with mpmath.workdps(50):
            v = evaluate_numeric(ring, ring.s(1))
            assert abs(v - mpmath.sqrt(2)) < mpmath.mpf(10) ** -40
        with pytest.raises(ValueError):
            evaluate_numeric(ring, ring.s(1), alpha=3)


# ---------------------------------------------------------------------------
# property tests

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


def sym_elements():
    return st.dictionaries(st.integers(min_value=-4, max_value=6),
                           rationals.filter(lambda q: q != 0),
                           max_size=4).map(
        lambda d: {k: QQ(v) for k, v in d.items()})


@given(sym_elements(), sym_elements(), sym_elements())
@settings(max_examples=60, deadline=None)
def test_symbolic_ring_laws(x, y, z):
    assert R.eq(R.add(x, y), R.add(y, x))
    assert R.eq(R.mul(x, y), R.mul(y, x))
    assert R.eq(R.mul(x, R.add(y, z)),
                R.add(R.mul(x, y), R.mul(x, z)))
    assert R.eq(R.mul(R.mul(x, y), z), R.mul(x, R.mul(y, z)))


@given(sym_elements(), sym_elements())
@settings(max_examples=40, deadline=None)
def test_evaluation_is_ring_homomorphism(x, y):
    alpha = QQ(7, 5)
    with mpmath.workdps(50):
        vx = evaluate_numeric(R, x, alpha=alpha)
        vy = evaluate_numeric(R, y, alpha=alpha)
        vxy = evaluate_numeric(R, R.mul(x, y), alpha=alpha)
        vsum = evaluate_numeric(R, R.add(x, y), alpha=alpha)
        scale = max(1, abs(vx), abs(vy), abs(vx * vy))
        assert abs(vxy - vx * vy) <= mpmath.mpf(10) ** -30 * scale
        assert abs(vsum - (vx + vy)) <= mpmath.mpf(10) ** -30 * scale


@given(sym_elements())
@settings(max_examples=60, deadline=None)
def test_format_parse_round_trip(x):
    text = format_element(R, x, amp_power=3)
    el, amp = parse_element(R, text)
    assert R.eq(el, x)
    assert R.is_zero(x) or amp == 3


@given(sym_elements(), sym_elements())
@settings(max_examples=40, deadline=None)
def test_division_inverts_multiplication(x, y):
    if R.is_zero(y):
        return
    prod = R.mul(x, y)
    assert R.eq(R.div(prod, y), x)


@given(st.dictionaries(st.integers(min_value=1, max_value=5),
                       rationals.filter(lambda q: q != 0), max_size=3),
       st.dictionaries(st.integers(min_value=0, max_value=5),
                       rationals.filter(lambda q: q != 0), max_size=3))
@settings(max_examples=40, deadline=None)
def test_phase_eval_homomorphism(sin_d, cos_d):
    P = PhaseRing(R)
    x = P.zero()
    for k, v in sin_d.items():
        x = P.add(x, P.scale(P.sin_phi(k), QQ(v)))
    for k, v in cos_d.items():
        x = P.add(x, P.scale(P.cos_phi(k), QQ(v)))
    y = P.add(P.scale(P.sin_phi(1), QQ(1, 3)), P.lift(R.s(1)))
    alpha = QQ(3, 2)
    with mpmath.workdps(50):
        phi = mpmath.mpf(1) / 7
        vx = evaluate_numeric(P, x, alpha=alpha, phi=phi)
        vy = evaluate_numeric(P, y, alpha=alpha, phi=phi)
        vxy = evaluate_numeric(P, P.mul(x, y), alpha=alpha, phi=phi)
        scale = max(1, abs(vx * vy))
        assert abs(vxy - vx * vy) <= mpmath.mpf(10) ** -30 * scale
