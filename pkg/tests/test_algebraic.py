import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from klength.algebraic import (AlgebraicReal, AmbiguousClassification, RealApprox,
                               bernoulli_product, ceil_times, classify_bernoulli,
                               conversion_factor, dimension_target, emit_tables, entropy,
                               entropy_direct, lambda_measure, partial_sum_identity,
                               solve_root, sturm_count)

P = AlgebraicReal.p


def mp_root(k):
    # independent oracle: mpmath's bracketing solver at 60 digits
    with mpmath.workdps(60):
        if k == 1:
            return mpmath.mpf(1) / 2
        return mpmath.findroot(lambda x: x ** k + x - 1, (0.5, 1), solver="anderson")


def frac(x):
    return Fraction(*mpmath.libmp.to_rational(x._mpf_))


@pytest.mark.parametrize("k", [1, 2, 3, 5, 10, 37, 100])
def test_root_encloses_oracle(k):
    root = solve_root(k, 150)
    assert root.width <= Fraction(1, 2 ** 150)
    with mpmath.workdps(60):
        x = mp_root(k)
        assert root.lower <= frac(x) + Fraction(1, 10 ** 55)
        assert frac(x) - Fraction(1, 10 ** 55) <= root.upper
    assert Fraction(1, 2) <= root.lower < 1


@pytest.mark.parametrize("k,value", [(1, Fraction(1, 2)), (2, Fraction("0.61803")),
                                     (10, Fraction("0.83508"))])
def test_root_examples(k, value):
    assert abs(solve_root(k, 64).approx().mid - value) <= Fraction(1, 10 ** 5)


def test_root_refinement_nests():
    coarse = solve_root(7, 40)
    fine = solve_root(7, 300)
    again = solve_root(7, 40)
    assert coarse.lower <= fine.lower <= fine.upper <= coarse.upper
    assert again.lower <= fine.lower and fine.upper <= again.upper


def test_roots_increase():
    ps = [P(k) for k in range(1, 13)]
    for a, b in zip(ps, ps[1:]):
        assert float(a) < float(b)
        assert a.enclosure().hi < b.enclosure().lo


def test_ring_examples():
    assert P(2) + P(2) ** 2 == 1
    assert (P(4) * 1).coeffs == P(4).coeffs
    p3 = P(3) ** 4
    assert p3.coeffs == (0, 1, -1)
    assert p3.enclosure().contains(frac(mp_root(3) ** 4)) or \
        abs(float(p3) - float(mp_root(3) ** 4)) < 1e-15


def test_mixed_k_rejected():
    with pytest.raises(TypeError):
        P(2) + P(3)


def test_compare_examples():
    assert (P(2) + P(2) ** 2).compare(1) == 0
    assert float(P(2)) < float(P(3))
    assert AlgebraicReal(4).is_zero()
    assert P(3) > Fraction(1, 2)
    assert P(1) == Fraction(1, 2)


def test_reducible_defining_polynomial_zero():
    # x^5 + x - 1 = (x^2 - x + 1)(x^3 + x^2 - 1); p_5 kills the cubic factor
    p = P(5)
    cubic = p ** 3 + p ** 2 - 1
    assert cubic.coeffs  # nonzero as a reduced polynomial
    assert cubic.is_zero()
    quad = p ** 2 - p + 1
    assert quad.sign() == 1
    p11 = P(11)
    # x^2 - x + 1 divides x^11 + x - 1 too, and has no real root
    assert (p11 ** 2 - p11 + 1).sign() == 1


def test_sturm_count():
    # (x - 1/3)(x - 2/3)(x - 2)
    poly = [Fraction(-4, 9), Fraction(20, 9), -3, 1]
    assert sturm_count(poly, Fraction(0), Fraction(1)) == 2
    assert sturm_count(poly, Fraction(0), Fraction(3)) == 3
    assert sturm_count([1, 0, 1], Fraction(-5), Fraction(5)) == 0


@settings(max_examples=60)
@given(st.integers(2, 8), st.lists(st.integers(-50, 50), max_size=12))
def test_sign_agrees_with_high_precision_float(k, coeffs):
    a = AlgebraicReal(k, coeffs)
    with mpmath.workdps(60):
        x = mp_root(k)
        v = sum(c * x ** i for i, c in enumerate(coeffs))
        if abs(v) > mpmath.mpf(10) ** -40:
            assert a.sign() == (1 if v > 0 else -1)


def test_lambda_examples():
    assert lambda_measure(3, "") == 1
    assert lambda_measure(2, "01") == P(2) ** 3
    assert abs(float(lambda_measure(2, "01")) - 0.2361) < 1e-4
    assert lambda_measure(1, "0110") == Fraction(1, 16)


@settings(max_examples=100)
@given(st.text("01", max_size=30), st.integers(1, 8))
def test_kraft_additivity(s, k):
    assert lambda_measure(k, s + "0") + lambda_measure(k, s + "1") == lambda_measure(k, s)
    assert lambda_measure(k, s) == bernoulli_product(k, s)


def test_q_power_at_least_two():
    for k in range(1, 9):
        assert AlgebraicReal.q(k) ** k >= 2
        assert P(k) ** k <= Fraction(1, 2)
        assert AlgebraicReal.q(k) * P(k) == 1


@pytest.mark.parametrize("k,n", [(1, 0), (1, 9), (2, 5), (7, 20), (3, 0)])
def test_partial_sum_identity(k, n):
    assert partial_sum_identity(k, n)


def test_enclosure_nesting():
    a = P(6) ** 9 - 3 * P(6) + 2
    prev = a.enclosure(40)
    for prec in (80, 160, 320):
        cur = a.enclosure(prec)
        assert prev.lo <= cur.lo <= cur.hi <= prev.hi
        prev = cur


def test_entropy_examples():
    assert entropy(1).contains(1)
    h2 = entropy(2)
    assert h2.width <= Fraction(1, 2 ** 128)
    assert abs(float(h2) - 0.9594) < 1e-4
    for j in range(1, 7):
        assert entropy(j, 80).overlaps(entropy_direct(j, 80))


def test_conversion_examples():
    assert abs(float(conversion_factor(1, 2)) - 1.4404) < 1e-4
    assert conversion_factor(3, 3) == RealApprox(Fraction(1), Fraction(1))
    for j in range(1, 6):
        for k in range(1, 6):
            r = conversion_factor(j, k, 64)
            assert (r.lo >= 1) == (j <= k)


def test_dimension_identity():
    # -h(p_j)/log p_k == ratio * (p_j + j (1 - p_j)) up to overlap
    for j in range(1, 5):
        for k in range(1, 5):
            r = conversion_factor(j, k, 100)
            p = solve_root(j, 100)
            lo = r.lo * (p.lower + j * (1 - p.upper))
            hi = r.hi * (p.upper + j * (1 - p.lower))
            assert dimension_target(j, k, 80).overlaps(RealApprox(lo, hi))


def test_ceil_times():
    ratio = float(conversion_factor(2, 1))
    for n in (1, 4, 17, 1000, 123457):
        import math
        assert ceil_times(n, 2, 1) == math.ceil(n * ratio)
    assert ceil_times(9, 4, 4) == 9


def test_tables():
    roots, conv = emit_tables()
    assert dict(roots)[5] == "0.75488"
    table = {(j, k): v for j, k, v in conv}
    assert table[(3, 5)].startswith("1.3")
    assert table[(1, 2)] == "1.4404"
    assert all(table[(k, k)] == "1.0000" for k in range(1, 6))


def test_rounding_half_even():
    assert RealApprox(Fraction(5, 2), Fraction(5, 2)).rounded(0) == "2"
    assert RealApprox(Fraction(1, 8), Fraction(1, 8)).rounded(2) == "0.12"
    assert RealApprox(Fraction(1, 3), Fraction(2, 3)).rounded(0) is None


def test_classify():
    assert classify_bernoulli("0.5") == 1
    assert classify_bernoulli("0.61803", "1e-4") == 2
    assert classify_bernoulli("0.7", "1e-4", 50) is None
    with pytest.raises(AmbiguousClassification):
        classify_bernoulli("0.9", "0.5", 10)
    with pytest.raises(ValueError):
        classify_bernoulli("1.2")
