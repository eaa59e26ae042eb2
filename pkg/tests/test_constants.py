import math
from fractions import Fraction

import mpmath
import pytest

from hasse_census import constants as K
from hasse_census.arith import build_sieves, factorize, is_squarefree

B5, B6 = 10**5, 10**6


def test_phi_nu():
    assert K.phi_nu(0, 1) == K.phi_nu(2, 1) == 1
    assert K.phi_nu(2, 3) == Fraction(3, 4)
    assert K.phi_nu(1, 6) == Fraction(24, 35)
    assert K.phi_nu(1, 12) == K.phi_nu(1, 6)
    with pytest.raises(ValueError):
        K.phi_nu(3, 5)


def test_c_pair_examples():
    assert K.c_pair(1, 1, 1) == pytest.approx(6 / math.pi**3, rel=1e-15)
    for m in (1, 3, 15, 105):
        assert K.c_pair(m, m, 8) == pytest.approx(4 * float(K.phi_nu(2, m)) / math.pi**3, rel=1e-14)
    # phi_1(3) phi_1(1) / phi_1(3)^2 * phi_2(3) = (3/4) / (6/7)
    assert K.c_pair_rational(3, 1, 1) == Fraction(7, 8)


@pytest.mark.parametrize("d1,d2,r", [(1, 1, 1), (3, 1, 1), (3, 5, 8), (15, 15, 8), (7, 1, 3)])
def test_c_pair_against_product_form(d1, d2, r):
    # c(d, r) = c_0(d1 r) c_0(d2 r) prod_{p not | d1 d2 r} (1 - 1/(2p+1)^2)
    val = K.c_nu(0, d1 * r).value * K.c_nu(0, d2 * r).value * K.euler_product("mobius", B6).value
    for p in factorize(d1 * d2 * r):
        val /= 1 - 1 / (2 * p + 1) ** 2
    assert K.c_pair(d1, d2, r) == pytest.approx(val, rel=1e-12)


def test_enclosures_contain_value_and_shrink():
    for name in ("odd_plus", "odd_chi", "tau2", "double", "c0", "c2"):
        lo = K.euler_product(name, 1000)
        hi = K.euler_product(name, 2000)
        assert lo.tail_low <= lo.value <= lo.tail_high
        assert hi.width <= lo.width
        assert lo.tail_low <= hi.tail_low and hi.tail_high <= lo.tail_high  # nested


def test_enclosure_holds_against_longer_product():
    # the enclosure at B = 1000 must contain the partial product at 10^6, up to its own tail
    for name in ("odd_plus", "odd_chi", "tau2", "double", "c1"):
        e = K.euler_product(name, 1000)
        far = K.euler_product(name, B6)
        slack = abs(far.value - far.partial_product)
        assert e.tail_low - slack <= far.partial_product <= e.tail_high + slack


def test_tail_correction_beats_partial_product():
    e = K.euler_product("odd_plus", B5)
    ref = K.euler_product("odd_plus", B6).value
    assert abs(e.value - ref) < 1e-3 * abs(e.partial_product - ref)


def test_partial_product_direct():
    with mpmath.workdps(30):
        ps = [int(p) for p in build_sieves(1000).primes()]
        direct = mpmath.fprod(1 + mpmath.mpf(1) / (2 * p * (p + 1)) for p in ps if p > 2)
    assert K.euler_product("odd_plus", 1000).partial_product == pytest.approx(float(direct), rel=1e-14)


def test_prime_chi_zeta_against_partial_sums():
    ps = [int(p) for p in build_sieves(B6).primes()]
    for s in (2, 3):
        partial = math.fsum((1 if p % 4 == 1 else -1) * p ** -float(s) for p in ps if p > 2)
        bound = 1 / (B6 * (s - 1) * B6 ** (s - 2))
        assert abs(float(K._prime_chi_zeta(s)) - partial) < bound


def test_series_coefficients():
    coeffs, _ = K._series_data("tau2")
    assert float(coeffs[1][0]) == pytest.approx(1 / 8, abs=1e-20)
    coeffs, _ = K._series_data("odd_chi")
    assert float(coeffs[1][0]) == pytest.approx(0.5, abs=1e-20)
    assert float(coeffs[-1][0]) == pytest.approx(-0.5, abs=1e-20)


def test_truncation_guard():
    with pytest.raises(K.PrecisionError):
        K.tau1(50)
    with pytest.raises(K.PrecisionError):
        K.tau1(1000, precision=1e-30)
    assert K.tau1(B6, precision=1e-8).width < 1e-8


def test_tau_values_and_agreement():
    t1a, t1b = K.tau1(B5), K.tau1(B6)
    t2a, t2b = K.tau2(B5), K.tau2(B6)
    assert round(t1b.value, 3) == 0.207
    assert round(t2b.value, 3) == 0.162
    assert abs(t1a.value - t1b.value) < 1e-8
    assert abs(t2a.value - t2b.value) < 1e-8
    assert t1b.width < 1e-8 and t2b.width < 1e-8
    assert t1a.tail_low <= t1b.value <= t1a.tail_high


def test_cross_formulas():
    for B in (B5, B6):
        assert abs(K.tau1(B).value - 3 * K.constant_C(B).value / math.pi**2) < 1e-10
        assert abs(K.tau2(B).value - K.n2_lead(B).value / 2) < 1e-10
        assert abs(K.n2_lead(B).value - K.n2_lead_closed(B).value) < 1e-10


def test_c_nu_ratios():
    for r in (3, 5, 15, 21):
        ratio = K.c_nu(2, 2 * r).value / K.c_nu(2, 2).value
        expect = math.prod(1 / (1 + 1 / (2 * (p + 1))) for p in factorize(r))
        assert ratio == pytest.approx(expect, rel=1e-13)
    assert K.c_nu(2, 2).value == pytest.approx(6 / 7 * K.c_nu(2, 1).value, rel=1e-14)
    assert K.c_nu(0, 1, B6).width < 1e-8


def test_series_product_identity():
    for z, name in ((1, "odd_plus"), (-1, "odd_chi")):
        assert abs(K.series_z(z, B6) - K.euler_product(name, B6).value) < 1e-6


def test_double_series_rearrangement_is_exact():
    for X in (50, 200, 500):
        assert K.double_series(X) == pytest.approx(K.double_series_naive(X), rel=1e-13)


def test_double_series_identity():
    assert abs(K.double_series(B6) - K.euler_product("double", B6).value) < 1e-6


def test_direct_C_nu_hand_value():
    assert K.direct_C_nu(10, 1, 1, 1, 1, K.PRINCIPAL, nu=0) == 3.5
    # nu = 2 weights each term by phi_2(n)
    exact = sum(float(K.phi_nu(2, n)) / 2 ** len(factorize(n)) if n > 1 else 1.0
                for n in (1, 2, 3, 5, 6, 7, 10))
    assert K.direct_C_nu(10, nu=2) == pytest.approx(exact, rel=1e-14)


def test_direct_C_nu_filters():
    # squarefree n <= 30 with n = 1 mod 4 and (n, 3) = 1: 1, 5, 13, 17, 29
    expect = 1 + 4 * 0.5
    assert K.direct_C_nu(30, a=1, d=3, r=4) == expect
    with pytest.raises(ValueError):
        K.direct_C_nu(30, a=2, r=4)
    with pytest.raises(ValueError):
        K.direct_C_nu(30, d=3, q=3)
    with pytest.raises(ValueError):
        K.direct_C_nu(30, r=3, q=3)
    with pytest.raises(ValueError):
        K.direct_C_nu(30, q=4, character=K.QUADRATIC)


def test_direct_C_nu_main_term():
    x = B6
    principal = K.direct_C_nu(x)
    assert abs(principal * math.sqrt(math.log(x)) / x / K.c_nu(0, 1).value - 1) < 0.15
    for q in (3, 7):
        assert abs(K.direct_C_nu(x, q=q, character=K.QUADRATIC)) < 0.1 * principal


def test_direct_Q():
    # brute force on a small box
    x1, x2 = 40, 30
    total = 0.0
    for n1 in range(1, x1 + 1):
        for n2 in range(1, x2 + 1):
            if math.gcd(n1, n2) == 1 and is_squarefree(n1 * n2):
                total += 2.0 ** -len(factorize(n1 * n2)) if n1 * n2 > 1 else 1.0
    assert K.direct_Q(x1, x2) == pytest.approx(total, rel=1e-13)
    q = K.direct_Q(10**4, 10**4)
    assert abs(q / K.main_term_Q(1e4, 1e4) - 1) < 0.1


def test_predictions():
    pr = K.predict(500)
    assert pr.two_term_total == pytest.approx(pr.main_term - pr.second_term)
    assert pr.second_term > 0
    L = math.log(500)
    ratio = pr.two_term_total / pr.main_term
    assert ratio == pytest.approx(1 - K.tau2().value / K.tau1().value / math.sqrt(L))
    assert K.predict_S(1000) == pytest.approx(864 / math.pi**6 * 1e9)
    assert K.predict_T(300) == pytest.approx(K.constant_C().value * 300**2 / math.log(300))
    assert K.predict_N1(300) == pytest.approx(6 * K.constant_C().value / math.pi**2 * 300**3 / math.log(300))
    with pytest.raises(ValueError):
        K.predict(2)


def test_constants_report_fields():
    rep = K.constants_report(1000)
    names = {d["name"] for d in rep}
    assert {"tau1", "tau2", "C", "c0(1)", "N2 lead"} <= names
    for d in rep:
        assert d["tail_low"] <= d["value"] <= d["tail_high"]
        assert d["truncation_prime"] == 1000
