"""Euler-product constants, asymptotic predictions and direct-summation checks.

Each product is evaluated as an exact-ish partial product over p <= B in
mpmath, times a certified enclosure of the tail over p > B. For the tail the
log of a local factor is expanded in x = 1/p,

    log F(x) = c2 x^2 + c3 x^3 + R(x),

with c_j obtained from Cauchy's formula on the circle |x| = RHO and R bounded
by the maximum modulus M there: |R(x)| <= M (x/RHO)^4 / (1 - x/RHO). The sums
of p^-j (and chi_4(p) p^-j) over p > B come from the prime zeta function and
its chi_4 twist, minus the partial sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from .arith import cached_sieves, factorize, jacobi, omega_and_mu2

MIN_TRUNCATION = 100
DEFAULT_TRUNCATION = 10**6
DPS = 40
RHO = mpmath.mpf(1) / 4
N_COEFF = 64  # Cauchy nodes for the Taylor coefficients
N_MAX = 1024  # nodes for the maximum-modulus estimate
M_SAFETY = 2  # headroom on the sampled maximum


class PrecisionError(ValueError):
    """The truncation is too small to certify the requested precision."""


@dataclass(frozen=True)
class EulerConstant:
    name: str
    value: float
    truncation_prime: int
    partial_product: float
    tail_low: float
    tail_high: float
    # high-precision copies used when constants are combined
    mp_value: mpmath.mpf = field(repr=False, compare=False, default=None)
    mp_low: mpmath.mpf = field(repr=False, compare=False, default=None)
    mp_high: mpmath.mpf = field(repr=False, compare=False, default=None)

    @property
    def width(self) -> float:
        return self.tail_high - self.tail_low

    def contains(self, x: float) -> bool:
        return self.tail_low <= x <= self.tail_high

    def scaled(self, name: str, factor) -> EulerConstant:
        """Multiply by a positive high-precision factor."""
        with mpmath.workdps(DPS):
            factor = mpmath.mpf(factor)
            if factor <= 0:
                raise ValueError("scale factor must be positive")
            return _make(name, self.truncation_prime, self.mp_value * factor,
                         mpmath.mpf(self.partial_product) * factor,
                         self.mp_low * factor, self.mp_high * factor)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "truncation_prime": self.truncation_prime,
            "partial_product": self.partial_product,
            "tail_low": self.tail_low,
            "tail_high": self.tail_high,
            "width": self.width,
        }


def _make(name, B, value, partial, low, high) -> EulerConstant:
    # float rounding must not break low <= value <= high
    lo = float(low)
    hi = float(high)
    lo = math.nextafter(lo, -math.inf) if lo > low else lo
    hi = math.nextafter(hi, math.inf) if hi < high else hi
    return EulerConstant(name, float(value), B, float(partial), lo, hi,
                         mp_value=value, mp_low=low, mp_high=high)


def _sum(a: EulerConstant, b: EulerConstant, name: str) -> EulerConstant:
    with mpmath.workdps(DPS):
        return _make(name, a.truncation_prime, a.mp_value + b.mp_value,
                     mpmath.mpf(a.partial_product) + mpmath.mpf(b.partial_product),
                     a.mp_low + b.mp_low, a.mp_high + b.mp_high)


# -- local factors -----------------------------------------------------------


@dataclass(frozen=True)
class LocalFactor:
    """F(p) = num(p)/den(p) * sqrt((p-1)/p)^half_sqrt, with F(1/x) = exp(log_series(x, chi))."""

    name: str
    num: Callable[[int, int], int]
    den: Callable[[int, int], int]
    log_series: Callable  # (x, chi) -> log F, analytic near x = 0
    odd_only: bool
    twisted: bool
    half_sqrt: bool


def _chi4(p: int) -> int:
    return 0 if p % 2 == 0 else (1 if p % 4 == 1 else -1)


def _phi_factor(nu: int) -> LocalFactor:
    # 1 + phi_nu(p)/(2p) = (2p + nu + 1)/(2p + nu)
    return LocalFactor(
        f"c{nu}(1)",
        num=lambda p, c: 2 * p + nu + 1,
        den=lambda p, c: 2 * p + nu,
        log_series=lambda x, c: (mpmath.log(2 + (nu + 1) * x) - mpmath.log(2 + nu * x)
                                 + mpmath.log(1 - x) / 2),
        odd_only=False, twisted=False, half_sqrt=True,
    )


FACTORS: dict[str, LocalFactor] = {
    # 1 + 1/(2p(p+1)) over p > 2
    "odd_plus": LocalFactor(
        "odd_plus",
        num=lambda p, c: 2 * p * (p + 1) + 1,
        den=lambda p, c: 2 * p * (p + 1),
        log_series=lambda x, c: mpmath.log(1 + x * x / (2 * (1 + x))),
        odd_only=True, twisted=False, half_sqrt=False,
    ),
    # 1 + chi_4(p)/(2p(p+1)) over p > 2
    "odd_chi": LocalFactor(
        "odd_chi",
        num=lambda p, c: 2 * p * (p + 1) + c,
        den=lambda p, c: 2 * p * (p + 1),
        log_series=lambda x, c: mpmath.log(1 + c * x * x / (2 * (1 + x))),
        odd_only=True, twisted=True, half_sqrt=False,
    ),
    # (1 - 1/p)^(1/2) (1 + 3/(2p) + 1/p^2) / (1 + 1/p) over all p
    "tau2": LocalFactor(
        "tau2",
        num=lambda p, c: 2 * p * p + 3 * p + 2,
        den=lambda p, c: 2 * p * (p + 1),
        log_series=lambda x, c: (mpmath.log(2 + 3 * x + 2 * x * x) - mpmath.log(2 + 2 * x)
                                 + mpmath.log(1 - x) / 2),
        odd_only=False, twisted=False, half_sqrt=True,
    ),
    # 1 + 1/(p(p + 3/2)) over p > 2
    "double": LocalFactor(
        "double",
        num=lambda p, c: 2 * p * p + 3 * p + 2,
        den=lambda p, c: p * (2 * p + 3),
        log_series=lambda x, c: mpmath.log(2 + 3 * x + 2 * x * x) - mpmath.log(2 + 3 * x),
        odd_only=True, twisted=False, half_sqrt=False,
    ),
    # 1 - 1/(2p+1)^2 over all p
    "mobius": LocalFactor(
        "mobius",
        num=lambda p, c: 4 * p * (p + 1),
        den=lambda p, c: (2 * p + 1) ** 2,
        log_series=lambda x, c: mpmath.log(1 - x * x / (2 + x) ** 2),
        odd_only=False, twisted=False, half_sqrt=False,
    ),
}
for _nu in (0, 1, 2):
    FACTORS[f"c{_nu}"] = _phi_factor(_nu)


# -- tail machinery ----------------------------------------------------------


@lru_cache(maxsize=None)
def _series_data(name: str):
    """(c2, c3) per character value and the remainder constant M RHO^-4."""
    lf = FACTORS[name]
    chis = (1, -1) if lf.twisted else (1,)
    with mpmath.workdps(DPS):
        coeffs = {}
        big_m = mpmath.mpf(0)
        for chi in chis:
            vals = [lf.log_series(RHO * mpmath.expjpi(2 * mpmath.mpf(k) / N_COEFF), chi)
                    for k in range(N_COEFF)]
            cs = []
            for j in range(4):
                s = mpmath.fsum(vals[k] * mpmath.expjpi(-2 * mpmath.mpf(j * k) / N_COEFF)
                                for k in range(N_COEFF))
                cs.append(mpmath.re(s) / N_COEFF / RHO**j)
            if abs(cs[0]) > mpmath.mpf(10) ** -25 or abs(cs[1]) > mpmath.mpf(10) ** -25:
                raise ValueError(f"{name}: local factor is not 1 + O(1/p^2)")
            coeffs[chi] = (cs[2], cs[3])
            for k in range(N_MAX):
                x = RHO * mpmath.expjpi(2 * mpmath.mpf(k) / N_MAX)
                big_m = max(big_m, abs(lf.log_series(x, chi)))
        return coeffs, M_SAFETY * big_m / RHO**4


@lru_cache(maxsize=None)
def _prime_chi_zeta(s: int):
    """sum over odd primes of chi_4(p) p^-s, via Moebius inversion of log L."""
    with mpmath.workdps(DPS + 10):
        total = mpmath.mpf(0)
        k = 1
        while mpmath.mpf(3) ** (-k * s) > mpmath.mpf(10) ** -(DPS + 5):
            mu = _mobius(k)
            if mu:
                if k % 2:
                    lval = mpmath.dirichlet(k * s, [0, 1, 0, -1])
                else:
                    lval = mpmath.zeta(k * s) * (1 - mpmath.mpf(2) ** (-k * s))
                total += mpmath.mpf(mu) / k * mpmath.log(lval)
            k += 1
        return +total


@lru_cache(maxsize=None)
def _prime_zeta(s: int):
    with mpmath.workdps(DPS + 10):
        return +mpmath.primezeta(s)


def _mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


@lru_cache(maxsize=16)
def _prime_list(B: int) -> tuple[int, ...]:
    return tuple(int(p) for p in cached_sieves(max(B, 2)).primes() if p <= B)


@lru_cache(maxsize=16)
def _partial_sums(B: int):
    """sum_{p<=B} p^-j and sum_{p<=B} chi_4(p) p^-j for j = 2, 3."""
    with mpmath.workdps(DPS):
        out = {}
        for j in (2, 3):
            plain = mpmath.fsum(mpmath.mpf(p) ** -j for p in _prime_list(B))
            twist = mpmath.fsum(_chi4(p) * mpmath.mpf(p) ** -j for p in _prime_list(B))
            out[j] = (plain, twist)
        return out


def _tail_sums(B: int):
    ps = _partial_sums(B)
    with mpmath.workdps(DPS):
        return {j: (_prime_zeta(j) - ps[j][0], _prime_chi_zeta(j) - ps[j][1]) for j in (2, 3)}


@lru_cache(maxsize=64)
def euler_product(name: str, B: int) -> EulerConstant:
    """Enclosure of the full product of the named local factor, truncated at p <= B."""
    if B < MIN_TRUNCATION:
        raise PrecisionError(f"truncation {B} below minimum {MIN_TRUNCATION}")
    lf = FACTORS[name]
    with mpmath.workdps(DPS):
        prod = mpmath.mpf(1)
        sq = mpmath.mpf(1)
        for p in _prime_list(B):
            if lf.odd_only and p == 2:
                continue
            c = _chi4(p)
            prod *= mpmath.mpf(lf.num(p, c)) / lf.den(p, c)
            if lf.half_sqrt:
                sq *= mpmath.mpf(p - 1) / p
        if lf.half_sqrt:
            prod *= mpmath.sqrt(sq)
        coeffs, rem_const = _series_data(name)
        tails = _tail_sums(B)
        log_tail = mpmath.mpf(0)
        for j, idx in ((2, 0), (3, 1)):
            plain, twist = tails[j]
            if lf.twisted:
                a_j = (coeffs[1][idx] + coeffs[-1][idx]) / 2
                b_j = (coeffs[1][idx] - coeffs[-1][idx]) / 2
                log_tail += a_j * plain + b_j * twist
            else:
                log_tail += coeffs[1][idx] * plain
        ratio = 1 / (RHO * B)
        if ratio >= 1:
            raise PrecisionError("truncation too small for the tail expansion")
        rem = rem_const / (1 - ratio) / (3 * mpmath.mpf(B) ** 3)
        rem += mpmath.mpf(10) ** -(DPS - 8)  # rounding slack
        value = prod * mpmath.exp(log_tail)
        low = prod * mpmath.exp(log_tail - rem)
        high = prod * mpmath.exp(log_tail + rem)
        return _make(name, B, value, prod, low, high)


def _certify(c: EulerConstant, precision: float | None) -> EulerConstant:
    if precision is not None and c.width > precision:
        raise PrecisionError(
            f"{c.name}: enclosure width {c.width:.3e} at truncation "
            f"{c.truncation_prime} exceeds requested {precision:.3e}")
    return c


# -- named constants ---------------------------------------------------------


def phi_nu(nu: int, r: int) -> Fraction:
    """prod over p | r of (1 + nu/(2p))^-1."""
    if nu not in (0, 1, 2):
        raise ValueError("nu must be 0, 1 or 2")
    if r < 1:
        raise ValueError("r must be positive")
    out = Fraction(1)
    for p in factorize(r):
        out *= Fraction(2 * p, 2 * p + nu)
    return out


def c_nu(nu: int, r: int = 1, truncation: int = DEFAULT_TRUNCATION,
         precision: float | None = None) -> EulerConstant:
    if nu not in (0, 1, 2):
        raise ValueError("nu must be 0, 1 or 2")
    if r < 1:
        raise ValueError("r must be positive")
    base = euler_product(f"c{nu}", truncation)
    adj = Fraction(1)
    for p in factorize(r):
        adj *= Fraction(2 * p + nu, 2 * p + nu + 1)
    with mpmath.workdps(DPS):
        k = mpmath.mpf(adj.numerator) / adj.denominator / mpmath.sqrt(mpmath.pi)
    return _certify(base.scaled(f"c{nu}({r})", k), precision)


def c_pair_rational(d1: int, d2: int, r: int) -> Fraction:
    """c(d, r) divided by 6/pi^3."""
    for x in (d1, d2, r):
        if x < 1:
            raise ValueError("arguments must be positive")
    return (phi_nu(1, d1 * r) * phi_nu(1, d2 * r) / phi_nu(1, d1 * d2 * r) ** 2
            * phi_nu(2, d1 * d2 * r))


def c_pair(d1: int, d2: int, r: int) -> float:
    q = c_pair_rational(d1, d2, r)
    return 6 / math.pi**3 * q.numerator / q.denominator


def tau1(truncation: int = DEFAULT_TRUNCATION, precision: float | None = None) -> EulerConstant:
    with mpmath.workdps(DPS):
        k = 15 / mpmath.pi**5
        a = euler_product("odd_plus", truncation).scaled("", 3 * k)
        b = euler_product("odd_chi", truncation).scaled("", k)
    return _certify(_sum(a, b, "tau1"), precision)


def constant_C(truncation: int = DEFAULT_TRUNCATION, precision: float | None = None) -> EulerConstant:
    with mpmath.workdps(DPS):
        k = 5 / mpmath.pi**3
        a = euler_product("odd_plus", truncation).scaled("", 3 * k)
        b = euler_product("odd_chi", truncation).scaled("", k)
    return _certify(_sum(a, b, "C"), precision)


def tau2(truncation: int = DEFAULT_TRUNCATION, precision: float | None = None) -> EulerConstant:
    with mpmath.workdps(DPS):
        k = mpmath.mpf(153) / (16 * mpmath.pi**3 * mpmath.sqrt(mpmath.pi))
    return _certify(euler_product("tau2", truncation).scaled("tau2", k), precision)


def n2_lead_closed(truncation: int = DEFAULT_TRUNCATION) -> EulerConstant:
    """Leading constant of N_2 in closed form: 153/(8 pi^(7/2)) times the tau2 product."""
    with mpmath.workdps(DPS):
        k = mpmath.mpf(153) / (8 * mpmath.pi**3 * mpmath.sqrt(mpmath.pi))
    return euler_product("tau2", truncation).scaled("N2 lead", k)


def n2_lead(truncation: int = DEFAULT_TRUNCATION) -> EulerConstant:
    """Leading constant of N_2 assembled from its ingredients.

    (nu2(1)/4 + nu2(-1)/8) / pi^3 * c_2(2) * prod_{p>2}(1 + 1/(p(p + 3/2))).
    """
    from .identities import nu2

    weight = Fraction(nu2(1), 4) + Fraction(nu2(-1), 8)
    c2 = c_nu(2, 2, truncation)
    d = euler_product("double", truncation)
    with mpmath.workdps(DPS):
        k = mpmath.mpf(weight.numerator) / weight.denominator / mpmath.pi**3
        val = k * c2.mp_value * d.mp_value
        lo = k * c2.mp_low * d.mp_low
        hi = k * c2.mp_high * d.mp_high
        part = k * mpmath.mpf(c2.partial_product) * mpmath.mpf(d.partial_product)
    return _make("N2 lead", truncation, val, part, lo, hi)


def all_constants(truncation: int = DEFAULT_TRUNCATION) -> list[EulerConstant]:
    return [
        tau1(truncation),
        tau2(truncation),
        constant_C(truncation),
        c_nu(0, 1, truncation),
        c_nu(1, 1, truncation),
        c_nu(2, 1, truncation),
        c_nu(2, 2, truncation),
        n2_lead(truncation),
    ]


def constants_report(truncation: int = DEFAULT_TRUNCATION) -> list[dict]:
    return [c.as_dict() for c in all_constants(truncation)]


# -- predictions -------------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    P: int
    main_term: float
    second_term: float
    two_term_total: float

    def as_dict(self) -> dict:
        return {"P": self.P, "main_term": self.main_term, "second_term": self.second_term,
                "two_term_total": self.two_term_total}


def _check_P(P: int) -> None:
    if P < 3:
        raise ValueError("predictions need P >= 3")


def predict(P: int, truncation: int = DEFAULT_TRUNCATION) -> Prediction:
    _check_P(P)
    L = math.log(P)
    main = tau1(truncation).value * P**3 / L
    second = tau2(truncation).value * P**3 / L**1.5
    return Prediction(P, main, second, main - second)


def predict_S(P: int) -> float:
    _check_P(P)
    return 864 / math.pi**6 * P**3


def predict_N1(P: int, truncation: int = DEFAULT_TRUNCATION) -> float:
    _check_P(P)
    return 6 * constant_C(truncation).value / math.pi**2 * P**3 / math.log(P)


def predict_T(P: int, truncation: int = DEFAULT_TRUNCATION) -> float:
    _check_P(P)
    return constant_C(truncation).value * P**2 / math.log(P)


# -- direct summation --------------------------------------------------------

PRINCIPAL = "principal"
QUADRATIC = "quadratic"


def _character_table(n_max: int, q: int, character: str) -> np.ndarray:
    if character == PRINCIPAL:
        res = np.array([1.0 if math.gcd(k, q) == 1 else 0.0 for k in range(q)])
    elif character == QUADRATIC:
        if q % 2 == 0 or q < 1:
            raise ValueError("the quadratic character needs an odd modulus q")
        res = np.array([float(jacobi(k, q)) for k in range(q)])
    else:
        raise ValueError(f"unknown character {character!r}")
    return res[np.arange(n_max + 1) % q]


def _phi_nu_table(n_max: int, nu: int) -> np.ndarray:
    logs = np.zeros(n_max + 1)
    if nu:
        for p in cached_sieves(max(n_max, 2)).primes():
            if p > n_max:
                break
            logs[p::p] += math.log(2 * p / (2 * p + nu))
    return np.exp(logs)


def _weights(x: int, a: int, d: int, r: int, q: int, character: str, nu: int) -> np.ndarray:
    """mu^2(n) chi(n) phi_nu(n) / 2^omega(n) on 0..x with the coprimality and congruence filters."""
    omega, mu2 = omega_and_mu2(x)
    w = mu2 * np.ldexp(1.0, -omega.astype(np.int64))
    w[0] = 0.0
    w *= _character_table(x, q, character)
    w *= _phi_nu_table(x, nu)
    n = np.arange(x + 1)
    if d > 1:
        w[np.gcd(n, d) != 1] = 0.0
    if r > 1:
        w[n % r != a % r] = 0.0
    return w


def _check_filters(a: int, d: int, r: int, q: int) -> None:
    if min(d, r, q) < 1:
        raise ValueError("d, r, q must be positive")
    if math.gcd(a, r) != 1:
        raise ValueError("need gcd(a, r) = 1")
    if math.gcd(d, r * q) != 1:
        raise ValueError("need gcd(d, rq) = 1")
    if math.gcd(r, q) != 1:
        raise ValueError("need gcd(r, q) = 1")


def direct_C_nu(x: int, a: int = 1, d: int = 1, r: int = 1, q: int = 1,
                character: str = PRINCIPAL, nu: int = 0) -> float:
    """sum over n <= x, (n, d) = 1, n = a mod r of mu^2(n) chi(n) phi_nu(n) / 2^omega(n)."""
    if x < 2:
        raise ValueError("x must be at least 2")
    _check_filters(a, d, r, q)
    return math.fsum(_weights(int(x), a, d, r, q, character, nu))


def _totient(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def _delta(q: int, character: str) -> int:
    return 1 if character == PRINCIPAL or q == 1 else 0


def main_term_C_nu(x: float, a: int = 1, d: int = 1, r: int = 1, q: int = 1,
                   character: str = PRINCIPAL, nu: int = 0,
                   truncation: int = DEFAULT_TRUNCATION) -> float:
    _check_filters(a, d, r, q)
    c = c_nu(nu, d * r * q, truncation).value
    return _delta(q, character) * c / _totient(r) * x / math.sqrt(math.log(x))


def direct_Q(x1: int, x2: int, a1: int = 1, a2: int = 1, d1: int = 1, d2: int = 1,
             r: int = 1, q1: int = 1, q2: int = 1, chi1: str = PRINCIPAL,
             chi2: str = PRINCIPAL) -> float:
    """sum over coprime n1 <= x1, n2 <= x2 of mu^2(n1 n2) chi1(n1) chi2(n2) / 2^omega(n1 n2).

    The coprimality condition is expanded as sum_{e | (n1, n2)} mu(e).
    """
    _check_filters(a1, d1, r, q1)
    _check_filters(a2, d2, r, q2)
    w1 = _weights(int(x1), a1, d1, r, q1, chi1, 0)
    w2 = _weights(int(x2), a2, d2, r, q2, chi2, 0)
    mob = mobius_table(min(int(x1), int(x2)))
    total = []
    for e in np.flatnonzero(mob):
        total.append(mob[e] * w1[e::e].sum() * w2[e::e].sum())
    return math.fsum(total)


def main_term_Q(x1: float, x2: float, d1: int = 1, d2: int = 1, r: int = 1) -> float:
    return (c_pair(d1, d2, r) / _totient(r) ** 2 * x1 * x2
            / math.sqrt(math.log(x1) * math.log(x2)))


def mobius_table(n_max: int) -> np.ndarray:
    omega, mu2 = omega_and_mu2(n_max)
    mob = np.where(omega % 2 == 1, -1, 1).astype(np.int8) * mu2
    mob[0] = 0
    return mob.astype(np.int8)


# -- series identities -------------------------------------------------------


def series_z(z: int, M: int) -> float:
    """sum over odd squarefree m <= M of z^theta(m) phi_2(m) / (2^omega(m) m^2)."""
    if z not in (1, -1):
        raise ValueError("z must be +1 or -1")
    omega, mu2 = omega_and_mu2(M)
    m = np.arange(M + 1)
    w = mu2 * np.ldexp(1.0, -omega.astype(np.int64)) * _phi_nu_table(M, 2)
    w[0] = 0.0
    w[m % 2 == 0] = 0.0
    w = w / np.maximum(m, 1).astype(float) ** 2
    if z == -1:
        w[m % 4 == 3] *= -1
    return math.fsum(w[::-1])


def _double_weight(X: int) -> np.ndarray:
    """F(n) = prod over p | n of p / (2p + 3), divided by n^2, on odd squarefree n."""
    omega, mu2 = omega_and_mu2(X)
    logs = np.zeros(X + 1)
    for p in cached_sieves(max(X, 2)).primes():
        if p > X:
            break
        logs[p::p] += math.log(p / (2 * p + 3))
    n = np.arange(X + 1)
    w = mu2 * np.exp(logs) / np.maximum(n, 1).astype(float) ** 2
    w[0] = 0.0
    w[n % 2 == 0] = 0.0
    return w


def double_series(X: int) -> float:
    """sum over k, l <= X odd with mu^2(kl) = 1 of F(k) F(l).

    F(n) = mu^2(2n) phi_2(n) / (2^omega(n) n^2) prod_{p|n} (1 + 1/(2(p+1)))^-1,
    and the coprimality of k and l is expanded by Moebius over their gcd.
    """
    w = _double_weight(X)
    mob = mobius_table(X)
    terms = []
    for e in np.flatnonzero(mob):
        if e % 2 == 0:
            continue
        s = w[e::e].sum()
        terms.append(mob[e] * s * s)
    return math.fsum(terms)


def double_series_naive(X: int) -> float:
    """The same double sum by direct pairwise enumeration (small X only)."""
    w = _double_weight(X)
    idx = np.flatnonzero(w)
    g = np.gcd.outer(idx, idx)
    return float((np.outer(w[idx], w[idx]) * (g == 1)).sum())
