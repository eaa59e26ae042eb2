"""Decide whether (x^2-ay^2)(z^2-bt^2)(u^2-abw^2) = c has a rational point.

For a squarefree triple the variety fails to have rational points exactly
when f(a, b) = 1 and the obstruction sign h(a, b, c) is -1. ``f`` and ``h``
are evaluated from Jacobi and Hilbert symbols; ``h1`` and ``h2`` are the
independent odd-prime / 2-adic evaluations of the same sign from the triple's
gcd parametrization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .arith import (
    factorize,
    hilbert,
    hilbert_oracle,
    is_square_in_Qp,
    is_square_oracle,
    is_squarefree,
    jacobi,
    square_factor,
    theta,
)
from .param import parametrize


class ConsistencyError(RuntimeError):
    """An internal identity that must hold under the guards did not."""


@dataclass(frozen=True)
class Triple:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name, x in (("a", self.a), ("b", self.b), ("c", self.c)):
            if x == 0:
                raise ValueError(f"{name} must be nonzero")
            p = square_factor(x)
            if p is not None:
                raise ValueError(f"{name} = {x} is not squarefree (divisible by {p}^2)")
        if self.c < 0:
            raise ValueError("c must be positive")


@dataclass(frozen=True)
class Verdict:
    has_rational_points: bool
    f_value: int
    h_value: int | None  # None when f = 0: h is not evaluated


def _as_triple(t) -> Triple:
    return t if isinstance(t, Triple) else Triple(*t)


def _require_sqf(*xs: int) -> None:
    for x in xs:
        if not is_squarefree(x):
            raise ValueError(f"{x} is not a nonzero squarefree integer")


def _odd_primes(n: int) -> list[int]:
    return sorted(p for p in factorize(n) if p != 2)


def f2(a: int, b: int) -> int:
    """2-adic part of f: one of a, b, ab is a square in Q_2."""
    _require_sqf(a, b)
    a_even, b_even = a % 2 == 0, b % 2 == 0
    if not a_even and not b_even:
        return int(1 in (a % 8, b % 8, (a * b) % 8))
    if a_even and not b_even:
        return int(b % 8 == 1)
    if b_even and not a_even:
        return int(a % 8 == 1)
    return int((a * b) % 32 == 4)


def f(a: int, b: int) -> int:
    """1 iff at every prime p one of a, b, ab is a square in Q_p."""
    if not f2(a, b):
        return 0
    g = math.gcd(a, b)
    ab_class = (a // g) * (b // g)
    for p in _odd_primes(a * b):
        if a % p and jacobi(a, p) != 1:  # p | b only
            return 0
        if b % p and jacobi(b, p) != 1:  # p | a only
            return 0
        if a % p == 0 and b % p == 0 and jacobi(ab_class, p) != 1:
            return 0
    return 1


def h_contributions(t, primes=None) -> dict[int, int]:
    """(c, b)_p for each prime p | 2bc at which a is not a square in Q_p.

    ``primes`` replaces the index set (it must contain every p | 2bc for the
    product to be the obstruction sign).
    """
    t = _as_triple(t)
    if primes is None:
        primes = sorted(set(factorize(2 * t.b * t.c)))
    return {p: hilbert(t.c, t.b, p) for p in primes if not is_square_in_Qp(t.a, p)}


def h(t, primes=None) -> int:
    return math.prod(h_contributions(t, primes).values())


def h2(a: int, b: int, c: int) -> int:
    """2-adic factor of h from the residues of the odd parts mod 8."""
    alpha = 1 if a % 2 == 0 else 0
    gamma = 1 if c % 2 == 0 else 0
    v = b // 2 if b % 2 == 0 else b
    w = c // 2 if gamma else c
    if a % 8 == 1:
        return 1
    if alpha and b % 8 == 1:
        return 1
    if alpha and b % 2 == 0 and ((a // 2) * v) % 8 == 1:
        e = theta(v) * theta(w) + gamma * (v * v - 1) // 8 + (w * w - 1) // 8
        return -1 if e % 2 else 1
    if a % 8 in (3, 5, 7) and (b % 8 == 1 or (a * b) % 8 == 1):
        e = theta(b) * theta(w) + gamma * (b * b - 1) // 8
        return -1 if e % 2 else 1
    raise ConsistencyError(f"h2({a}, {b}, {c}) fell through: f2(a, b) must be 1")


def _mu_sqf(n: int) -> int:
    return -1 if len(factorize(n)) % 2 else 1


def h1(t) -> int:
    """Odd-prime factor of h as a signed sum over ordered 4-factorizations of c'."""
    t = _as_triple(t)
    if f(t.a, t.b) != 1:
        raise ValueError("h1 is only defined when f(a, b) = 1")
    pm = parametrize(t.a, t.b, t.c)
    d0, d12, d13, d23 = pm.d0, pm.d12, pm.d13, pm.d23
    sa = pm.eps1 * 2**pm.alpha
    sb = pm.eps2 * 2**pm.beta
    g = 2**pm.gamma
    # factors of the summand that do not depend on the factorization
    fixed = (
        jacobi(sb, d0 * d13)
        * jacobi(d23, d12 * d13)
    )
    th012 = theta(d0 * d12)
    primes = _odd_primes(pm.c1)
    total = 0
    for slots in itertools.product(range(4), repeat=len(primes)):
        n = [1, 1, 1, 1]
        for p, s in zip(primes, slots):
            n[s] *= p
        n0, n1, n2, n3 = n
        u = (
            _mu_sqf(n2)
            * (-1 if th012 * theta(d0 * d13 * n0 * n1) else 1)
            * jacobi(sa * d13, n0 * n2)
            * jacobi(sb * d23, n1 * n2)
            * jacobi(g * n2 * n3, d0 * d12)
        )
        total += u * jacobi(pm.a1, n0 * n2) * jacobi(pm.b1, n1 * n2 * d0 * d13)
    total *= fixed
    scale = 2 ** len(primes)
    if abs(total) != scale:
        raise ConsistencyError(f"h1 sum {total} is not +-{scale} for {t}")
    return total // scale


def h_odd_direct(t) -> int:
    """Product of (c, b)_p over odd p | bc with a not a square in Q_p."""
    t = _as_triple(t)
    return math.prod(v for p, v in h_contributions(t).items() if p != 2)


def h_two_direct(t) -> int:
    t = _as_triple(t)
    return 1 if is_square_in_Qp(t.a, 2) else hilbert(t.c, t.b, 2)


def decide(t) -> Verdict:
    t = _as_triple(t)
    fv = f(t.a, t.b)
    if not fv:
        return Verdict(True, 0, None)
    hv = h(t)
    return Verdict(hv == 1, 1, hv)


# -- the same verdict through the brute-force oracles ------------------------


def f_oracle(a: int, b: int) -> int:
    """f with squares detected by exhaustive root search (p | 2ab only)."""
    g = math.gcd(a, b)
    ab_class = (a // g) * (b // g)
    for p in sorted(factorize(2 * a * b)):
        if not any(is_square_oracle(x, p) for x in (a, b, ab_class)):
            return 0
    return 1


def h_oracle(t, cache: dict | None = None) -> int:
    """h with every Hilbert symbol decided by ``hilbert_oracle`` over p | 2abc."""
    t = _as_triple(t)
    cache = {} if cache is None else cache
    s = 1
    for p in sorted(factorize(2 * t.a * t.b * t.c)):
        if is_square_oracle(t.a, p):
            continue
        key = (t.c, t.b, p)
        if key not in cache:
            cache[key] = hilbert_oracle(t.c, t.b, p)
        s *= cache[key]
    return s


def decide_oracle(t, cache: dict | None = None) -> Verdict:
    t = _as_triple(t)
    fv = f_oracle(t.a, t.b)
    if not fv:
        return Verdict(True, 0, None)
    hv = h_oracle(t, cache)
    return Verdict(hv == 1, 1, hv)
