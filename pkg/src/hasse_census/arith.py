"""Integer primitives: sieves, Jacobi symbols, Hilbert symbols.

Everything here is exact integer arithmetic. ``hilbert`` uses the closed
formulas for the local Hilbert symbol; ``hilbert_oracle`` decides the same
symbol by exhaustive search for a primitive zero of ``z^2 - x s^2 - y t^2``
modulo a prime power, and shares no code with ``hilbert``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_SIEVE_CAP = 10**8
DEFAULT_ORACLE_CAP = 2 * 10**6


def sieve_cap() -> int:
    """Largest sieve limit accepted; ``HASSE_SIEVE_CAP`` overrides the default."""
    env = os.environ.get("HASSE_SIEVE_CAP")
    return int(env) if env else DEFAULT_SIEVE_CAP


# -- small helpers -----------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division (small inputs only)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def square_factor(n: int) -> int | None:
    """Smallest prime p with p^2 | n, or None if n is squarefree."""
    for p, e in sorted(factorize(n).items()):
        if e >= 2:
            return p
    return None


def is_squarefree(n: int) -> bool:
    return n != 0 and square_factor(n) is None


def odd_part(n: int) -> int:
    n = abs(n)
    while n and n % 2 == 0:
        n //= 2
    return n


# -- Factored ----------------------------------------------------------------


@dataclass(frozen=True)
class Factored:
    """sign * 2**alpha * prod(odd_primes), odd part squarefree."""

    sign: int
    alpha: int
    odd_primes: tuple[int, ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.alpha < 0:
            raise ValueError("negative 2-adic valuation")
        ps = self.odd_primes
        if any(p % 2 == 0 or not is_prime(p) for p in ps):
            raise ValueError("odd_primes must be odd primes")
        if any(ps[i] >= ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError("odd_primes must be strictly increasing")

    @property
    def value(self) -> int:
        return self.sign * 2**self.alpha * math.prod(self.odd_primes)

    @property
    def odd(self) -> int:
        """Positive odd part."""
        return math.prod(self.odd_primes)


def factor(n: int) -> Factored:
    """Decompose n as sign * 2^alpha * squarefree odd part.

    Raises ValueError if n is zero or its odd part has a square factor.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    fac = factorize(n)
    alpha = fac.pop(2, 0)
    if any(e > 1 for e in fac.values()):
        raise ValueError(f"odd part of {n} is not squarefree")
    return Factored(1 if n > 0 else -1, alpha, tuple(sorted(fac)))


# -- symbols -----------------------------------------------------------------


def theta(k: int) -> int:
    """1 if the odd integer k is 3 mod 4, else 0 (negative k reduced mod 4)."""
    if k % 2 == 0:
        raise ValueError(f"theta is defined on odd integers, got {k}")
    return 1 if k % 4 == 3 else 0


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1; a is reduced mod n first."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_square_in_Qp(a: int, p: int) -> bool:
    """Whether the squarefree integer a is a square in Q_p."""
    if a == 0:
        raise ValueError("0 is not in Q_p*")
    if not is_squarefree(a):
        raise ValueError(f"{a} is not squarefree")
    _check_prime(p)
    if p == 2:
        return a % 8 == 1
    return a % p != 0 and jacobi(a, p) == 1


def _split(x: int, p: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert(x: int, y: int, p: int) -> int:
    """Local Hilbert symbol (x, y)_p by the closed formulas."""
    if x == 0 or y == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    _check_prime(p)
    xi, u = _split(x, p)
    eta, v = _split(y, p)
    if p == 2:
        e = theta(u) * theta(v) + xi * ((v * v - 1) // 8) + eta * ((u * u - 1) // 8)
        return -1 if e % 2 else 1
    s = -1 if (xi * eta * theta(p)) % 2 else 1
    if eta % 2:
        s *= jacobi(u, p)
    if xi % 2:
        s *= jacobi(v, p)
    return s


# -- solvability oracle ------------------------------------------------------


@lru_cache(maxsize=64)
def _squares_mod(m: int) -> np.ndarray:
    z = np.arange(m, dtype=np.int64)
    table = np.zeros(m, dtype=bool)
    table[(z * z) % m] = True
    return table


def oracle_depth(x: int, y: int, p: int) -> int:
    """Exponent k such that a primitive zero mod p^k certifies a Q_p-zero.

    A primitive zero w has a unit among s, t, so some partial derivative of
    z^2 - x s^2 - y t^2 has valuation m <= v_p(2) + max(v_p x, v_p y);
    Hensel's lemma lifts any zero mod p^(2m+1).
    """
    v = max(_split(x, p)[0], _split(y, p)[0])
    m = v + (1 if p == 2 else 0)
    return 2 * m + 1


def hilbert_oracle(x: int, y: int, p: int, depth: int | None = None,
                   cap: int = DEFAULT_ORACLE_CAP) -> int:
    """(x, y)_p decided by searching for a primitive zero of z^2 - x s^2 - y t^2.

    Any primitive zero has s or t a p-adic unit, so after scaling it is
    enough to try s = 1 and t = 1 with the other coordinate free modulo p^k.
    ``depth`` overrides k (it must be at least ``oracle_depth``).
    """
    if x == 0 or y == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    _check_prime(p)
    k = oracle_depth(x, y, p)
    if depth is not None:
        if depth < k:
            raise ValueError(f"depth {depth} below the certified depth {k}")
        k = depth
    m = p**k
    if m > cap:
        raise ValueError(f"search modulus {p}^{k} = {m} exceeds cap {cap}")
    sq = _squares_mod(m)
    w = np.arange(m, dtype=np.int64)
    w2 = (w * w) % m
    xm, ym = x % m, y % m
    if sq[(xm + ym * w2) % m].any() or sq[(xm * w2 + ym) % m].any():
        return 1
    return -1


def is_square_oracle(a: int, p: int) -> bool:
    """Whether the squarefree a is a square in Q_p, by brute-force roots mod p or 8."""
    if a == 0:
        raise ValueError("0 is not in Q_p*")
    _check_prime(p)
    if a % p == 0:
        return False
    m = 8 if p == 2 else p
    return any((z * z - a) % m == 0 for z in range(m))


# -- sieves ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Squarefree flags and smallest prime factors for 1..limit.

    Arrays are indexed directly by n; entries 0 (and 1 for the prime-factor
    table) are placeholders. Treat the arrays as read-only.
    """

    limit: int
    squarefree_flags: np.ndarray
    smallest_prime_factor: np.ndarray

    def _check(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range 1..{self.limit}")

    def is_squarefree(self, n: int) -> bool:
        n = abs(n)
        self._check(n)
        return bool(self.squarefree_flags[n])

    def prime_factors(self, n: int) -> list[int]:
        """Distinct prime factors of |n|, increasing."""
        n = abs(n)
        self._check(n)
        out = []
        spf = self.smallest_prime_factor
        while n > 1:
            p = int(spf[n])
            out.append(p)
            while n % p == 0:
                n //= p
        return out

    def primes(self) -> np.ndarray:
        idx = np.arange(self.limit + 1)
        mask = (self.smallest_prime_factor == idx) & (idx >= 2)
        return np.flatnonzero(mask)

    def squarefree_upto(self, n: int | None = None) -> np.ndarray:
        """Sorted squarefree integers in [1, n]."""
        n = self.limit if n is None else n
        if n > self.limit:
            raise ValueError(f"{n} exceeds sieve limit {self.limit}")
        return np.flatnonzero(self.squarefree_flags[: n + 1])

    def squarefree_count(self, n: int | None = None) -> int:
        n = self.limit if n is None else n
        if n > self.limit:
            raise ValueError(f"{n} exceeds sieve limit {self.limit}")
        return int(np.count_nonzero(self.squarefree_flags[: n + 1]))


def build_sieves(limit: int, cap: int | None = None) -> SieveTables:
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    cap = sieve_cap() if cap is None else cap
    if limit > cap:
        raise ValueError(f"sieve limit {limit} exceeds cap {cap}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
            flags[p * p :: p * p] = False
    idx = np.arange(limit + 1, dtype=np.int32)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf.flags.writeable = False
    flags.flags.writeable = False
    return SieveTables(limit, flags, spf)


@lru_cache(maxsize=8)
def cached_sieves(limit: int) -> SieveTables:
    return build_sieves(limit)


def omega_and_mu2(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """omega(n) and mu^2(n) for 0 <= n <= n_max (index 0 is a placeholder)."""
    sv = cached_sieves(max(n_max, 2))
    omega = np.zeros(n_max + 1, dtype=np.int8)
    for p in sv.primes():
        if p > n_max:
            break
        omega[p::p] += 1
    return omega, sv.squarefree_flags[: n_max + 1].copy()
