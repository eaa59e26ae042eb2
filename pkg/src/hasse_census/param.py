"""Split a squarefree triple into 2-adic data, signs and pairwise gcd parts."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import is_squarefree, odd_part


@dataclass(frozen=True)
class Parametrization:
    """a = e1 2^alpha d0 d12 d13 a',  b = e2 2^beta d0 d12 d23 b',  c = 2^gamma d0 d13 d23 c'."""

    eps1: int
    eps2: int
    alpha: int
    beta: int
    gamma: int
    d0: int
    d12: int
    d13: int
    d23: int
    a1: int
    b1: int
    c1: int

    def coprimality_ok(self) -> bool:
        g = math.gcd
        d = self.d12 * self.d13 * self.d23
        return (
            g(self.d12, self.d13) == 1
            and g(self.d12, self.d23) == 1
            and g(self.d13, self.d23) == 1
            and g(self.a1 * self.b1 * self.c1, d) == 1
            and g(self.a1, self.b1 * self.c1) == 1
            and g(self.b1, self.c1) == 1
        )


def _v2(n: int) -> int:
    return (abs(n) & -abs(n)).bit_length() - 1


def parametrize(a: int, b: int, c: int) -> Parametrization:
    for name, x in (("a", a), ("b", b), ("c", c)):
        if not is_squarefree(x):
            raise ValueError(f"{name} = {x} is not squarefree")
    if c < 0:
        raise ValueError("c must be positive")
    A, B, Cc = odd_part(a), odd_part(b), odd_part(c)
    d0 = math.gcd(math.gcd(A, B), Cc)
    d12 = math.gcd(A, B) // d0
    d13 = math.gcd(A, Cc) // d0
    d23 = math.gcd(B, Cc) // d0
    return Parametrization(
        eps1=1 if a > 0 else -1,
        eps2=1 if b > 0 else -1,
        alpha=_v2(a),
        beta=_v2(b),
        gamma=_v2(c),
        d0=d0,
        d12=d12,
        d13=d13,
        d23=d23,
        a1=A // (d0 * d12 * d13),
        b1=B // (d0 * d12 * d23),
        c1=Cc // (d0 * d13 * d23),
    )


def unparametrize(pm: Parametrization) -> tuple[int, int, int]:
    a = pm.eps1 * 2**pm.alpha * pm.d0 * pm.d12 * pm.d13 * pm.a1
    b = pm.eps2 * 2**pm.beta * pm.d0 * pm.d12 * pm.d23 * pm.b1
    c = 2**pm.gamma * pm.d0 * pm.d13 * pm.d23 * pm.c1
    return a, b, c
