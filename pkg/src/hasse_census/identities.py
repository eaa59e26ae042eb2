"""Exhaustive checks of the finite identities behind the counting formulas.

Every check returns a ``Check`` record (name, passed, number of cases,
first counterexamples) so that the CLI and the acceptance suite can report
them uniformly.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (
    factorize,
    hilbert,
    is_squarefree,
    jacobi,
    odd_part,
    theta,
)
from .local import (
    Triple,
    decide,
    decide_oracle,
    f,
    f2,
    h,
    h1,
    h2,
    h_odd_direct,
    h_two_direct,
)
from .param import Parametrization, parametrize, unparametrize

__all__ = [
    "Check", "ESets", "derive_E_sets", "displayed_E_sets", "u_value",
    "tau_alpha_beta", "tau_alpha_beta_sum", "nu2", "nu2_branches",
    "expansion_rhs", "crosscheck_h", "parametrize", "unparametrize",
    "Parametrization", "run_suite", "SUITES",
]

ODD = (1, 3, 5, 7)
PARITIES = ((0, 0), (1, 0), (0, 1), (1, 1))
SIGNS = (1, -1)
MAX_EXAMPLES = 10


@dataclass
class Check:
    name: str
    passed: bool = True
    cases: int = 0
    counterexamples: list = field(default_factory=list)
    detail: str = ""

    def fail(self, example) -> None:
        self.passed = False
        if len(self.counterexamples) < MAX_EXAMPLES:
            self.counterexamples.append(example)

    def expect(self, ok: bool, example) -> None:
        self.cases += 1
        if not ok:
            self.fail(example)

    def as_dict(self) -> dict:
        return {"identity": self.name, "status": "ok" if self.passed else "FAIL",
                "cases": self.cases, "counterexamples": [repr(x) for x in self.counterexamples],
                "detail": self.detail}


# -- E sets ------------------------------------------------------------------


@dataclass(frozen=True)
class ESets:
    """E[(alpha, beta)]: odd residue pairs (u0, v0) mod 8 with f_2(2^alpha u0, 2^beta v0) = 1."""

    sets: dict

    def __getitem__(self, key) -> frozenset:
        return self.sets[key]

    def contains(self, alpha: int, beta: int, u: int, v: int) -> bool:
        return (u % 8, v % 8) in self.sets[(alpha, beta)]

    def cardinalities(self) -> tuple[int, ...]:
        return tuple(len(self.sets[k]) for k in PARITIES)

    def weighted_total(self) -> Fraction:
        return sum((Fraction(len(self.sets[(al, be)]), 2 ** (al + be)) for al, be in PARITIES),
                   Fraction(0))


def _representative(alpha: int, u0: int) -> int:
    # a squarefree integer 2^alpha * u with u = u0 mod 8; 1, 3, 5, 7 are squarefree
    return 2**alpha * u0


_E_CACHE: ESets | None = None


def derive_E_sets() -> ESets:
    global _E_CACHE
    if _E_CACHE is None:
        sets = {}
        for al, be in PARITIES:
            sets[(al, be)] = frozenset(
                (u, v) for u in ODD for v in ODD
                if f2(_representative(al, u), _representative(be, v)) == 1
            )
        _E_CACHE = ESets(sets)
    return _E_CACHE


def displayed_E_sets() -> ESets:
    """The listed sets: signs inside (+-x, +-x) move together, all other signs are independent."""

    def pm(x):
        return (x % 8, -x % 8)

    def matched(x, y):
        return {(x % 8, y % 8), (-x % 8, -y % 8)}

    def left(x, y):
        return {(s, y % 8) for s in pm(x)}

    def right(x, y):
        return {(x % 8, t) for t in pm(y)}

    return ESets({
        (0, 0): frozenset(right(1, 1) | right(1, 3) | right(-1, 1) | left(3, 1) | matched(3, 3)),
        (1, 0): frozenset(left(1, 1) | left(3, 1)),
        (0, 1): frozenset(right(1, 1) | right(1, 3)),
        (1, 1): frozenset(matched(1, 1) | matched(3, 3)),
    })


# -- u and tau ---------------------------------------------------------------


def u_value(k: int, l: int, m: int, eps1: int, eps2: int, alpha: int, beta: int) -> int:
    for x in (k, l, m):
        if x % 2 == 0:
            raise ValueError(f"u needs odd arguments, got {x}")
        if x < 0:
            raise ValueError(f"u needs positive arguments, got {x}")
    if eps1 not in SIGNS or eps2 not in SIGNS or alpha not in (0, 1) or beta not in (0, 1):
        raise ValueError("signs must be +-1 and parities 0 or 1")
    tk, tl, tm = theta(k), theta(l), theta(m)
    e = tk * tl + tk * tm + tm * tl
    s = -1 if e % 2 else 1
    return s * jacobi(eps2 * 2**beta, k * m) * jacobi(eps1 * 2**alpha, l * m)


def u_residue_form(k0: int, l0: int, m: int, eps1: int, eps2: int) -> int:
    e = theta(eps1 * k0 * m) * theta(eps2 * l0 * m) + theta(eps1) * theta(eps2) + theta(m)
    return -1 if e % 2 else 1


def tau_alpha_beta(m: int, alpha: int, beta: int, E: ESets | None = None) -> Fraction:
    E = E or derive_E_sets()
    total = Fraction(len(E[(alpha, beta)]), 2 ** (alpha + beta))
    w = Fraction(1, 2 ** (2 + alpha + beta))
    for e1, e2 in itertools.product(SIGNS, SIGNS):
        for k0, l0 in itertools.product(ODD, ODD):
            if E.contains(alpha, beta, e1 * k0 * m, e2 * l0 * m):
                total += w * u_value(k0, l0, m, e1, e2, alpha, beta)
    return total


def tau_alpha_beta_sum(m: int) -> int:
    if m % 2 == 0:
        raise ValueError("m must be odd")
    m = abs(m)
    total = sum(tau_alpha_beta(m, al, be) for al, be in PARITIES)
    if total.denominator != 1:
        raise ArithmeticError(f"tau sum {total} is not an integer")
    return int(total)


# -- nu_2 --------------------------------------------------------------------

BRANCHES = ("alpha=0,u0=1", "(alpha,beta)=(1,0)", "(alpha,beta)=(1,1)",
            "(alpha,gamma)=(0,0),u0!=1", "(alpha,gamma)=(0,1),u0!=1")


def _branch(alpha: int, beta: int, gamma: int, u0: int) -> int:
    if alpha == 0:
        if u0 == 1:
            return 0
        return 3 if gamma == 0 else 4
    return 1 if beta == 0 else 2


def nu2_branches(z: int) -> tuple[Fraction, ...]:
    """Contributions to nu_2(z) split by the 2-adic case of h_2."""
    if z not in SIGNS:
        raise ValueError("z must be +1 or -1")
    E = derive_E_sets()
    out = [Fraction(0)] * 5
    for al, be, ga in itertools.product((0, 1), repeat=3):
        for u0, v0 in sorted(E[(al, be)]):
            for w0 in ODD:
                zs = z if theta(u0) * theta(v0) else 1
                val = Fraction(zs * h2(2**al * u0, 2**be * v0, 2**ga * w0), 2 ** (al + be + ga))
                out[_branch(al, be, ga, u0)] += val
    return tuple(out)


def nu2(z: int) -> int:
    total = sum(nu2_branches(z))
    if total.denominator != 1:
        raise ArithmeticError(f"nu2 sum {total} is not an integer")
    return int(total)


# -- expansion of f ----------------------------------------------------------


def _v2(n: int) -> int:
    n = abs(n)
    return (n & -n).bit_length() - 1


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def _omega(n: int) -> int:
    return len(factorize(n)) if n > 1 else 0


def expansion_rhs(a: int, b: int) -> Fraction:
    """Sum over a = e1 2^alpha k k' m m', b = e2 2^beta l l' m m' of the signed weights.

    Gated on the odd parts lying in E_{alpha,beta} mod 8; zero when alpha or
    beta exceeds 1.
    """
    if a == 0 or b == 0:
        raise ValueError("a and b must be nonzero")
    alpha, beta = _v2(a), _v2(b)
    if alpha > 1 or beta > 1:
        return Fraction(0)
    e1, e2 = (1 if a > 0 else -1), (1 if b > 0 else -1)
    A, B = odd_part(a), odd_part(b)
    if not derive_E_sets().contains(alpha, beta, e1 * A, e2 * B):
        return Fraction(0)
    g = math.gcd(a, b)
    core = (a // g) * (b // g)
    total = Fraction(0)
    for mm in _divisors(math.gcd(A, B)):
        ra, rb = A // mm, B // mm
        for m in _divisors(mm):
            for k in _divisors(ra):
                kp = ra // k
                for l in _divisors(rb):
                    lp = rb // l
                    if not is_squarefree(k * kp * mm * l * lp):
                        continue
                    s = jacobi(b, k) * jacobi(a, l) * jacobi(core, m)
                    if s:
                        total += Fraction(s, 2 ** _omega(k * kp * l * lp * mm))
    return total


def expansion_lhs(a: int, b: int) -> int:
    if not (is_squarefree(a) and is_squarefree(b)):
        return 0
    return f(a, b)


# -- h cross-check -----------------------------------------------------------


def _sqf_range(n: int) -> list[int]:
    return [x for x in range(1, n + 1) if is_squarefree(x)]


def crosscheck_h(bound: int, triples=None) -> Check:
    """h1 against the odd Hilbert product, h2 against the 2-adic factor, h1*h2 against h."""
    chk = Check(f"h factorization on S({bound})")
    if triples is None:
        pos = _sqf_range(bound)
        signed = [-x for x in reversed(pos)] + pos
        cs = pos
        ab = [(a, b) for a in signed for b in signed if f(a, b) == 1]
        triples = ((a, b, c) for a, b in ab for c in cs)
    for a, b, c in triples:
        t = Triple(a, b, c)
        x1, x2 = h1(t), h2(a, b, c)
        d1, d2, hv = h_odd_direct(t), h_two_direct(t), h(t)
        chk.expect(x1 == d1 and x2 == d2 and x1 * x2 == hv,
                   {"t": (a, b, c), "h1": x1, "h2": x2, "odd": d1, "two": d2, "h": hv})
    return chk


# -- suites ------------------------------------------------------------------


def check_E_sets() -> list[Check]:
    E = derive_E_sets()
    c1 = Check("E-set cardinalities (10,4,4,4)")
    c1.expect(E.cardinalities() == (10, 4, 4, 4), E.cardinalities())
    c2 = Check("E-set weighted total = 15")
    c2.expect(E.weighted_total() == 15, E.weighted_total())
    c3 = Check("E-sets match the displayed lists")
    shown = displayed_E_sets()
    for key in PARITIES:
        c3.expect(E[key] == shown[key], (key, sorted(E[key] ^ shown[key])))
    c4 = Check("(1,3) in E_{0,1}")
    c4.expect(E.contains(0, 1, 1, 3), (0, 1, 1, 3))
    return [c1, c2, c3, c4]


def check_u_identity(lift_bound: int = 100) -> list[Check]:
    E = derive_E_sets()
    aux = Check("2-power characters cancel on E-sets")
    lem = Check("u closed form on residues")
    lift = Check(f"u depends on residues mod 8 (lifts <= {lift_bound})")
    odd_m = [m for m in range(1, 24, 2)]
    for (al, be), e1, e2, k0, l0, m in itertools.product(PARITIES, SIGNS, SIGNS, ODD, ODD, odd_m):
        if not E.contains(al, be, e1 * k0 * m, e2 * l0 * m):
            continue
        aux.expect(jacobi(2**be, k0 * m) * jacobi(2**al, l0 * m) == 1, (al, be, e1, e2, k0, l0, m))
        u = u_value(k0, l0, m, e1, e2, al, be)
        lem.expect(u == u_residue_form(k0, l0, m, e1, e2), (al, be, e1, e2, k0, l0, m))
    lifts = range(1, lift_bound + 1, 2)
    for (al, be), e1, e2 in itertools.product(PARITIES, SIGNS, SIGNS):
        for m in (1, 3, 5, 7, 15, 21):
            for k in lifts:
                for l in lifts[::7]:
                    lift.expect(u_value(k, l, m, e1, e2, al, be)
                                == u_value(k % 8, l % 8, m % 8, e1, e2, al, be),
                                (k, l, m, e1, e2, al, be))
    return [aux, lem, lift]


def check_tau(m_bound: int = 50) -> list[Check]:
    c = Check("sum of tau_{alpha,beta}(m) = 15 + 5(-1)^theta(m)")
    for m in range(1, m_bound + 1, 2):
        if not is_squarefree(m):
            continue
        c.expect(tau_alpha_beta_sum(m) == 15 + 5 * (-1) ** theta(m), m)
    return [c]


def check_nu2() -> list[Check]:
    out = []
    for z in SIGNS:
        c = Check(f"nu2({z:+d}) = 68 with branches (36,12,0,16,4)")
        br = nu2_branches(z)
        c.expect(nu2(z) == 68 and br == (36, 12, 0, 16, 4), [str(x) for x in br])
        out.append(c)
    return out


def check_reciprocity(n_pairs: int = 10**4, bound: int = 10**6, seed: int = 1) -> list[Check]:
    rng = random.Random(seed)
    c = Check(f"quadratic reciprocity on {n_pairs} random pairs")
    while c.cases < n_pairs:
        m = rng.randrange(1, bound + 1, 2)
        n = rng.randrange(1, bound + 1, 2)
        if math.gcd(m, n) != 1:
            continue
        sign = -1 if theta(m) * theta(n) else 1
        c.expect(jacobi(m, n) * jacobi(n, m) == sign, (m, n))
    sup = Check("supplementary laws for -1 and 2")
    for n in range(1, 2001, 2):
        sup.expect(jacobi(-1, n) == (-1) ** theta(n), (-1, n))
        sup.expect(jacobi(2, n) == (-1) ** ((n * n - 1) // 8), (2, n))
    return [c, sup]


def check_hilbert_grid(bound: int = 50) -> list[Check]:
    grid = [x for x in range(-bound, bound + 1) if x]
    sym = Check(f"Hilbert symbol symmetry |x|,|y| <= {bound}")
    prod = Check(f"Hilbert product formula |x|,|y| <= {bound}")
    for x in grid:
        for y in grid:
            s = 1 if (x > 0 or y > 0) else -1  # the real place
            for p in factorize(2 * x * y):
                hp = hilbert(x, y, p)
                sym.expect(hp == hilbert(y, x, p), (x, y, p))
                s *= hp
            prod.expect(s == 1, (x, y))
    bim = Check(f"Hilbert bimultiplicativity |x|,|x'|,|y| <= {bound}")
    pf = {x: set(factorize(abs(x))) | {2} for x in grid}
    base = {(x, y, p): hilbert(x, y, p) for x in grid for y in grid for p in pf[x] | pf[y]}
    for x, x2 in itertools.product(grid, repeat=2):
        if abs(x2) < abs(x):
            continue  # the check is symmetric in x, x'
        n = x * x2
        for y in grid:
            for p in pf[x] | pf[x2] | pf[y]:
                rhs = base.get((x, y, p), 1) * base.get((x2, y, p), 1)
                bim.expect(hilbert(n, y, p) == rhs, (x, x2, y, p))
    return [sym, prod, bim]


def check_expansion(bound: int = 100) -> list[Check]:
    c = Check(f"expansion of mu^2 mu^2 f for |a|,|b| <= {bound}")
    vals = [x for x in range(-bound, bound + 1) if x]
    for a in vals:
        for b in vals:
            c.expect(expansion_lhs(a, b) == expansion_rhs(a, b), (a, b))
    return [c]


def check_parametrize(bound: int = 50) -> list[Check]:
    rt = Check(f"parametrize round trip on S({bound})")
    cop = Check(f"parametrization coprimality on S({bound})")
    pos = _sqf_range(bound)
    signed = [-x for x in reversed(pos)] + pos
    for a in signed:
        for b in signed:
            for c in pos:
                pm = parametrize(a, b, c)
                rt.expect(unparametrize(pm) == (a, b, c), (a, b, c))
                cop.expect(pm.coprimality_ok(), (a, b, c))
    return [rt, cop]


def check_dual_pipeline(bound: int = 30) -> list[Check]:
    """Formula verdicts against verdicts built on the solvability oracle."""
    c = Check(f"formula and oracle verdicts agree on S({bound})")
    cache: dict = {}
    pos = _sqf_range(bound)
    signed = [-x for x in reversed(pos)] + pos
    for a in signed:
        for b in signed:
            for x in pos:
                t = Triple(a, b, x)
                v, w = decide(t), decide_oracle(t, cache)
                c.expect(v == w, {"t": (a, b, x), "formula": v, "oracle": w})
    return [c]


def run_suite(suite: str = "identities", bound: int | None = None) -> list[Check]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if suite == "all":
        out = []
        for name in SUITES:
            if name != "all":
                out += run_suite(name, bound)
        return out
    return SUITES[suite](bound)


SUITES = {
    "identities": lambda bound: (check_E_sets() + check_u_identity() + check_tau() + check_nu2()),
    "symbols": lambda bound: check_reciprocity() + check_hilbert_grid(),
    "parametrize": lambda bound: check_parametrize(bound or 50),
    "expansion": lambda bound: check_expansion(bound or 100),
    "h": lambda bound: [crosscheck_h(bound or 100)],
    "oracle": lambda bound: check_dual_pipeline(bound or 30),
    "all": None,
}
