#!/usr/bin/env python3
# Walk through the smallest-looking counterexample (a, b, c) = (13, 17, 5).

from hasse_census.local import decide, decide_oracle, f, h, h_contributions, h1, h2

t = (13, 17, 5)

# f = 1 means the variety has points everywhere locally
print("f(13, 17) =", f(13, 17))

# h collects (c, b)_p over primes p | 2bc where a is not a p-adic square
print("contributions", h_contributions(t))   # p = 5 gives the only -1
print("h =", h(t))                            # -1: a Brauer-Manin obstruction

# the same value from the factorization h = h1 * h2
print("h1 * h2 =", h1(t) * h2(*t))

# closed form against the brute-force local search
v = decide(t)
print("closed form ", v)
print("oracle      ", decide_oracle(t))

# a nearby triple with a rational point
print("(13, 17, 1) ->", decide((13, 17, 1)))
