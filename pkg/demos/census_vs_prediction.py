#!/usr/bin/env python3
# Count counterexamples in growing boxes and compare with the two-term asymptotic.

import numpy as np

from hasse_census import constants as K
from hasse_census.census import count

Ps = np.array([50, 100, 200, 300, 500])
rows = []
for P in Ps:
    r = count(int(P), shards=4, threads=4)
    pr = K.predict(int(P))
    rows.append((r.s_size, r.n_br, pr.main_term, pr.two_term_total))

rows = np.array(rows, dtype=float)
S, nbr, main, two = rows.T

print(f"{'P':>5} {'#S':>12} {'NBr':>10} {'NBr/main':>9} {'NBr/two':>9}")
for P, s, n, m, t in zip(Ps, S, nbr, main, two):
    print(f"{P:>5} {s:>12.0f} {n:>10.0f} {n / m:>9.3f} {n / t:>9.3f}")

# the ratio creeps toward 1 like 1/log P, so the fit is rough at this size
slope = np.polyfit(1 / np.log(Ps), nbr / two, 1)
print("ratio ~ %.3f + %.3f / log P" % (slope[1], slope[0]))

# the share of all triples that are counterexamples shrinks like 1/sqrt(log P)
share = nbr / S
print("share * sqrt(log P):", np.round(share * np.sqrt(np.log(Ps)), 4))
