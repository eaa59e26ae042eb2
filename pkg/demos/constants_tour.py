#!/usr/bin/env python3
# How the Euler products converge, and what the tail correction buys.

from hasse_census import constants as K

for B in (10**3, 10**4, 10**5, 10**6):
    e = K.euler_product("odd_plus", B)
    print(f"B={B:>8}  partial {e.partial_product:.15f}  corrected {e.value:.15f}  width {e.width:.1e}")

# the corrected values agree far beyond what the raw partial products do
t1, t2 = K.tau1(), K.tau2()
print("tau1 =", f"{t1.value:.12f}", "+-", f"{t1.width:.1e}")
print("tau2 =", f"{t2.value:.12f}", "+-", f"{t2.width:.1e}")

# two routes to the same constant
print("tau1 - 3C/pi^2   ", t1.value - 3 * K.constant_C().value / 3.141592653589793**2)
print("tau2 - N2lead/2  ", t2.value - K.n2_lead().value / 2)

# series side of the product identities, summed up to 10^6
print("series z=+1 minus product", K.series_z(1, 10**6) - K.euler_product("odd_plus", 10**6).value)
print("double series minus product", K.double_series(10**6) - K.euler_product("double", 10**6).value)

for row in K.constants_report():
    print(f"{row['name']:>10}  {row['value']:.12f}")
