"""Counts of rooted planar maps and their 2- and 3-cores, plus the
core size statistics at the tree singularity."""

import mpmath

from coregf import maps

N = 12

m = maps.map_series_closed_form(N).coefficient_list()
h = maps.two_map_series(N).coefficient_list()
k = maps.three_map_series(N).coefficient_list()

print(f"{'n':>3} {'maps':>14} {'2-maps':>12} {'3-maps':>12}")
for n in range(1, N + 1):
    print(f"{n:>3} {int(m[n]):>14} {int(h[n]):>12} {int(k[n]):>12}")

c = maps.map_constants()
print()
print("sigma =", c.sigma, "  tau =", c.tau)
print("kappa2 ~", mpmath.nstr(c.kappa2, 8), "  kappa3 ~", mpmath.nstr(c.kappa3, 8))

# ratio of consecutive counts tends to 12
print("m_n / m_(n-1):", ", ".join(f"{float(m[n] / m[n - 1]):.4f}" for n in range(N - 3, N + 1)))
