"""Gauss–Bonnet–Weyl curvatures h_2q on model spaces.

h_2q is the full contraction of the q-th power of R; the top one is the
Gauss–Bonnet integrand up to a constant.
"""
from itertools import combinations
from math import factorial, prod

from doubleforms.invariants import avez_h4q, einstein_lovelock, gbw_routes, h4_component_formula
from doubleforms.models import constant_curvature, direct_sum, hypersurface, random_curvature, random_einstein

print("Round spheres: h_2q = n!/(2^q (n-2q)!)")
for n in (4, 6):
    R = constant_curvature(n, 1.0)
    for q in range(1, n // 2 + 1):
        trace, dual, gap = gbw_routes(R, q)
        print(f"  n={n} q={q}: {trace:8.3f}  (dual route {dual:8.3f}, closed form {factorial(n) / (2**q * factorial(n - 2 * q)):8.3f})")

lams = [1.0, 2.0, 3.0, 4.0]
R = hypersurface(lams)
print("\nHypersurface with principal curvatures", lams)
for q in (1, 2):
    e = sum(prod(c) for c in combinations(lams, 2 * q))
    print(f"  h_{2 * q} = {gbw_routes(R, q)[0]:.1f}, symmetric function value {factorial(2 * q) / 2**q * e:.1f}")

S = direct_sum(constant_curvature(2, 1.0), constant_curvature(2, 1.0))
print("\nTwo unit 2-spheres: h_2 =", gbw_routes(S, 1)[0], " h_4 =", gbw_routes(S, 2)[0])

R = random_curvature(4, seed=11)
print("\nIn dimension 4, three ways to h_4:")
print("  contraction    ", gbw_routes(R, 2)[0])
print("  norm identity  ", avez_h4q(R, 1))
print("  components     ", h4_component_formula(R))
print("  and T_4 vanishes:", einstein_lovelock(R, 2).norm())

print("\nh_4 of random Einstein tensors is never negative:")
print("  ", [round(h4_component_formula(random_einstein(n, seed)), 3) for n, seed in [(4, 1), (5, 2), (6, 3), (7, 4)]])
