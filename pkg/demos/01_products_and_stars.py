"""Tour of the double-form ring: products, contractions and the Hodge star.

Run with ``python3 demos/01_products_and_stars.py``.
"""
import numpy as np

from doubleforms import algebra as alg
from doubleforms.models import make_rng, random_double_form

n = 4
g = alg.metric(n)

# the metric is the unit (1,1) form; its powers are k! times the identity
g2 = g * g
print("g·g equals g^2:", g2.allclose(alg.g_power(n, 2)))
print("g^2(e1∧e2, e1∧e2) =", g2.entry((1, 2), (1, 2)))

# contraction lowers both degrees; on g^2 it gives 2(n-1) g
print("c(g^2) = 6 g:", alg.contract(g2).allclose(6 * g))

# multiplication by g and contraction are adjoint for the basis inner product
rng = make_rng(1)
w = random_double_form(n, 1, 1, rng)
t = random_double_form(n, 2, 2, rng)
print("<g w, t> =", alg.inner(g * w, t))
print("<w, c t> =", alg.inner(w, alg.contract(t)))

# the star turns contraction into multiplication: g w = *c*w
print("g w = *c*w:", alg.residual(alg.mul_g(w), alg.hodge(alg.contract(alg.hodge(w)))) < 1e-12)

# ** is ±1, with the sign depending only on n and the bidegree
for p, q in [(1, 1), (1, 2), (0, 3)]:
    v = random_double_form(n, p, q, rng)
    sign = (-1) ** ((p + q) * (n - p - q))
    print(f"** on D^({p},{q}) is {sign:+d}:", alg.hodge(alg.hodge(v)).allclose(sign * v))

# multiplying by g is injective only below p + q + k = n + 1
for p, q, k in [(1, 1, 1), (2, 2, 1)]:
    M = alg.mul_g_matrix(n, p, q, k)
    print(f"g^{k} on D^({p},{q}): rank {np.linalg.matrix_rank(M)} of {M.shape[1]}")
