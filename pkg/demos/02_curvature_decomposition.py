"""Splitting a curvature tensor into Weyl, traceless Ricci and scalar parts."""
from doubleforms import algebra as alg
from doubleforms.decomposition import conformal_component, orthogonal_components, reconstruct
from doubleforms.models import conformally_flat, make_rng, random_curvature, random_symmetric

n = 5
R = random_curvature(n, seed=3)
parts = orthogonal_components(R)

print("R = ω2 + g ω1 + g^2 ω0 in dimension", n)
for k in (2, 1, 0):
    print(f"  |g^{2 - k} ω{k}| = {alg.mul_g(parts[k], 2 - k).norm():.6f}")
print("pieces reassemble R:", alg.residual(reconstruct(parts), R) < 1e-12)
print("ω2 and ω1 are trace free:", alg.contract(parts[2]).norm() < 1e-12, alg.contract(parts[1]).norm() < 1e-12)

terms = parts.terms()
print("pairwise inner products:", [f"{alg.inner(terms[i], terms[j]):.1e}" for i in range(3) for j in range(i + 1, 3)])

# the scalar part is the normalised scalar curvature
print("ω0 =", parts[0].value, " c^2R / (2n(n-1)) =", alg.contract(R, 2).value / (2 * n * (n - 1)))

# conformally flat tensors R = g·h have no Weyl part
h = random_symmetric(n, make_rng(4))
print("Weyl part of g·h:", conformal_component(conformally_flat(h)).norm())
