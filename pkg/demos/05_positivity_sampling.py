"""Sampled positivity checks: p-curvature, isotropic curvature, condition (A).

The reported minimum is over random orthonormal frames, so a positive
verdict means "no violation found", not a proof.
"""
import numpy as np

from doubleforms.models import conformally_flat, constant_curvature, hypersurface
from doubleforms.positivity import condition_A_check, h4_sign, isotropic_check, min_p_curvature, replay

models = {
    "unit sphere S^5": constant_curvature(5, 1.0),
    "hyperbolic H^5": constant_curvature(5, -1.0),
    "pinched hypersurface": hypersurface([0.8, 1.0, 1.1, 1.2, 1.4]),
    "conformally flat, mixed signs": conformally_flat(np.diag([-3.0, 1.0, 1.0, 1.0, 0.5])),
}
for name, R in models.items():
    print(name)
    for rep in (min_p_curvature(R, 2, 1000, 0), isotropic_check(R, 1000, 0), condition_A_check(R, 1000, 0)):
        print(f"  {rep.condition:12s} min {rep.min_margin:9.4f}  {rep.verdict:11s}  replay {replay(R, rep):9.4f}")
    print("  h4 sign:", h4_sign(R))
