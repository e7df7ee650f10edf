"""Double forms on a Euclidean space, curvature structures and their invariants."""
from .algebra import (
    CurvatureStructure,
    DoubleForm,
    bianchi_residual,
    contract,
    first_bianchi,
    g_power,
    hodge,
    inner,
    kn_product,
    metric,
    mul_g,
    power,
)
from .decomposition import ComponentList, curvature_components, orthogonal_components, reconstruct
from .errors import DoubleFormError
from .invariants import (
    einstein_lovelock,
    gauss_kronecker,
    gbw_curvature,
    pq_curvature_tensor,
    sectional,
    weitzenboeck,
)
from .models import ModelSpec, conformally_flat, constant_curvature, direct_sum, hypersurface, random_curvature
from .multiindex import MultiIndex, complement, shuffles
from .positivity import PositivityReport, condition_A_check, isotropic_check, min_p_curvature, sample_frames

__version__ = "0.1.0"
