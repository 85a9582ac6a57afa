"""Vilenkin-Fourier analysis on bounded Vilenkin groups.

Characters, fast transforms, Dirichlet/Fejer/Norlund kernels and means, and
numerical checks of Lipschitz-class approximation bounds for Norlund means.
"""

from ._backend import BACKEND, compiled_available
from .group import (
    Basis,
    BasisMismatchError,
    CapacityError,
    GroupPoint,
    IndexExpansion,
    InvalidBasisError,
    basis_from_json,
    build_basis,
    expand_index,
    group_add,
    group_negate,
    index_to_point,
    order,
    parse_basis,
    point_to_index,
)
from .transform import (
    CylinderFunction,
    Spectrum,
    character,
    fast_forward_transform,
    fast_inverse_transform,
    forward_transform_naive,
    inverse_transform,
    rademacher,
    vilenkin_psi,
)
from .weights import NorlundWeights, build_weights, check_cond, check_regular
from .means import (
    abel_norlund_mean,
    convolve,
    dirichlet_kernel,
    fejer_kernel,
    fejer_kernel_closed_form,
    fejer_mean,
    kernel_domination_check,
    norlund_kernel,
    norlund_mean,
    partial_sum,
)
from .identities import identity_suite
from .approx import (
    BoundReport,
    LipSpec,
    constant_rigidity_check,
    fejer_bound_report,
    lip_generator,
    lp_norm,
    modulus,
    rate_table,
    thm1_bound_report,
    thm2_bound_report,
    thm3_bound_report,
    translate,
)

__version__ = "0.1.0"
