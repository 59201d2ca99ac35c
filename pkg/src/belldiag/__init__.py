"""Bell-diagonal qudit toolkit.

Construction and analysis of the symmetric mixed-state family
``rho_lambda = sum_l lambda_l |Psi_l><Psi_l|`` on two qudits: twirl
channels, entanglement bounds on both sides of the distillation/
preparation divide, complete enumeration of the minimal-uncertainty
(reversible) profiles, and irreversibility-gap sweeps.
"""

from .qcore import (
    ASSERT_TOL,
    HERM_TOL,
    NORM_TOL,
    entropy_bits,
    herm_eigvals,
    kron,
    partial_trace,
    partial_transpose,
    prob_vector,
    trace_distance,
    vn_entropy_bits,
)
from .symstates import (
    COLUMN,
    ROW,
    EBMap,
    ReversibleSplit,
    bell_basis_matrix,
    bell_state,
    eb_apply,
    eb_choi,
    eb_map,
    isotropic_state,
    reversible_decomposition,
    rho_lambda,
    tagged_state,
    twirl_group,
    twirl_isotropic,
    weyl_unitary,
)
from .uncertainty import (
    MinimizerSpec,
    URReport,
    dft,
    enumerate_minimizers,
    is_minimizer,
    minimizer_vector,
    support_size,
    ur_report,
)
from .measures import (
    GapPoint,
    MeasureResult,
    OptimizerConfig,
    PhiNuReport,
    convex_envelope_1d,
    ed_plus,
    epsilon_bruteforce,
    epsilon_min,
    gap_sweep,
    lambda_nu,
    phi_nu,
    pure_entanglement,
)

__version__ = "0.1.0"
