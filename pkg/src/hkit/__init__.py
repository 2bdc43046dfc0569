"""Moment-sequence toolkit for compact intervals.

Classification of matricial moment sequences, interval parameters and
canonical moments, the length-reducing interval transform and its shift
laws, molecular/arcsine measure fixtures, and structural identity verifiers.
"""

from ._backend import BACKEND
from .blockmat import (
    BlockMatrix,
    d_left,
    d_left2,
    d_right,
    d_right2,
    extremal_ingredients,
    hankel_G,
    hankel_H,
    hankel_K,
    resolvent_R,
    schur_L,
    schur_LL,
    toeplitz_lower,
    toeplitz_upper,
    verify_reciprocal_identities,
)
from .classify import (
    ClassMembershipError,
    ClassReport,
    IntervalParams,
    classify,
    extension_interval,
    h_params,
    in_E_class,
    interval_params,
    is_central,
    is_completely_degenerate,
)
from .matcore import (
    DEFAULT_TOL,
    ToleranceProfile,
    is_hermitian,
    is_psd,
    kron,
    loewner_leq,
    ortho_projector,
    parallel_sum,
    pinv,
    psd_sqrt,
    rank_of,
    schur_complement,
)
from .measures import (
    MeasureDiagnostics,
    MolecularMeasure,
    arcsine_moments,
    centrality_oracle,
    example_e_half,
    measure_transform_diagnostics,
    moments,
)
from .seq import (
    Interval,
    MatrixSequence,
    MomentSequence,
    cauchy_product,
    is_first_term_dominated,
    modified_a,
    modified_b,
    modified_c,
    reciprocal,
    reciprocal_closed,
    reciprocal_dual,
    shift_a,
    shift_b,
    shift_c,
)
from .transform import (
    TransformTrace,
    f_transform,
    f_transform_iter,
    hankel_transform,
    hankel_transform_iter,
    shift_theorem_check,
    verify_ft_representations,
    verify_ldu_reductions,
)

__version__ = "0.1.0"
