"""Zeros of Hardy's Z function located as fixed points of iterated tanh maps."""

from .config import DEFAULT_CONFIG, PrecisionConfig, ZetaBackend
from .dynamics import (
    BidirectionalLimits,
    FixedPointClass,
    FixedPointKind,
    IterationState,
    ZeroRecord,
    bidirectional_limits,
    classify_fixed_point,
    compute_zeros,
    find_zero,
    h_update,
    iterate_step,
    lipschitz_estimate,
    multiplicity,
    newton_multiplier,
    starting_point,
)
from .errors import *  # noqa: F401,F403
from .reference_data import (
    DiagnosticsReport,
    ReferenceTable,
    ZeroStore,
    bundled_reference_table,
    compare,
    parse_reference_table,
    serialize_reference_table,
)
from .special_fn import (
    hardy_z,
    ln_gamma,
    omega_bound,
    s_arg,
    theta_asymptotic,
    theta_exact,
    z_derivative,
    zeta_critical,
)
from .transcendental import (
    ExactEqBracket,
    asymptotic_solve,
    count_zeros_N0,
    exact_residual_bracket,
    n_shift_check,
)

__version__ = "0.1.0"
