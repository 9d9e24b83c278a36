"""schatten_lab: Schatten p-norms of block matrices and channel outputs.

Numerical toolkit for:
  * dense complex Hermitian eigendecomposition (cyclic Jacobi; compiled
    kernel with a pure-Python fallback), fractional PSD powers and Schatten
    p-norms;
  * sampling and summarizing positive / general 2x2 block matrices;
  * signed-margin verification of the block-matrix norm inequalities and
    their supporting convexity/monotonicity/curvature lemmas;
  * CPTP channels in Kraus form with maximal output p-norm and minimal
    output entropy estimation, including multiplicativity-gap measurement
    for product channels.
"""

from schatten_lab.backend import get_backend
from schatten_lab.blockmat import (
    GeneralBlock,
    PositiveBlock,
    alpha_summary,
    assemble,
    block_from_json,
    block_to_json,
    norm_summary,
    sample_general_block,
    sample_hanner_pair,
    sample_positive_block,
    sign_average_diagonal,
    two_by_two_norm_closed_form,
)
from schatten_lab.channel_lab import (
    GapRecord,
    KrausChannel,
    OptConfig,
    OptResult,
    apply,
    channel_from_json,
    depolarizing,
    depolarizing_product_bound_check,
    entangled_lower_bound,
    identity_channel,
    kraus_channel,
    multiplicativity_gap,
    nu_p,
    nu_p_depolarizing,
    s_min,
    tensor,
    werner_holevo,
)
from schatten_lab.config import DEFAULT_TOLS, Tolerances
from schatten_lab.inequality_lab import (
    DEFAULT_P_GRID,
    CheckRecord,
    FuzzSpec,
    check_gross,
    check_hanner_form,
    check_holder_yxz,
    check_lemma2,
    check_lemma3,
    check_lemma4,
    check_lemma5,
    check_theorem1,
    check_theorem2,
    fuzz_suite,
    replay_record,
    summarize,
)
from schatten_lab.schatten_core import (
    INF,
    SchattenExponent,
    Spectrum,
    conjugate_exponent,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    psd_power,
    schatten_norm,
    singular_values,
    trace_abs_power,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "CheckRecord", "DEFAULT_P_GRID", "DEFAULT_TOLS", "FuzzSpec", "GapRecord",
    "GeneralBlock", "INF", "KrausChannel", "OptConfig", "OptResult",
    "PositiveBlock", "SchattenExponent", "Spectrum", "Tolerances",
    "alpha_summary", "apply", "assemble", "block_from_json", "block_to_json",
    "channel_from_json", "check_gross", "check_hanner_form",
    "check_holder_yxz", "check_lemma2", "check_lemma3", "check_lemma4",
    "check_lemma5", "check_theorem1", "check_theorem2", "conjugate_exponent",
    "depolarizing", "depolarizing_product_bound_check",
    "entangled_lower_bound", "fuzz_suite", "get_backend", "hermitian_eig",
    "identity_channel", "kraus_channel", "matrix_from_json", "matrix_to_json",
    "multiplicativity_gap", "norm_summary", "nu_p", "nu_p_depolarizing",
    "psd_power", "replay_record", "s_min", "sample_general_block",
    "sample_hanner_pair", "sample_positive_block", "schatten_norm",
    "sign_average_diagonal", "singular_values", "summarize", "tensor",
    "trace_abs_power", "two_by_two_norm_closed_form",
    "von_neumann_entropy", "werner_holevo",
]
