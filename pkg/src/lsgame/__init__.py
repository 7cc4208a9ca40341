"""Binary linear system games with an embedded conjugacy relation.

Builds the game family LS(r), the explicit group representation behind its
ideal quantum strategy, the full extended test and its correlation, and the
swap-isometry machinery that certifies the shared state numerically.
"""

from .errors import (
    DomainError,
    LsgameError,
    PreconditionError,
    ResourceError,
    StructuralError,
    VerificationError,
)
from .numtheory import PrimeParams, discrete_log, make_params, smallest_primitive_root
from .groups import (
    Presentation,
    Relation,
    build_conjugacy_triples,
    build_presentation,
    presentation_stats,
    presentation_to_lines,
)
from .lsg import (
    GameLS,
    LinearSystem,
    build_linear_system,
    build_ls_game,
    satisfying_assignments,
    score_ls,
    system_from_json,
    system_from_text,
    system_to_json,
    system_to_text,
)
from .linalg import (
    DEFAULT_TOL,
    StateVector,
    joint_projector,
    kron,
    observable_to_projectors,
    op_norm,
    qft,
)
from .representation import Rep, build_representation, key_unitaries, verify_representation
from .strategy import (
    Correlation,
    FullTest,
    Strategy,
    build_full_test,
    build_ideal_strategy,
    generate_correlation,
    ideal_table_values,
    table_deviation,
)
from .evaluation import (
    WeightedChshContext,
    chsh_ideal_instance,
    correlation_distance,
    embedded_chsh_value,
    evaluation_report,
    ls_winning_probability,
    ls_winning_probability_from_correlation,
    sos_residuals,
    weighted_chsh_value,
)
from .isometry import (
    SelfTestReport,
    apply_phi1,
    apply_phi2,
    control_target,
    selftest_report,
)
from .robustness import (
    PerturbationSpec,
    SweepRecord,
    fit_bound,
    perturb_strategy,
    records_to_csv,
    relation_residuals,
    run_sweep,
)

__version__ = "0.1.0"
