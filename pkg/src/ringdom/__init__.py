"""LOCAL-model simulator and distance-domination toolkit for labelled rings."""

from .graphs import (
    GraphError,
    GraphFormatError,
    LabeledGraph,
    RingSpec,
    View,
    ViewContainmentError,
    ball,
    ball_in_view,
    build_ring,
    distance,
    parse_graph_file,
    parse_graph_text,
    format_graph_text,
    relabel,
)
from .sim import (
    ExecutionResult,
    NodeAlgorithm,
    NodeOutput,
    RoundContractViolation,
    SimulationError,
    execute,
    execute_at,
    views_equal,
)
from .algorithms import (
    choose_smallest,
    cole_vishkin_three_colour,
    colour_reduction_rounds,
    constant_algorithm,
    log_star,
    ruling_set_dominator,
    RulingParams,
)
from .verify import (
    Stretch,
    Verdict,
    check_certificates,
    is_proper_colouring,
    is_t_dominating,
    min_dominating_size_oracle,
    stretch_decomposition,
    window_check_ring,
)
from .adversary import (
    AdversaryArtifacts,
    AdversaryReport,
    CandidateFalsified,
    Feasibility,
    InfeasibleParameters,
    build_adversary_instance,
    feasibility,
    run_adversary_experiment,
)
from .reductions import (
    ColouringResult,
    ReductionParams,
    compute_params,
    counterexample_ring,
    eight_colour_ring,
    validate_stretch_bounds,
    verify_counterexample,
)

__version__ = "0.1.0"
