"""Random-angle QAOA energy distributions and their statistics.

Exact statevector simulation of the depth-p circuit, the closed-form
angle-averaged level distribution at depth one, entropy and ground-level
gain metrics, exhaustive small-graph corpora, and a reproducible sweep
harness with a CLI.
"""

from .analytic import (
    pair_coefficients,
    rp_avg_distribution,
    single_depth_prob,
    two_level_prob,
    two_level_qmp_asymptote,
    two_level_table,
)
from .enumeration import enumerate_connected_graphs
from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    FormatError,
    InvalidInputError,
    RpqaoaError,
)
from .graph6 import encode_graph6, parse_graph6, read_graph6, write_graph6
from .metrics import (
    METHOD_ANALYTIC,
    METHOD_MC,
    MetricsRecord,
    approx_ratio,
    compute_metrics,
    fit_exponent,
    qmp,
    read_records_jsonl,
    record_from_json_dict,
    record_to_json_dict,
    shannon_entropy,
    shots_to_goal,
    t_of_n,
    write_records_jsonl,
)
from .problems import (
    CostTable,
    Graph,
    LevelSpectrum,
    QuboInstance,
    build_cost_table,
    cost_eval,
    is_connected,
    level_decomposition,
    maxcut_from_graph,
    random_connected_graph,
    random_qubo,
)
from .qaoa_sim import (
    AngleSet,
    EnergyDistribution,
    Statevector,
    bitstring_probs,
    energy_distribution,
    mc_average_distribution,
    run_qaoa,
    uniform_distribution,
)
from .seeding import derive_seed
from .sweep import (
    SweepConfig,
    counterexample_search,
    depth_scan,
    fit_records,
    make_instance,
    run_sweep,
    summarize_records,
)
from .verify import run_verification

__version__ = "0.1.0"
