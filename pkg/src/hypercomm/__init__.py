"""Community detection on two-community non-uniform random hypergraphs.

The model plants a balanced two-community structure and places each
m-subset of vertices as a hyperedge with a higher probability when all its
vertices agree.  The library samples such hypergraphs, contracts them to a
pairwise count matrix, recovers the planted split spectrally or through a
semidefinite relaxation, evaluates the information-theoretic and
relaxation detectability thresholds, and runs seeded simulation campaigns
with deterministic CSV/JSON output.
"""

from .errors import (
    ConvergenceError,
    DegenerateGraphError,
    HypercommError,
    SizeLimitError,
)
from .experiments import (
    ALGORITHMS,
    CSV_HEADER,
    KINDS,
    ExperimentConfig,
    TrialRecord,
    derive_seed,
    run_experiment,
    write_csv,
    write_summary,
)
from .metrics import PartitionResult, exact_recovery, mismatch_ratio
from .model import (
    ExpectedModel,
    Hypergraph,
    LayerProbabilities,
    ModelSpec,
    contract,
    edge_probabilities,
    expected_adjacency,
    expected_model,
    sample_hsbm,
    sample_labels,
    weighted_adjacency,
)
from .oracle import (
    TailEstimate,
    brute_force_mle,
    f_score,
    in_cluster_counts,
    regime_binomials,
    tail_estimate,
)
from .sdp import (
    CertificateResult,
    SdpSolution,
    algorithm3_sdp,
    certificate_check,
    min_bisection_brute,
    solve_sdp,
)
from .spectral import (
    EigenPair,
    algorithm1_adjacency,
    algorithm2_laplacian,
    dense_second_eigenpair,
    jacobi_eigh,
    power_second_eigenpair,
)
from .thresholds import (
    DivergenceReport,
    RateSpec,
    RateTerm,
    d_gh,
    d_sdp,
    divergence_report,
    gh_rate_spec,
    rate_function,
    sdp_rate_spec,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "CSV_HEADER",
    "KINDS",
    "CertificateResult",
    "ConvergenceError",
    "DegenerateGraphError",
    "DivergenceReport",
    "EigenPair",
    "ExpectedModel",
    "ExperimentConfig",
    "Hypergraph",
    "HypercommError",
    "LayerProbabilities",
    "ModelSpec",
    "PartitionResult",
    "RateSpec",
    "RateTerm",
    "SdpSolution",
    "SizeLimitError",
    "TailEstimate",
    "TrialRecord",
    "algorithm1_adjacency",
    "algorithm2_laplacian",
    "algorithm3_sdp",
    "brute_force_mle",
    "certificate_check",
    "contract",
    "d_gh",
    "d_sdp",
    "dense_second_eigenpair",
    "derive_seed",
    "divergence_report",
    "edge_probabilities",
    "exact_recovery",
    "expected_adjacency",
    "expected_model",
    "f_score",
    "gh_rate_spec",
    "in_cluster_counts",
    "jacobi_eigh",
    "min_bisection_brute",
    "mismatch_ratio",
    "power_second_eigenpair",
    "rate_function",
    "regime_binomials",
    "run_experiment",
    "sample_hsbm",
    "sample_labels",
    "sdp_rate_spec",
    "solve_sdp",
    "tail_estimate",
    "weighted_adjacency",
    "write_csv",
    "write_summary",
    "__version__",
]
