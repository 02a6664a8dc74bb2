"""netscale: find the natural temporal scale of an oversampled dynamic network.

Workflow: represent the network as a sequence of graph snapshots, sweep
aggregation window sizes, and score each window by how well link prediction
works on the aggregated sequence (mean Matthews correlation).  Generators for
self-consistent ground-truth sequences and Gaussian oversampling noise allow
end-to-end validation of the recovery method.
"""

from .graphs import (
    Graph,
    GraphSequence,
    InvalidWindowError,
    NodeCountMismatchError,
    aggregate,
    new_links,
    non_edges,
)
from .predictors import (
    DivergenceError,
    IterationLimitError,
    PredictionTruncationWarning,
    PredictorConfig,
    ScoreKind,
    ScoredPair,
    adamic_adar,
    graph_distance,
    katz,
    katz_via_solve,
    pagerank_vector,
    predict_top_k,
    rooted_pagerank,
    rooted_pagerank_via_solve,
    score_all_non_edges,
    score_matrix,
)
from .generate import (
    BarabasiAlbert,
    ErdosRenyi,
    GenerationSaturationWarning,
    GenParams,
    evolve_step,
    generate_sequence,
    seed_graph,
)
from .noise import (
    NoiseParams,
    Placements,
    ProvenanceUnavailableError,
    apply_noise,
    apply_noise_traced,
    mixing_fraction,
)
from .evaluate import (
    ConfigError,
    ConfusionCounts,
    SequenceTooShortError,
    SweepEntry,
    WindowSweepResult,
    mcc,
    pair_confusion,
    resemblance,
    resemblance_report,
    score_pair,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphSequence",
    "InvalidWindowError",
    "NodeCountMismatchError",
    "aggregate",
    "new_links",
    "non_edges",
    "DivergenceError",
    "IterationLimitError",
    "PredictionTruncationWarning",
    "PredictorConfig",
    "ScoreKind",
    "ScoredPair",
    "adamic_adar",
    "graph_distance",
    "katz",
    "katz_via_solve",
    "pagerank_vector",
    "predict_top_k",
    "rooted_pagerank",
    "rooted_pagerank_via_solve",
    "score_all_non_edges",
    "score_matrix",
    "BarabasiAlbert",
    "ErdosRenyi",
    "GenerationSaturationWarning",
    "GenParams",
    "evolve_step",
    "generate_sequence",
    "seed_graph",
    "NoiseParams",
    "Placements",
    "ProvenanceUnavailableError",
    "apply_noise",
    "apply_noise_traced",
    "mixing_fraction",
    "ConfigError",
    "ConfusionCounts",
    "SequenceTooShortError",
    "SweepEntry",
    "WindowSweepResult",
    "mcc",
    "pair_confusion",
    "resemblance",
    "resemblance_report",
    "score_pair",
    "sweep",
    "__version__",
]
