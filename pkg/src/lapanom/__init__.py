"""Change point and event detection in dynamic graphs via Laplacian singular spectra.

The pipeline: load or generate a sequence of graph snapshots, embed each
snapshot as the (possibly truncated) singular spectrum of its Laplacian,
summarize recent embeddings over a short and a long sliding window, and rank
timesteps by the positive jump in cosine dissimilarity from that typical
behavior.
"""

from . import errors
from .detector import (
    AnomalyScoreSeries,
    DetectorConfig,
    detect,
    normal_behavior,
    score_series,
    z_score,
)
from .graphs import (
    GraphStats,
    Snapshot,
    TemporalGraph,
    adjacency,
    graph_stats,
    laplacian,
    load_snapshots,
    permute_nodes,
    save_snapshots,
)
from .metrics import (
    CorrelationReport,
    correlation_report,
    hits_at_n,
    property_outlier_scores,
    spearman,
)
from .sbm import (
    ScenarioSpec,
    SegmentSpec,
    equal_blocks,
    evolve_with_continuity,
    generate_scenario,
    preset_scenario,
    sample_sbm,
)
from .spectra import (
    EmbeddingKind,
    SignatureVector,
    activity_vector,
    embed_sequence,
    full_spectrum,
    truncated_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AnomalyScoreSeries",
    "CorrelationReport",
    "DetectorConfig",
    "EmbeddingKind",
    "GraphStats",
    "ScenarioSpec",
    "SegmentSpec",
    "SignatureVector",
    "Snapshot",
    "TemporalGraph",
    "activity_vector",
    "adjacency",
    "correlation_report",
    "detect",
    "embed_sequence",
    "equal_blocks",
    "errors",
    "evolve_with_continuity",
    "full_spectrum",
    "generate_scenario",
    "graph_stats",
    "hits_at_n",
    "laplacian",
    "load_snapshots",
    "normal_behavior",
    "permute_nodes",
    "preset_scenario",
    "property_outlier_scores",
    "sample_sbm",
    "save_snapshots",
    "score_series",
    "spearman",
    "truncated_spectrum",
    "z_score",
]
