"""Dual-view sentence embeddings: every sentence gets an explicit-semantics
vector and an implicit-semantics vector in one shared space, trained
contrastively on entailment quads."""

__version__ = "0.1.0"

from .data import (
    Batch,
    DatasetSplit,
    EisPair,
    InliSample,
    RteInstance,
    batch_iter,
    load_inli,
    load_pairwise,
    to_eis_pairs_from_inli,
    to_rte_instances,
    write_inli,
)
from .checkpoints import (
    Checkpoint,
    load_checkpoint,
    load_external_backbone,
    save_checkpoint,
)
from .encoders import (
    DualEmbedding,
    DualEncoder,
    EncoderSpec,
    ToyConfig,
    pool_cls,
)
from .evaluation import (
    EisReport,
    RteReport,
    ThresholdResult,
    eis_evaluate,
    eis_predict,
    imp_score,
    length_baseline,
    length_baseline_evaluate,
    rte_evaluate,
    rte_predict,
    rte_score,
    tune_threshold,
)
from .losses import BatchEmbeddings, LossVariant, ViewPair, cosine, dual_loss, pair_score
from .loss_oracle import oracle_dual_loss
from .retrieval import (
    DualIndex,
    RetrievalResult,
    build_index,
    pool_hypotheses,
    query,
)
from .synthetic import generate_synthetic, make_synthetic_corpus
from .tokenization import WhitespaceTokenizer
from .training import (
    GridResult,
    MetricRecord,
    TrainConfig,
    TrainOutcome,
    grid_search,
    read_metrics,
    train,
    write_metrics,
)

__all__ = [
    "Batch",
    "BatchEmbeddings",
    "Checkpoint",
    "DatasetSplit",
    "DualEmbedding",
    "DualEncoder",
    "DualIndex",
    "EisPair",
    "EisReport",
    "EncoderSpec",
    "GridResult",
    "InliSample",
    "LossVariant",
    "MetricRecord",
    "RetrievalResult",
    "RteInstance",
    "RteReport",
    "ThresholdResult",
    "ToyConfig",
    "TrainConfig",
    "TrainOutcome",
    "ViewPair",
    "WhitespaceTokenizer",
    "batch_iter",
    "build_index",
    "cosine",
    "dual_loss",
    "eis_evaluate",
    "eis_predict",
    "generate_synthetic",
    "grid_search",
    "imp_score",
    "length_baseline",
    "length_baseline_evaluate",
    "load_checkpoint",
    "load_external_backbone",
    "load_inli",
    "load_pairwise",
    "make_synthetic_corpus",
    "oracle_dual_loss",
    "pair_score",
    "pool_cls",
    "pool_hypotheses",
    "query",
    "read_metrics",
    "rte_evaluate",
    "rte_predict",
    "rte_score",
    "save_checkpoint",
    "to_eis_pairs_from_inli",
    "to_rte_instances",
    "train",
    "tune_threshold",
    "write_inli",
    "write_metrics",
    "__version__",
]
