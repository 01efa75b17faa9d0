"""Downstream scoring: entailment decisions, implicitness, and baselines.

The entailment rule compares a hypothesis' explicit-view embedding against
both views of the premise and takes the better cosine; a sentence's
implicitness is the cosine gap between its own two views. Both quantities
read directly off the trained embedding space with no extra parameters
beyond one tuned decision threshold.
"""
from __future__ import annotations

import warnings
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .data import HYPOTHESIS_FIELDS, ORIGIN_BY_FIELD, EisPair, RteInstance
from .encoders import DualEmbedding, DualEncoder
from .errors import EvaluationError
from .losses import cosine

ENTAILMENT = "entailment"
NON_ENTAILMENT = "non-entailment"
RTE_LABELS = (ENTAILMENT, NON_ENTAILMENT)

# Reporting order of the four origin classes, with their JSON short keys.
RTE_CLASS_ORDER = tuple(ORIGIN_BY_FIELD[f] for f in HYPOTHESIS_FIELDS)
_CLASS_KEYS = dict(zip(RTE_CLASS_ORDER, ("exp", "imp", "neu", "con")))


@dataclass(frozen=True)
class ThresholdResult:
    """A tuned decision threshold and the dev accuracy it achieves."""

    gamma: float
    accuracy: float

    def __post_init__(self) -> None:
        if not -1.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in the cosine range [-1, 1]")
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError("accuracy must lie in [0, 1]")


@dataclass(frozen=True)
class RteReport:
    """Per-origin-class accuracies plus their unweighted mean, as fractions."""

    per_class: dict[str, float | None]
    average: float
    gamma: float


@dataclass(frozen=True)
class EisReport:
    """Pairwise implicitness-ranking accuracy, as a fraction."""

    accuracy: float
    n_pairs: int


@dataclass(frozen=True)
class ScoredInstance:
    """One entailment instance reduced to its decision score."""

    score: float
    gold: str
    origin: str


def rte_score(premise_dual: DualEmbedding, hypothesis_explicit: np.ndarray) -> float:
    """Best cosine between the hypothesis' explicit view and either premise view."""
    return max(
        cosine(premise_dual.explicit, hypothesis_explicit),
        cosine(premise_dual.implicit, hypothesis_explicit),
    )


def rte_predict(
    premise_dual: DualEmbedding, hypothesis_explicit: np.ndarray, gamma: float
) -> str:
    """Entailment iff the decision score strictly exceeds gamma."""
    return ENTAILMENT if rte_score(premise_dual, hypothesis_explicit) > gamma else NON_ENTAILMENT


def tune_threshold(dev_scores: Sequence[tuple[float, str]]) -> ThresholdResult:
    """Pick the threshold maximizing dev accuracy.

    Candidates are the midpoints of consecutive distinct scores plus the
    extremes -1 and +1; the decision rule is piecewise constant between
    distinct scores, so this sweep is exhaustive over all real thresholds.
    Ties go to the smallest candidate.
    """
    if len(dev_scores) == 0:
        raise EvaluationError("cannot tune a threshold without development scores")
    scores = np.array([float(s) for s, _ in dev_scores])
    for _, gold in dev_scores:
        if gold not in RTE_LABELS:
            raise EvaluationError(f"unknown gold label {gold!r}")
    gold_entailment = np.array([gold == ENTAILMENT for _, gold in dev_scores])
    if gold_entailment.all() or not gold_entailment.any():
        raise EvaluationError("threshold tuning needs both labels in the development set")
    distinct = sorted(set(scores.tolist()))
    midpoints = [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]
    candidates = sorted(set([-1.0, *midpoints, 1.0]))
    best_gamma = None
    best_correct = -1
    for gamma in candidates:
        correct = int(((scores > gamma) == gold_entailment).sum())
        if correct > best_correct:
            best_gamma = gamma
            best_correct = correct
    return ThresholdResult(gamma=best_gamma, accuracy=best_correct / len(scores))


def _encode_chunked(model: DualEncoder, texts: list[str], view: str, chunk_size: int = 256):
    parts = [
        model.encode(texts[start : start + chunk_size], view)
        for start in range(0, len(texts), chunk_size)
    ]
    return np.concatenate(parts, axis=0)


def score_rte_instances(
    model: DualEncoder, instances: Sequence[RteInstance]
) -> list[ScoredInstance]:
    """Decision scores for a batch of instances, encoding each text once."""
    if len(instances) == 0:
        raise EvaluationError("no entailment instances to score")
    premise_texts = list(dict.fromkeys(inst.premise for inst in instances))
    premise_duals = dict(zip(premise_texts, model.encode_dual_many(premise_texts)))
    hypothesis_texts = list(dict.fromkeys(inst.hypothesis for inst in instances))
    hypothesis_vectors = dict(
        zip(hypothesis_texts, _encode_chunked(model, hypothesis_texts, "explicit"))
    )
    return [
        ScoredInstance(
            score=rte_score(premise_duals[inst.premise], hypothesis_vectors[inst.hypothesis]),
            gold=inst.gold,
            origin=inst.origin,
        )
        for inst in instances
    ]


def report_from_scores(scored: Sequence[ScoredInstance], gamma: float) -> RteReport:
    """Per-class accuracies of the threshold rule at a fixed gamma."""
    counts = {origin: [0, 0] for origin in RTE_CLASS_ORDER}
    for item in scored:
        predicted = ENTAILMENT if item.score > gamma else NON_ENTAILMENT
        correct, total = counts[item.origin]
        counts[item.origin] = [correct + (predicted == item.gold), total + 1]
    per_class: dict[str, float | None] = {}
    present: list[float] = []
    for origin in RTE_CLASS_ORDER:
        correct, total = counts[origin]
        if total == 0:
            warnings.warn(f"no instances with origin {origin!r}; class excluded from the average")
            per_class[origin] = None
        else:
            per_class[origin] = correct / total
            present.append(correct / total)
    if not present:
        raise EvaluationError("no scored instances in any class")
    return RteReport(per_class=per_class, average=sum(present) / len(present), gamma=gamma)


def rte_evaluate(
    model: DualEncoder, instances: Sequence[RteInstance], gamma: float
) -> RteReport:
    """Score instances with the model and report per-class accuracy at gamma."""
    return report_from_scores(score_rte_instances(model, instances), gamma)


def imp_score(dual: DualEmbedding) -> float:
    """Implicitness of a sentence: 1 minus the cosine of its two views, in [0, 2]."""
    return 1.0 - cosine(dual.explicit, dual.implicit)


def eis_predict(s1_dual: DualEmbedding, s2_dual: DualEmbedding) -> int:
    """Index of the more implicit sentence; exact ties resolve to 1."""
    return 1 if imp_score(s1_dual) >= imp_score(s2_dual) else 2


def eis_evaluate(model: DualEncoder, pairs: Sequence[EisPair]) -> EisReport:
    """Fraction of pairs whose more-implicit side the model identifies."""
    if len(pairs) == 0:
        raise EvaluationError("no sentence pairs to evaluate")
    duals1 = model.encode_dual_many([p.s1 for p in pairs])
    duals2 = model.encode_dual_many([p.s2 for p in pairs])
    correct = sum(
        1
        for pair, d1, d2 in zip(pairs, duals1, duals2)
        if eis_predict(d1, d2) == pair.gold_more_implicit
    )
    return EisReport(accuracy=correct / len(pairs), n_pairs=len(pairs))


def length_baseline(pair: EisPair) -> int:
    """Pick the longer side by character count after trimming; ties go to 1."""
    return 1 if len(pair.s1.strip()) >= len(pair.s2.strip()) else 2


def length_baseline_evaluate(pairs: Sequence[EisPair]) -> EisReport:
    """Accuracy of the longer-sentence heuristic."""
    if len(pairs) == 0:
        raise EvaluationError("no sentence pairs to evaluate")
    correct = sum(1 for p in pairs if length_baseline(p) == p.gold_more_implicit)
    return EisReport(accuracy=correct / len(pairs), n_pairs=len(pairs))


def rte_report_json(report: RteReport) -> dict:
    """Delimited-output shape for an entailment report."""
    classes = {key: report.per_class.get(origin) for origin, key in _CLASS_KEYS.items()}
    return {"rte": {**classes, "avg": report.average}, "gamma": report.gamma}


def eis_report_json(report: EisReport) -> dict:
    """Delimited-output shape for a pairwise implicitness report."""
    return {"eis": {"accuracy": report.accuracy}}
