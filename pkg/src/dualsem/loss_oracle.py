"""Slow reference evaluation of the contrastive objective.

Everything here is written as explicit scalar loops over plain Python floats:
its own dot product, its own cosine, direct ``math.exp`` ratios instead of
log-sum-exp, and per-sample accumulation in loop order. It intentionally
shares no numerical code with ``losses.dual_loss`` so the two can check each
other.

Unoptimized by design; intended for batches of at most a few samples.
"""
from __future__ import annotations

import math

from .losses import BatchEmbeddings, LossVariant

ORACLE_MAX_BATCH = 8


def _rows(block) -> list[list[float]]:
    return [[float(x) for x in row] for row in block.detach().cpu().tolist()] if hasattr(block, "detach") else [
        [float(x) for x in row] for row in block
    ]


def _cos(a: list[float], b: list[float]) -> float:
    dot = 0.0
    norm_a = 0.0
    norm_b = 0.0
    for x, y in zip(a, b):
        dot += x * y
        norm_a += x * x
        norm_b += y * y
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine undefined for zero vector")
    return dot / math.sqrt(norm_a * norm_b)


def _score(a: list[float], b: list[float], tau: float) -> float:
    return math.exp(_cos(a, b) / tau)


def oracle_dual_loss(batch: BatchEmbeddings, tau: float, variant: LossVariant | str = LossVariant.FULL) -> float:
    """Recompute the mean batch loss by brute force."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    variant = LossVariant.coerce(variant)
    n = batch.size
    if n > ORACLE_MAX_BATCH:
        raise ValueError(f"oracle supports batches up to {ORACLE_MAX_BATCH}, got {n}")

    prem_exp = _rows(batch.premise.explicit)
    prem_imp = _rows(batch.premise.implicit)
    ee_exp = _rows(batch.explicit_entailment.explicit)
    ee_imp = _rows(batch.explicit_entailment.implicit)
    ie_exp = _rows(batch.implied_entailment.explicit)
    ie_imp = _rows(batch.implied_entailment.implicit)
    con_exp = _rows(batch.contradiction.explicit)
    con_imp = _rows(batch.contradiction.implicit)

    with_contradiction = variant in (LossVariant.FULL, LossVariant.NO_INTRA)
    with_intra = variant in (LossVariant.FULL, LossVariant.NO_CONTRADICTION)

    total = 0.0
    for i in range(n):
        loss_i = 0.0

        # Premise explicit view against the explicit-entailment hypotheses.
        den = 0.0
        for j in range(n):
            den += _score(prem_exp[i], ee_exp[j], tau)
            if with_contradiction:
                den += _score(prem_exp[i], con_exp[j], tau)
            if with_intra:
                den += _score(prem_exp[i], prem_imp[j], tau)
        loss_i += -math.log(_score(prem_exp[i], ee_exp[i], tau) / den)

        # Premise implicit view against the implied-entailment hypotheses.
        den = 0.0
        for j in range(n):
            den += _score(prem_imp[i], ie_exp[j], tau)
            if with_contradiction:
                den += _score(prem_imp[i], con_exp[j], tau)
            if with_intra:
                den += _score(prem_imp[i], prem_exp[j], tau)
        loss_i += -math.log(_score(prem_imp[i], ie_exp[i], tau) / den)

        if with_intra:
            # Hypothesis families: explicit view toward own implicit view.
            den = 0.0
            for j in range(n):
                den += _score(ee_exp[i], ee_imp[j], tau)
            loss_i += -math.log(_score(ee_exp[i], ee_imp[i], tau) / den)

            den = 0.0
            for j in range(n):
                den += _score(ie_exp[i], ie_imp[j], tau)
            loss_i += -math.log(_score(ie_exp[i], ie_imp[i], tau) / den)

            if with_contradiction:
                den = 0.0
                for j in range(n):
                    den += _score(con_exp[i], con_imp[j], tau)
                loss_i += -math.log(_score(con_exp[i], con_imp[i], tau) / den)

        total += loss_i
    return total / n
