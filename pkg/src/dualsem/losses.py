"""Temperature-scaled dual contrastive objective over entailment quads.

Every sample contributes eight embeddings: four sentences (premise,
explicit-entailment hypothesis, implied-entailment hypothesis, contradiction
hypothesis), each encoded under both the explicit and the implicit view.

The per-sample loss is a sum of up to five softmax-style terms:

1. premise explicit view pulled toward its explicit-entailment hypothesis,
   contrasted in-batch against all explicit-entailment hypotheses, all
   contradiction hypotheses, and all premises' implicit views;
2. premise implicit view pulled toward its implied-entailment hypothesis,
   contrasted against all implied-entailment hypotheses, all contradiction
   hypotheses, and all premises' explicit views;
3-5. each hypothesis family's explicit view pulled toward its own implicit
   view, contrasted against the same family's implicit views in-batch.

Terms 3-5 keep hypothesis views aligned while the cross-view entries in the
denominators of terms 1-2 push a premise's two views apart; this asymmetry is
what makes the view gap usable as an implicitness signal.

Sums over the batch index include the diagonal (no self-exclusion), so every
numerator also appears in its denominator and each term is nonnegative.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import torch

_EIGHT_FIELDS = (
    ("premise", "explicit"),
    ("premise", "implicit"),
    ("explicit_entailment", "explicit"),
    ("explicit_entailment", "implicit"),
    ("implied_entailment", "explicit"),
    ("implied_entailment", "implicit"),
    ("contradiction", "explicit"),
    ("contradiction", "implicit"),
)


class LossVariant(str, enum.Enum):
    """Selects the full objective or one of its three reduced forms."""

    FULL = "full"
    NO_CONTRADICTION = "no_contradiction"
    NO_INTRA = "no_intra"
    NEITHER = "neither"

    @classmethod
    def coerce(cls, value: "LossVariant | str") -> "LossVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValueError(
                f"unknown loss variant {value!r}; expected one of "
                f"{[v.value for v in cls]}"
            ) from None

    @property
    def uses_contradiction(self) -> bool:
        return self in (LossVariant.FULL, LossVariant.NO_INTRA)

    @property
    def uses_intra(self) -> bool:
        return self in (LossVariant.FULL, LossVariant.NO_CONTRADICTION)


def cosine(h1, h2) -> float:
    """Cosine similarity of two vectors; raises on zero vectors."""
    a = np.asarray(h1, dtype=np.float64)
    b = np.asarray(h2, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"cosine expects two equal-length vectors, got {a.shape} and {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine is undefined for zero vectors")
    value = float(np.dot(a, b) / (na * nb))
    return max(-1.0, min(1.0, value))


def pair_score(h1, h2, tau: float) -> float:
    """Exponentiated, temperature-scaled cosine similarity."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    return math.exp(cosine(h1, h2) / tau)


def _as_matrix(value, name: str) -> torch.Tensor:
    tensor = torch.as_tensor(value)
    if tensor.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {tuple(tensor.shape)}")
    return tensor


@dataclass(frozen=True)
class ViewPair:
    """Explicit-view and implicit-view embeddings for one sentence family, stacked [N, dim]."""

    explicit: torch.Tensor
    implicit: torch.Tensor

    def __post_init__(self) -> None:
        object.__setattr__(self, "explicit", _as_matrix(self.explicit, "explicit view"))
        object.__setattr__(self, "implicit", _as_matrix(self.implicit, "implicit view"))

    def view(self, name: str) -> torch.Tensor:
        if name == "explicit":
            return self.explicit
        if name == "implicit":
            return self.implicit
        raise ValueError(f"unknown view {name!r}")


@dataclass(frozen=True)
class BatchEmbeddings:
    """All eight embedding blocks for a batch of entailment quads."""

    premise: ViewPair
    explicit_entailment: ViewPair
    implied_entailment: ViewPair
    contradiction: ViewPair

    def __post_init__(self) -> None:
        shape = None
        for family, view_name in _EIGHT_FIELDS:
            block = getattr(self, family).view(view_name)
            if shape is None:
                shape = block.shape
                if shape[0] < 1:
                    raise ValueError("batch must contain at least one sample")
            elif block.shape != shape:
                raise ValueError(
                    f"{family}.{view_name} has shape {tuple(block.shape)}, expected {tuple(shape)}"
                )
            if not torch.isfinite(block).all():
                raise ValueError(f"{family}.{view_name} contains non-finite values")
            if (block.norm(dim=1) == 0).any():
                raise ValueError(f"{family}.{view_name} contains a zero vector")

    @property
    def size(self) -> int:
        return self.premise.explicit.shape[0]

    @property
    def dim(self) -> int:
        return self.premise.explicit.shape[1]

    def block(self, family: str, view_name: str) -> torch.Tensor:
        return getattr(self, family).view(view_name)


# Term layout of the objective. Each softmax term pulls ``anchor`` toward the
# diagonal of ``target`` and contrasts against every listed denominator family,
# summed over the whole batch. Keys are (family, view) pairs.
_ALIGNMENT_TERMS = {
    "explicit_entailment_views": ("explicit_entailment", "explicit", "explicit_entailment", "implicit"),
    "implied_entailment_views": ("implied_entailment", "explicit", "implied_entailment", "implicit"),
    "contradiction_views": ("contradiction", "explicit", "contradiction", "implicit"),
}


def term_structure(variant: LossVariant | str) -> dict[str, dict]:
    """Describe each softmax term of a variant: anchor, target, denominator families.

    Used by structural tests (the reduced variants' denominators must be
    subsets of the full objective's) and by ``dual_loss`` itself.
    """
    variant = LossVariant.coerce(variant)
    premise_explicit_den = [("explicit_entailment", "explicit")]
    premise_implicit_den = [("implied_entailment", "explicit")]
    if variant.uses_contradiction:
        premise_explicit_den.append(("contradiction", "explicit"))
        premise_implicit_den.append(("contradiction", "explicit"))
    if variant.uses_intra:
        premise_explicit_den.append(("premise", "implicit"))
        premise_implicit_den.append(("premise", "explicit"))
    terms = {
        "premise_explicit": {
            "anchor": ("premise", "explicit"),
            "target": ("explicit_entailment", "explicit"),
            "denominator": tuple(premise_explicit_den),
        },
        "premise_implicit": {
            "anchor": ("premise", "implicit"),
            "target": ("implied_entailment", "explicit"),
            "denominator": tuple(premise_implicit_den),
        },
    }
    if variant.uses_intra:
        for name, (af, av, tf, tv) in _ALIGNMENT_TERMS.items():
            if name == "contradiction_views" and not variant.uses_contradiction:
                continue
            terms[name] = {
                "anchor": (af, av),
                "target": (tf, tv),
                "denominator": ((tf, tv),),
            }
    return terms


def _cosine_matrix(a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
    a_unit = a / a.norm(dim=1, keepdim=True)
    b_unit = b / b.norm(dim=1, keepdim=True)
    return a_unit @ b_unit.T


def dual_loss(
    batch: BatchEmbeddings,
    tau: float,
    variant: LossVariant | str = LossVariant.FULL,
) -> torch.Tensor:
    """Mean per-sample contrastive loss over the batch.

    Differentiable in every embedding block; evaluated in log-space
    (log-sum-exp) so single-precision inputs stay stable at small ``tau``.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    variant = LossVariant.coerce(variant)
    total = None
    for term in term_structure(variant).values():
        anchor = batch.block(*term["anchor"])
        target = batch.block(*term["target"])
        numerator = torch.diagonal(_cosine_matrix(anchor, target)) / tau
        logits = torch.cat(
            [_cosine_matrix(anchor, batch.block(*fam)) / tau for fam in term["denominator"]],
            dim=1,
        )
        term_loss = torch.logsumexp(logits, dim=1) - numerator
        total = term_loss if total is None else total + term_loss
    assert total is not None
    return total.mean()
