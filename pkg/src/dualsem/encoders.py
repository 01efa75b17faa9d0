"""Dual-view sentence encoders with CLS pooling.

Two architectures produce a per-view embedding for a sentence:

* cross: one shared backbone, conditioned by rendering the input as
  ``[CLS] sentence [SEP] <view-word>`` so the view is part of the token
  sequence;
* bi: two separate towers, one per view, both rendered as
  ``[CLS] sentence [SEP]`` and routed by view. Towers start from identical
  weights and differentiate only through training.

The trainable toy backbone is a small transformer over a whitespace
vocabulary, sized so the whole training loop runs on CPU in minutes.
"""
from __future__ import annotations

import copy
from collections.abc import Sequence
from dataclasses import dataclass, field, asdict

import numpy as np
import torch
from torch import nn

from .data import Batch
from .losses import BatchEmbeddings, ViewPair
from .tokenization import WhitespaceTokenizer

ARCHITECTURES = ("cross", "bi")
BACKBONES = ("toy", "external")
VIEWS = ("explicit", "implicit")


@dataclass(frozen=True)
class ToyConfig:
    """Architecture of the trainable toy transformer backbone."""

    layers: int = 2
    heads: int = 4
    hidden_size: int = 64
    ffn_size: int = 128
    dropout: float = 0.0

    def __post_init__(self) -> None:
        if min(self.layers, self.heads, self.hidden_size, self.ffn_size) < 1:
            raise ValueError("toy config sizes must be positive")
        if self.hidden_size % self.heads != 0:
            raise ValueError("hidden_size must be divisible by heads")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")


@dataclass(frozen=True)
class EncoderSpec:
    """Declares which encoder to build; serialized into every checkpoint."""

    architecture: str = "cross"
    backbone: str = "toy"
    embedding_dim: int = 64
    max_sequence_length: int = 64
    toy: ToyConfig | None = field(default_factory=ToyConfig)

    def __post_init__(self) -> None:
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"architecture must be one of {ARCHITECTURES}")
        if self.backbone not in BACKBONES:
            raise ValueError(f"backbone must be one of {BACKBONES}")
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be positive")
        # Room for [CLS], one sentence token, [SEP], and a view word.
        if self.max_sequence_length < 4:
            raise ValueError("max_sequence_length must be at least 4")
        if self.backbone == "toy":
            if self.toy is None:
                raise ValueError("toy backbone requires a toy config")
            if self.toy.hidden_size != self.embedding_dim:
                raise ValueError(
                    f"embedding_dim {self.embedding_dim} must equal the toy "
                    f"hidden size {self.toy.hidden_size}"
                )
        else:
            object.__setattr__(self, "toy", None)

    def to_dict(self) -> dict:
        payload = {
            "architecture": self.architecture,
            "backbone": self.backbone,
            "embedding_dim": self.embedding_dim,
            "max_sequence_length": self.max_sequence_length,
        }
        if self.toy is not None:
            payload["toy"] = asdict(self.toy)
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "EncoderSpec":
        toy = payload.get("toy")
        return cls(
            architecture=payload["architecture"],
            backbone=payload["backbone"],
            embedding_dim=payload["embedding_dim"],
            max_sequence_length=payload["max_sequence_length"],
            toy=ToyConfig(**toy) if toy is not None else None,
        )


@dataclass(frozen=True, eq=False)
class DualEmbedding:
    """Both view embeddings of one sentence; finite and nonzero by invariant."""

    explicit: np.ndarray
    implicit: np.ndarray

    def __post_init__(self) -> None:
        for name in ("explicit", "implicit"):
            vec = np.asarray(getattr(self, name), dtype=np.float64)
            if vec.ndim != 1:
                raise ValueError(f"{name} view must be a vector, got shape {vec.shape}")
            if not np.isfinite(vec).all():
                raise ValueError(f"{name} view contains non-finite values")
            if np.linalg.norm(vec) == 0.0:
                raise ValueError(f"{name} view is a zero vector")
            object.__setattr__(self, name, vec)
        if self.explicit.shape != self.implicit.shape:
            raise ValueError("view embeddings must share one dimension")

    @property
    def dim(self) -> int:
        return self.explicit.shape[0]


def pool_cls(hidden_states: torch.Tensor) -> torch.Tensor:
    """Hidden state at the CLS position (sequence row 0).

    Accepts one [sequence, hidden] matrix or a [batch, sequence, hidden]
    stack; pooling reads row 0 only, never the other positions.
    """
    if hidden_states.ndim == 2:
        if hidden_states.shape[0] < 1:
            raise ValueError("cannot pool an empty sequence")
        return hidden_states[0]
    if hidden_states.ndim == 3:
        if hidden_states.shape[1] < 1:
            raise ValueError("cannot pool an empty sequence")
        return hidden_states[:, 0]
    raise ValueError(f"expected 2-D or 3-D hidden states, got {hidden_states.ndim}-D")


class ToyTextEncoder(nn.Module):
    """Small transformer encoder: token + learned position embeddings, CLS at 0."""

    def __init__(
        self,
        vocab_size: int,
        config: ToyConfig,
        max_sequence_length: int,
        pad_id: int,
    ):
        super().__init__()
        self.token_embedding = nn.Embedding(vocab_size, config.hidden_size, padding_idx=pad_id)
        self.position_embedding = nn.Embedding(max_sequence_length, config.hidden_size)
        self.input_norm = nn.LayerNorm(config.hidden_size)
        layer = nn.TransformerEncoderLayer(
            d_model=config.hidden_size,
            nhead=config.heads,
            dim_feedforward=config.ffn_size,
            dropout=config.dropout,
            activation="gelu",
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            layer, num_layers=config.layers, enable_nested_tensor=False
        )

    def forward(self, token_ids: torch.Tensor, attention_mask: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(token_ids.shape[1], device=token_ids.device)
        states = self.token_embedding(token_ids) + self.position_embedding(positions)
        states = self.input_norm(states)
        return self.encoder(states, src_key_padding_mask=attention_mask == 0)


class DualEncoder(nn.Module):
    """Maps (sentence, view) to an embedding under either architecture.

    ``forward_view`` is differentiable and feeds training; ``encode`` and the
    dual helpers run in inference mode and return float64 arrays for the
    cosine-based downstream math.
    """

    def __init__(
        self,
        spec: EncoderSpec,
        tokenizer,
        backbone: nn.Module,
        implicit_backbone: nn.Module | None = None,
    ):
        super().__init__()
        if spec.architecture == "bi":
            if implicit_backbone is None:
                raise ValueError("bi architecture requires a second tower")
            self.towers = nn.ModuleDict({"explicit": backbone, "implicit": implicit_backbone})
        else:
            if implicit_backbone is not None:
                raise ValueError("cross architecture takes a single backbone")
            self.towers = nn.ModuleDict({"shared": backbone})
        self.spec = spec
        self.tokenizer = tokenizer
        self.truncation_events = 0

    @classmethod
    def build_toy(
        cls,
        spec: EncoderSpec,
        tokenizer: WhitespaceTokenizer,
        seed: int = 0,
    ) -> "DualEncoder":
        """Build a freshly initialized toy-backbone encoder, seeded."""
        if spec.backbone != "toy":
            raise ValueError("build_toy requires a toy-backbone spec")
        torch.manual_seed(seed)
        tower = ToyTextEncoder(
            len(tokenizer), spec.toy, spec.max_sequence_length, tokenizer.pad_id
        )
        if spec.architecture == "bi":
            # Both towers start from the same weights; training differentiates them.
            return cls(spec, tokenizer, tower, copy.deepcopy(tower))
        return cls(spec, tokenizer, tower)

    def _tower(self, view: str) -> nn.Module:
        if self.spec.architecture == "bi":
            return self.towers[view]
        return self.towers["shared"]

    def _render(self, texts: Sequence[str], view: str) -> tuple[torch.Tensor, torch.Tensor]:
        """Token ids and attention mask for a batch of sentences under one view."""
        if view not in VIEWS:
            raise ValueError(f"unknown view {view!r}; expected one of {VIEWS}")
        if len(texts) == 0:
            raise ValueError("cannot render an empty batch")
        tk = self.tokenizer
        suffix = tk.view_suffix_ids(view) if self.spec.architecture == "cross" else []
        budget = self.spec.max_sequence_length - 2 - len(suffix)
        if budget < 1:
            raise ValueError("max_sequence_length leaves no room for sentence tokens")
        rows = []
        for text in texts:
            words = tk.encode_words(text)
            if len(words) > budget:
                # Truncate the sentence tail; CLS and the view suffix survive.
                words = words[:budget]
                self.truncation_events += 1
            rows.append([tk.cls_id] + words + [tk.sep_id] + suffix)
        width = max(len(row) for row in rows)
        token_ids = torch.full((len(rows), width), tk.pad_id, dtype=torch.long)
        mask = torch.zeros((len(rows), width), dtype=torch.long)
        for i, row in enumerate(rows):
            token_ids[i, : len(row)] = torch.tensor(row, dtype=torch.long)
            mask[i, : len(row)] = 1
        return token_ids, mask

    def forward_view(self, texts: Sequence[str], view: str) -> torch.Tensor:
        """Differentiable [batch, embedding_dim] embeddings under one view."""
        token_ids, mask = self._render(texts, view)
        hidden = self._tower(view)(token_ids, mask)
        return pool_cls(hidden)

    def encode(self, texts: Sequence[str], view: str) -> np.ndarray:
        """Inference-mode [batch, embedding_dim] float64 embeddings."""
        was_training = self.training
        self.eval()
        try:
            with torch.no_grad():
                out = self.forward_view(list(texts), view)
        finally:
            self.train(was_training)
        return out.detach().cpu().double().numpy()

    def encode_dual(self, sentence: str) -> DualEmbedding:
        """Both view embeddings of one sentence."""
        return DualEmbedding(
            explicit=self.encode([sentence], "explicit")[0],
            implicit=self.encode([sentence], "implicit")[0],
        )

    def encode_dual_many(
        self, texts: Sequence[str], chunk_size: int = 256
    ) -> list[DualEmbedding]:
        """Both views for many sentences, batched in chunks."""
        texts = list(texts)
        out: list[DualEmbedding] = []
        for start in range(0, len(texts), chunk_size):
            part = texts[start : start + chunk_size]
            explicit = self.encode(part, "explicit")
            implicit = self.encode(part, "implicit")
            out.extend(
                DualEmbedding(explicit=e, implicit=i)
                for e, i in zip(explicit, implicit)
            )
        return out

    def embed_batch(self, batch: Batch) -> BatchEmbeddings:
        """All eight differentiable embedding blocks for a training batch."""
        samples = batch.samples

        def pair(texts: list[str]) -> ViewPair:
            return ViewPair(
                explicit=self.forward_view(texts, "explicit"),
                implicit=self.forward_view(texts, "implicit"),
            )

        return BatchEmbeddings(
            premise=pair([s.premise for s in samples]),
            explicit_entailment=pair([s.explicit_entailment for s in samples]),
            implied_entailment=pair([s.implied_entailment for s in samples]),
            contradiction=pair([s.contradiction for s in samples]),
        )
