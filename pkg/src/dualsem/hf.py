"""Adapter exposing pretrained transformer encoders behind the toy interface.

Requires the ``hf`` extra (``pip install dualsem[hf]``). The adapter presents
the same tokenizer and backbone contracts the toy path uses, so DualEncoder
is architecture-agnostic about where its towers come from.
"""
from __future__ import annotations

import copy

from torch import nn

from .encoders import DualEncoder, EncoderSpec
from .tokenization import VIEW_WORDS


def _require_transformers():
    try:
        import transformers
    except ImportError as exc:
        raise ImportError(
            "pretrained backbones need the 'hf' extra: pip install dualsem[hf]"
        ) from exc
    return transformers


class TransformerTokenizer:
    """Wraps a Hugging Face tokenizer behind the whitespace tokenizer's contract."""

    def __init__(self, inner):
        for attr in ("cls_token_id", "sep_token_id", "pad_token_id"):
            if getattr(inner, attr, None) is None:
                raise ValueError(f"tokenizer does not define {attr}")
        self.inner = inner

    def __len__(self) -> int:
        return len(self.inner)

    @property
    def pad_id(self) -> int:
        return self.inner.pad_token_id

    @property
    def cls_id(self) -> int:
        return self.inner.cls_token_id

    @property
    def sep_id(self) -> int:
        return self.inner.sep_token_id

    def encode_words(self, text: str) -> list[int]:
        return self.inner(text, add_special_tokens=False)["input_ids"]

    def view_suffix_ids(self, view: str) -> list[int]:
        if view not in VIEW_WORDS:
            raise ValueError(f"unknown view {view!r}; expected one of {VIEW_WORDS}")
        # A view word split into several pieces keeps all of them.
        return self.inner(view, add_special_tokens=False)["input_ids"]


class TransformerBackbone(nn.Module):
    """Presents a Hugging Face encoder through the toy backbone's forward contract."""

    def __init__(self, model):
        super().__init__()
        self.model = model

    def forward(self, token_ids, attention_mask):
        return self.model(input_ids=token_ids, attention_mask=attention_mask).last_hidden_state


def dual_encoder_from_pretrained(
    identifier: str,
    architecture: str = "cross",
    max_sequence_length: int | None = None,
) -> DualEncoder:
    """Build a DualEncoder around a pretrained transformer encoder."""
    transformers = _require_transformers()
    tokenizer = TransformerTokenizer(transformers.AutoTokenizer.from_pretrained(identifier))
    model = transformers.AutoModel.from_pretrained(identifier)
    max_len = max_sequence_length or min(model.config.max_position_embeddings, 128)
    spec = EncoderSpec(
        architecture=architecture,
        backbone="external",
        embedding_dim=model.config.hidden_size,
        max_sequence_length=max_len,
        toy=None,
    )
    backbone = TransformerBackbone(model)
    if architecture == "bi":
        # Same pretrained weights seed both towers.
        return DualEncoder(spec, tokenizer, backbone, copy.deepcopy(backbone))
    return DualEncoder(spec, tokenizer, backbone)
