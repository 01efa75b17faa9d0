"""Checkpoint directory format and backbone resolution.

A checkpoint is one directory holding the encoder spec, a training-config
snapshot, step and dev-metric bookkeeping (``checkpoint.json``), the
tokenizer vocabulary (``vocab.json``), and the parameter tensors
(``weights.pt``). Only toy-backbone models are saved in this format;
external backbones reload from their own pretrained source.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .encoders import DualEncoder, EncoderSpec
from .errors import CheckpointError
from .tokenization import WhitespaceTokenizer

CHECKPOINT_FORMAT_VERSION = 1
CHECKPOINT_MANIFEST = "checkpoint.json"
WEIGHTS_FILE = "weights.pt"
VOCAB_FILE = "vocab.json"


@dataclass
class Checkpoint:
    """A model plus the bookkeeping needed to reproduce its dev metric."""

    model: DualEncoder
    config: dict
    step: int
    dev_metric: float | None


def save_checkpoint(ckpt: Checkpoint, path: str | Path) -> Path:
    """Write a checkpoint directory; returns its path."""
    model = ckpt.model
    if model.spec.backbone != "toy":
        raise CheckpointError("only toy-backbone models use this checkpoint format")
    if not isinstance(model.tokenizer, WhitespaceTokenizer):
        raise CheckpointError("checkpoint format requires the whitespace tokenizer")
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "spec": model.spec.to_dict(),
        "config": ckpt.config,
        "step": ckpt.step,
        "dev_metric": ckpt.dev_metric,
    }
    (path / CHECKPOINT_MANIFEST).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    model.tokenizer.save(path / VOCAB_FILE)
    torch.save(model.state_dict(), path / WEIGHTS_FILE)
    return path


def load_checkpoint(path: str | Path, expected_spec: EncoderSpec | None = None) -> Checkpoint:
    """Rebuild a checkpointed model; raises CheckpointError, never partial state."""
    path = Path(path)
    manifest_path = path / CHECKPOINT_MANIFEST
    if not manifest_path.is_file():
        raise CheckpointError(f"no checkpoint manifest at {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        version = manifest["format_version"]
        spec = EncoderSpec.from_dict(manifest["spec"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"corrupt checkpoint manifest at {manifest_path}: {exc}") from exc
    if version != CHECKPOINT_FORMAT_VERSION:
        raise CheckpointError(
            f"checkpoint format version {version} is not supported "
            f"(expected {CHECKPOINT_FORMAT_VERSION})"
        )
    if expected_spec is not None and spec != expected_spec:
        raise CheckpointError("checkpoint spec does not match the expected encoder spec")
    try:
        tokenizer = WhitespaceTokenizer.load(path / VOCAB_FILE)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint vocabulary: {exc}") from exc
    model = DualEncoder.build_toy(spec, tokenizer, seed=0)
    try:
        state = torch.load(path / WEIGHTS_FILE, map_location="cpu", weights_only=True)
        model.load_state_dict(state)
    except Exception as exc:
        raise CheckpointError(f"cannot load checkpoint weights: {exc}") from exc
    return Checkpoint(
        model=model,
        config=manifest.get("config", {}),
        step=manifest.get("step", 0),
        dev_metric=manifest.get("dev_metric"),
    )


def load_external_backbone(
    identifier: str | Path,
    architecture: str = "cross",
    expected_dim: int | None = None,
) -> DualEncoder:
    """Resolve a backbone locator to a ready encoder.

    A directory containing a toolkit checkpoint loads through
    ``load_checkpoint``; anything else is treated as a pretrained transformer
    locator and needs the ``hf`` extra.
    """
    path = Path(identifier)
    if (path / CHECKPOINT_MANIFEST).is_file():
        model = load_checkpoint(path).model
    elif (path / "config.json").is_file() or not path.exists():
        try:
            from .hf import dual_encoder_from_pretrained

            model = dual_encoder_from_pretrained(str(identifier), architecture=architecture)
        except CheckpointError:
            raise
        except Exception as exc:
            raise CheckpointError(f"cannot resolve backbone {identifier!r}: {exc}") from exc
    else:
        raise CheckpointError(
            f"cannot resolve backbone {identifier!r}: neither a checkpoint "
            "directory nor a pretrained-model locator"
        )
    if expected_dim is not None and model.spec.embedding_dim != expected_dim:
        raise CheckpointError(
            f"backbone embedding dim {model.spec.embedding_dim} does not match "
            f"expected {expected_dim}"
        )
    return model
