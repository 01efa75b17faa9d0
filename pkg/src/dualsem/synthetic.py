"""Seeded synthetic corpus with a recoverable two-factor latent structure.

Each premise mixes a literal token pattern with a hidden token pattern. The
four hypothesis slots relate to those patterns deterministically:

* explicit_entailment shares literal tokens only,
* implied_entailment shares hidden tokens only,
* contradiction carries negated counterparts of both patterns,
* neutral shares no pattern token at all.

The per-sample pattern assignments are returned as template records so tests
can check generated text against the generator's own bookkeeping, and so a
trained model's behaviour can be scored against known structure.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .data import DatasetSplit, InliSample

# Sentence lengths in tokens. Premises are deliberately the longest field,
# mirroring the length skew of real entailment-quad data.
_PREMISE_FILLERS = 4
_HYPOTHESIS_FILLERS = 2
_PATTERN_SIZE = 2

MIN_VOCAB = 20


@dataclass(frozen=True)
class TemplateRecord:
    """The latent structure behind one generated sample."""

    sample_id: str
    literal_tokens: tuple[str, ...]
    hidden_tokens: tuple[str, ...]
    anti_tokens: tuple[str, ...]

    @property
    def pattern_tokens(self) -> frozenset[str]:
        return frozenset(self.literal_tokens) | frozenset(self.hidden_tokens)


def _pools(vocab_size: int) -> tuple[list[str], list[str], list[str]]:
    n_pattern = max(4, vocab_size // 4)
    literal = [f"lit{i:03d}" for i in range(n_pattern)]
    hidden = [f"hid{i:03d}" for i in range(n_pattern)]
    filler = [f"fil{i:03d}" for i in range(vocab_size - 2 * n_pattern)]
    return literal, hidden, filler


def _negate(token: str) -> str:
    return f"not-{token}"


def generate_synthetic(
    seed: int,
    n_samples: int,
    vocab_size: int,
    split_name: str = "train",
) -> tuple[DatasetSplit, dict[str, TemplateRecord]]:
    """Generate a split plus the template records describing it."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if vocab_size < MIN_VOCAB:
        raise ValueError(f"vocab_size must be >= {MIN_VOCAB}")
    literal_pool, hidden_pool, filler_pool = _pools(vocab_size)
    rng = random.Random(seed)
    samples = []
    templates: dict[str, TemplateRecord] = {}
    for i in range(n_samples):
        sample_id = f"syn-{split_name}-{i:05d}"
        literal = tuple(rng.sample(literal_pool, _PATTERN_SIZE))
        hidden = tuple(rng.sample(hidden_pool, _PATTERN_SIZE))
        anti = tuple(_negate(t) for t in literal + hidden)

        premise_fillers = rng.sample(filler_pool, _PREMISE_FILLERS)
        premise_tokens = list(literal + hidden) + premise_fillers
        rng.shuffle(premise_tokens)

        explicit_tokens = list(literal) + rng.sample(filler_pool, _HYPOTHESIS_FILLERS)
        rng.shuffle(explicit_tokens)

        implied_tokens = list(hidden) + rng.sample(filler_pool, _HYPOTHESIS_FILLERS)
        rng.shuffle(implied_tokens)

        contra_tokens = list(anti) + rng.sample(filler_pool, _HYPOTHESIS_FILLERS)
        rng.shuffle(contra_tokens)

        neutral_pool = [t for t in filler_pool if t not in premise_fillers]
        neutral_tokens = rng.sample(neutral_pool, _HYPOTHESIS_FILLERS + 1)

        samples.append(
            InliSample(
                id=sample_id,
                premise=" ".join(premise_tokens),
                implied_entailment=" ".join(implied_tokens),
                explicit_entailment=" ".join(explicit_tokens),
                neutral=" ".join(neutral_tokens),
                contradiction=" ".join(contra_tokens),
            )
        )
        templates[sample_id] = TemplateRecord(
            sample_id=sample_id,
            literal_tokens=literal,
            hidden_tokens=hidden,
            anti_tokens=anti,
        )
    return DatasetSplit(samples=tuple(samples), split_name=split_name), templates


def make_synthetic_corpus(
    seed: int,
    n_samples: int,
    vocab_size: int,
    split_name: str = "train",
) -> DatasetSplit:
    """Generate a synthetic split; deterministic in ``seed``."""
    split, _ = generate_synthetic(seed, n_samples, vocab_size, split_name)
    return split
