"""Loading, validation, and transformation of entailment-quad datasets.

The on-disk format is JSONL with one sample per line:

    {"id": str, "premise": str, "implied_entailment": str,
     "explicit_entailment": str, "neutral": str, "contradiction": str}

Pairwise implicitness data uses:

    {"implicit_sentence": str, "explicit_sentence": str}

An optional ``manifest.json`` next to a split file declares expected split
sizes: ``{"splits": {"train": 32000, "development": 4000, "test": 4000}}``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .errors import DataError, SchemaError, ValidationError

SPLIT_NAMES = ("train", "development", "test")

# Canonical order of the four hypothesis slots of a sample.
HYPOTHESIS_FIELDS = (
    "explicit_entailment",
    "implied_entailment",
    "neutral",
    "contradiction",
)

ORIGIN_BY_FIELD = {
    "explicit_entailment": "explicit-entailment",
    "implied_entailment": "implied-entailment",
    "neutral": "neutral",
    "contradiction": "contradiction",
}

ENTAILMENT_ORIGINS = frozenset({"explicit-entailment", "implied-entailment"})

SAMPLE_FIELDS = ("id", "premise") + HYPOTHESIS_FIELDS

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class InliSample:
    """One premise with its four labelled hypotheses."""

    id: str
    premise: str
    implied_entailment: str
    explicit_entailment: str
    neutral: str
    contradiction: str

    def hypothesis(self, field: str) -> str:
        if field not in HYPOTHESIS_FIELDS:
            raise ValueError(f"unknown hypothesis field {field!r}")
        return getattr(self, field)

    def hypotheses(self) -> dict[str, str]:
        return {f: getattr(self, f) for f in HYPOTHESIS_FIELDS}


@dataclass(frozen=True)
class DatasetSplit:
    """An ordered, validated collection of samples for one split."""

    samples: tuple[InliSample, ...]
    split_name: str

    def __post_init__(self) -> None:
        if self.split_name not in SPLIT_NAMES:
            raise ValidationError(
                f"split_name must be one of {SPLIT_NAMES}, got {self.split_name!r}"
            )

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[InliSample]:
        return iter(self.samples)

    def __getitem__(self, idx: int) -> InliSample:
        return self.samples[idx]


@dataclass(frozen=True)
class RteInstance:
    """A premise/hypothesis pair with a binary entailment label.

    ``origin`` remembers which hypothesis slot the pair came from; the gold
    label is entailment exactly for the two entailment slots.
    """

    premise: str
    hypothesis: str
    gold: str  # "entailment" | "non-entailment"
    origin: str

    def __post_init__(self) -> None:
        expected = "entailment" if self.origin in ENTAILMENT_ORIGINS else "non-entailment"
        if self.gold != expected:
            raise ValidationError(
                f"origin {self.origin!r} requires gold {expected!r}, got {self.gold!r}"
            )


@dataclass(frozen=True)
class EisPair:
    """Two sentences plus the index (1 or 2) of the more implicit one."""

    s1: str
    s2: str
    gold_more_implicit: int

    def __post_init__(self) -> None:
        if self.gold_more_implicit not in (1, 2):
            raise ValidationError("gold_more_implicit must be 1 or 2")
        if self.s1 == self.s2:
            raise ValidationError("EisPair sides must differ")


@dataclass(frozen=True)
class Batch:
    """A slice of a split produced by ``batch_iter``."""

    samples: tuple[InliSample, ...]
    index: int  # position within the epoch, starting at 0

    @property
    def size(self) -> int:
        return len(self.samples)

    @property
    def sample_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.samples)


def _parse_sample(obj: object, line_no: int) -> InliSample:
    if not isinstance(obj, dict):
        raise SchemaError(f"line {line_no}: expected a JSON object")
    values = {}
    for field in SAMPLE_FIELDS:
        if field not in obj:
            raise SchemaError(f"line {line_no}: missing field '{field}'")
        value = obj[field]
        if not isinstance(value, str):
            raise SchemaError(f"line {line_no}: field '{field}' must be a string")
        if field != "id" and not value.strip():
            raise ValidationError(f"line {line_no}: field '{field}' is empty")
        values[field] = value
    if not values["id"].strip():
        raise ValidationError(f"line {line_no}: field 'id' is empty")
    return InliSample(**values)


def _iter_jsonl(path: Path) -> Iterator[tuple[int, object]]:
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {line_no}: invalid JSON ({exc.msg})") from exc


def _expected_split_size(path: Path, split_name: str, manifest: Path | None) -> int | None:
    manifest_path = manifest if manifest is not None else path.parent / MANIFEST_NAME
    if not manifest_path.exists():
        return None
    try:
        declared = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"manifest {manifest_path}: invalid JSON ({exc.msg})") from exc
    splits = declared.get("splits", {})
    size = splits.get(split_name)
    if size is not None and not isinstance(size, int):
        raise SchemaError(f"manifest {manifest_path}: split size for '{split_name}' must be an integer")
    return size


def load_inli(path: str | Path, split_name: str, manifest: str | Path | None = None) -> DatasetSplit:
    """Load one split from a JSONL file, preserving file order.

    If a manifest declares a size for this split (either passed explicitly or
    found as ``manifest.json`` beside the file), the loaded count must match.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"dataset file not found: {path}")
    samples: list[InliSample] = []
    seen_ids: set[str] = set()
    for line_no, obj in _iter_jsonl(path):
        sample = _parse_sample(obj, line_no)
        if sample.id in seen_ids:
            raise ValidationError(f"line {line_no}: duplicate id '{sample.id}'")
        seen_ids.add(sample.id)
        samples.append(sample)
    split = DatasetSplit(samples=tuple(samples), split_name=split_name)
    expected = _expected_split_size(path, split_name, Path(manifest) if manifest else None)
    if expected is not None and expected != len(split):
        raise ValidationError(
            f"{path}: manifest declares {expected} samples for split '{split_name}', found {len(split)}"
        )
    return split


def write_inli(split: DatasetSplit, path: str | Path) -> Path:
    """Serialize a split back to JSONL; inverse of ``load_inli``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for sample in split:
            record = {field: getattr(sample, field) for field in SAMPLE_FIELDS}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


def to_rte_instances(split: DatasetSplit) -> list[RteInstance]:
    """Expand each sample into four labelled premise/hypothesis instances.

    The two entailment slots keep the entailment label; neutral and
    contradiction become non-entailment.
    """
    instances = []
    for sample in split:
        for field in HYPOTHESIS_FIELDS:
            origin = ORIGIN_BY_FIELD[field]
            gold = "entailment" if origin in ENTAILMENT_ORIGINS else "non-entailment"
            instances.append(
                RteInstance(
                    premise=sample.premise,
                    hypothesis=sample.hypothesis(field),
                    gold=gold,
                    origin=origin,
                )
            )
    return instances


def to_eis_pairs_from_inli(split: DatasetSplit, seed: int = 0) -> list[EisPair]:
    """Build premise-vs-hypothesis implicitness pairs from a split.

    Every sample contributes one pair per hypothesis slot, with the premise as
    the more implicit side. Which side the premise lands on is randomized under
    ``seed`` so that position carries no signal; premises in this data are also
    systematically longer, which would otherwise leak through a fixed layout.
    """
    rng = random.Random(seed)
    pairs = []
    for sample in split:
        for field in HYPOTHESIS_FIELDS:
            hypothesis = sample.hypothesis(field)
            if hypothesis == sample.premise:
                raise ValidationError(
                    f"sample '{sample.id}': hypothesis '{field}' equals the premise"
                )
            if rng.random() < 0.5:
                pairs.append(EisPair(s1=sample.premise, s2=hypothesis, gold_more_implicit=1))
            else:
                pairs.append(EisPair(s1=hypothesis, s2=sample.premise, gold_more_implicit=2))
    return pairs


def load_pairwise(path: str | Path, seed: int = 0) -> list[EisPair]:
    """Load implicit/explicit sentence pairs, randomizing sides under ``seed``."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"pairwise file not found: {path}")
    rng = random.Random(seed)
    pairs = []
    for line_no, obj in _iter_jsonl(path):
        if not isinstance(obj, dict):
            raise SchemaError(f"line {line_no}: expected a JSON object")
        for field in ("implicit_sentence", "explicit_sentence"):
            if field not in obj:
                raise SchemaError(f"line {line_no}: missing field '{field}'")
            if not isinstance(obj[field], str):
                raise SchemaError(f"line {line_no}: field '{field}' must be a string")
            if not obj[field].strip():
                raise ValidationError(f"line {line_no}: field '{field}' is empty")
        implicit = obj["implicit_sentence"]
        explicit = obj["explicit_sentence"]
        if implicit == explicit:
            raise ValidationError(f"line {line_no}: the two sentences are identical")
        if rng.random() < 0.5:
            pairs.append(EisPair(s1=implicit, s2=explicit, gold_more_implicit=1))
        else:
            pairs.append(EisPair(s1=explicit, s2=implicit, gold_more_implicit=2))
    return pairs


def batch_iter(split: DatasetSplit | Sequence[InliSample], batch_size: int, epoch_seed: int) -> Iterator[Batch]:
    """Yield shuffled batches covering the split exactly once.

    The shuffle is a deterministic function of ``epoch_seed``. The final batch
    may be smaller; it is kept rather than dropped so an epoch always visits
    every sample.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    samples = tuple(split)
    if not samples:
        raise DataError("cannot batch an empty split")
    order = list(range(len(samples)))
    random.Random(epoch_seed).shuffle(order)
    for batch_index, start in enumerate(range(0, len(order), batch_size)):
        chosen = order[start : start + batch_size]
        yield Batch(samples=tuple(samples[i] for i in chosen), index=batch_index)
