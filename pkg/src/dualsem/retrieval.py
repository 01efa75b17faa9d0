"""Flat in-memory retrieval over hypothesis sentences, queried per view.

The index stores each hypothesis' explicit-view embedding (hypotheses state
their content literally; storing the implicit view too is an opt-in flag).
A query sentence is embedded under either of its views, so one premise can
fetch literal matches through its explicit view and implied content through
its implicit view against the same fixed index side.
"""
from __future__ import annotations

import hashlib
import json
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .data import HYPOTHESIS_FIELDS, DatasetSplit
from .errors import ValidationError
from .losses import cosine

_INDEX_CHUNK = 256


@dataclass(frozen=True, eq=False)
class IndexEntry:
    """One indexed sentence with its stored embedding(s)."""

    entry_id: str
    text: str
    explicit: np.ndarray
    implicit: np.ndarray | None = None


@dataclass(frozen=True)
class Hit:
    """One ranked retrieval match."""

    rank: int
    entry_id: str
    text: str
    score: float


@dataclass(frozen=True)
class RetrievalResult:
    """Top-k matches for one query under one view, scores non-increasing."""

    query: str
    view: str
    hits: tuple[Hit, ...]


@dataclass(frozen=True, eq=False)
class DualIndex:
    """Immutable flat index; rebuilds produce a new value."""

    entries: tuple[IndexEntry, ...]
    fingerprint: str
    embedding_dim: int


def corpus_fingerprint(sentences: Sequence[tuple[str, str]]) -> str:
    """Order-sensitive hash of the canonicalized (id, text) entries."""
    canonical = json.dumps([[sid, text] for sid, text in sentences], ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def pool_hypotheses(
    split: DatasetSplit, fields: Sequence[str] | None = None
) -> list[tuple[str, str]]:
    """Retrieval pool entries from a split's hypothesis fields.

    Defaults to all four hypothesis types; pass a field subset to narrow the
    pool (e.g. the two entailment fields only).
    """
    fields = tuple(fields) if fields is not None else HYPOTHESIS_FIELDS
    unknown = sorted(set(fields) - set(HYPOTHESIS_FIELDS))
    if unknown:
        raise ValueError(f"unknown hypothesis fields {unknown}")
    return [
        (f"{sample.id}/{field}", sample.hypothesis(field))
        for sample in split
        for field in fields
    ]


def build_index(
    sentences: Sequence[tuple[str, str]],
    model,
    store_both_views: bool = False,
) -> DualIndex:
    """Encode sentences under the explicit view and freeze them into an index."""
    if len(sentences) == 0:
        raise ValidationError("cannot build an index over zero sentences")
    ids = [sid for sid, _ in sentences]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate id in index sentences")
    texts = [text for _, text in sentences]
    explicit = _encode_chunked(model, texts, "explicit")
    implicit = _encode_chunked(model, texts, "implicit") if store_both_views else [None] * len(texts)
    entries = tuple(
        IndexEntry(entry_id=sid, text=text, explicit=e, implicit=i)
        for (sid, text), e, i in zip(sentences, explicit, implicit)
    )
    return DualIndex(
        entries=entries,
        fingerprint=corpus_fingerprint(sentences),
        embedding_dim=int(entries[0].explicit.shape[0]),
    )


def _encode_chunked(model, texts: list[str], view: str):
    parts = [
        model.encode(texts[start : start + _INDEX_CHUNK], view)
        for start in range(0, len(texts), _INDEX_CHUNK)
    ]
    return np.concatenate(parts, axis=0)


def query(
    index: DualIndex,
    sentence: str,
    view: str,
    k: int,
    model,
) -> RetrievalResult:
    """Rank index entries by cosine against the query's ``view`` embedding.

    The index side is fixed; only the query-side embedding depends on the
    view. Ties keep index order; k clamps to the index size.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(index.entries) == 0:
        raise ValidationError("cannot query an empty index")
    if model.spec.embedding_dim != index.embedding_dim:
        raise ValueError(
            f"model embedding dim {model.spec.embedding_dim} does not match "
            f"index dim {index.embedding_dim}"
        )
    query_vector = model.encode([sentence], view)[0]
    scores = np.array([cosine(query_vector, entry.explicit) for entry in index.entries])
    order = np.argsort(-scores, kind="stable")[: min(k, len(index.entries))]
    hits = tuple(
        Hit(
            rank=rank,
            entry_id=index.entries[i].entry_id,
            text=index.entries[i].text,
            score=float(scores[i]),
        )
        for rank, i in enumerate(order, start=1)
    )
    return RetrievalResult(query=sentence, view=view, hits=hits)


def retrieval_result_json(result: RetrievalResult) -> dict:
    """Delimited-output shape for one query's ranked hits."""
    return {
        "query": result.query,
        "view": result.view,
        "hits": [
            {"rank": hit.rank, "text": hit.text, "score": hit.score} for hit in result.hits
        ],
    }
