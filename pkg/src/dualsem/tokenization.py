"""Whitespace tokenizer with the special and view tokens the encoders expect."""
from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from pathlib import Path

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"
SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN)

# The cross-encoder appends one of these after the separator to select a view.
# They are reserved up front so their ids stay stable no matter the corpus.
VIEW_WORDS = ("explicit", "implicit")

_RESERVED = SPECIAL_TOKENS + VIEW_WORDS


class WhitespaceTokenizer:
    """Maps whitespace-delimited tokens to integer ids.

    Ids 0-3 are the special tokens, next come the two view words, then the
    corpus vocabulary in sorted order, so building twice from the same corpus
    yields identical ids.
    """

    def __init__(self, tokens: Sequence[str]):
        tokens = tuple(tokens)
        if tokens[: len(_RESERVED)] != _RESERVED:
            raise ValueError(
                f"vocabulary must start with the reserved tokens {_RESERVED}"
            )
        if len(set(tokens)) != len(tokens):
            raise ValueError("vocabulary contains duplicate tokens")
        self._tokens = tokens
        self._ids = {tok: i for i, tok in enumerate(tokens)}

    @classmethod
    def build(cls, texts: Iterable[str]) -> "WhitespaceTokenizer":
        seen: set[str] = set()
        for text in texts:
            seen.update(text.split())
        return cls(_RESERVED + tuple(sorted(seen - set(_RESERVED))))

    def __len__(self) -> int:
        return len(self._tokens)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WhitespaceTokenizer) and self._tokens == other._tokens

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    @property
    def pad_id(self) -> int:
        return self._ids[PAD_TOKEN]

    @property
    def unk_id(self) -> int:
        return self._ids[UNK_TOKEN]

    @property
    def cls_id(self) -> int:
        return self._ids[CLS_TOKEN]

    @property
    def sep_id(self) -> int:
        return self._ids[SEP_TOKEN]

    def token_id(self, token: str) -> int:
        return self._ids.get(token, self.unk_id)

    def encode_words(self, text: str) -> list[int]:
        """Ids for the whitespace tokens of ``text``, without special tokens."""
        return [self.token_id(tok) for tok in text.split()]

    def view_suffix_ids(self, view: str) -> list[int]:
        """Ids appended after the separator to condition on ``view``."""
        if view not in VIEW_WORDS:
            raise ValueError(f"unknown view {view!r}; expected one of {VIEW_WORDS}")
        return [self._ids[view]]

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(list(self._tokens), indent=0) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: str | Path) -> "WhitespaceTokenizer":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))
