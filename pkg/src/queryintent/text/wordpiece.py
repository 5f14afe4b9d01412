"""Wordpiece vocabulary learning and greedy longest-match tokenization.

The vocabulary is learned by frequency-based pair merging (BPE-style) over a
normalized corpus. Continuation pieces carry the ``##`` prefix; a word that
cannot be fully segmented tokenizes to a single ``[UNK]``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator

UNK = "[UNK]"

# alphanumeric runs, unicode-aware (underscore excluded)
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

# words longer than this segment to [UNK] outright
MAX_WORD_CHARS = 100


def normalize_words(text: str) -> list[str]:
    """Lowercase and split on non-alphanumerics."""
    return _WORD_RE.findall(text.lower())


@dataclass(frozen=True)
class Vocab:
    """Ordered, duplicate-free piece inventory with a reserved [UNK]."""

    pieces: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for i, piece in enumerate(self.pieces):
            if piece in index:
                raise ValueError(f"duplicate piece {piece!r}")
            index[piece] = i
        if UNK not in index:
            raise ValueError(f"vocab must contain {UNK}")
        object.__setattr__(self, "_index", index)

    @property
    def size(self) -> int:
        return len(self.pieces)

    def __contains__(self, piece: str) -> bool:
        return piece in self._index

    def __len__(self) -> int:
        return len(self.pieces)

    def index(self, piece: str) -> int:
        return self._index[piece]

    def save(self, path) -> None:
        Path(path).write_text("\n".join(self.pieces) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Vocab":
        pieces = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln]
        return cls(tuple(pieces))


def _word_symbols(word: str) -> tuple[str, ...]:
    return (word[0],) + tuple("##" + ch for ch in word[1:])


def learn_vocab(corpus: Iterable[str], target_size: int, seed=None) -> Vocab:
    """Learn a wordpiece vocabulary of at most ``target_size`` pieces.

    Base inventory is [UNK] plus every observed character (bare pieces);
    continuation characters and then greedy pair merges fill the remaining
    budget in frequency order (ties broken lexicographically). ``seed`` is
    accepted for interface symmetry; learning is fully deterministic.
    """
    del seed
    word_freq = Counter()
    for doc in corpus:
        word_freq.update(normalize_words(doc))
    if not word_freq:
        return Vocab((UNK,))

    alphabet = sorted({ch for word in word_freq for ch in word})
    if target_size < len(alphabet) + 1:
        raise ValueError(
            f"target below alphabet size: need >= {len(alphabet) + 1}, got {target_size}"
        )

    pieces: list[str] = [UNK] + alphabet

    # continuation characters by corpus frequency, while budget remains
    cont_freq = Counter()
    for word, freq in word_freq.items():
        for ch in word[1:]:
            cont_freq["##" + ch] += freq
    for sym, _ in sorted(cont_freq.items(), key=lambda kv: (-kv[1], kv[0])):
        if len(pieces) >= target_size:
            break
        pieces.append(sym)

    known = set(pieces)
    words = {w: _word_symbols(w) for w in word_freq}

    def merged_piece(left: str, right: str) -> str:
        return left + right[2:] if right.startswith("##") else left + right

    while len(pieces) < target_size:
        pair_freq = Counter()
        for word, syms in words.items():
            freq = word_freq[word]
            for a, b in zip(syms, syms[1:]):
                pair_freq[(a, b)] += freq
        candidates = [(f, p) for p, f in pair_freq.items() if f >= 2]
        if not candidates:
            break
        best_freq = max(f for f, _ in candidates)
        pair = min(p for f, p in candidates if f == best_freq)
        new_sym = merged_piece(*pair)
        for word, syms in words.items():
            if pair[0] not in syms:
                continue
            out = []
            i = 0
            while i < len(syms):
                if i + 1 < len(syms) and (syms[i], syms[i + 1]) == pair:
                    out.append(new_sym)
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            words[word] = tuple(out)
        if new_sym not in known:
            pieces.append(new_sym)
            known.add(new_sym)
    return Vocab(tuple(pieces))


def _segment_word(word: str, vocab: Vocab) -> list[str]:
    if len(word) > MAX_WORD_CHARS:
        return [UNK]
    out: list[str] = []
    start = 0
    while start < len(word):
        end = len(word)
        piece = None
        while end > start:
            sub = word[start:end]
            if start > 0:
                sub = "##" + sub
            if sub in vocab:
                piece = sub
                break
            end -= 1
        if piece is None:
            return [UNK]
        out.append(piece)
        start = end
    return out


def tokenize(text: str, vocab: Vocab) -> list[str]:
    """Tokenize into wordpieces: normalize, then greedy longest-match per word."""
    pieces: list[str] = []
    for word in normalize_words(text):
        pieces.extend(_segment_word(word, vocab))
    return pieces


class WordpieceTokenizer(BaseEstimator):
    """Vocab-bound tokenizer; fits the learn/apply split of the pipeline.

    ``fit`` learns the vocabulary from raw text, ``transform`` maps texts to
    piece lists. An already-learned vocab can be supplied directly.
    """

    def __init__(self, target_size: int = 8000, vocab: Vocab | None = None):
        self.target_size = target_size
        self.vocab = vocab

    def fit(self, corpus: Iterable[str], y=None) -> "WordpieceTokenizer":
        self.vocab = learn_vocab(corpus, self.target_size)
        return self

    def transform(self, texts: Sequence[str]) -> list[list[str]]:
        return [self(t) for t in texts]

    def __call__(self, text: str) -> list[str]:
        if self.vocab is None:
            raise RuntimeError("tokenizer has no vocabulary; call fit or pass vocab")
        return tokenize(text, self.vocab)
