"""Word inventory and character n-gram language model (log P(w) prior).

The LM is trained over the lexicon's words, padded with start markers and one
end marker, with add-k smoothing. Vocabulary for smoothing is the 26 letters
plus the end marker (V = 27): start markers are never predicted.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

LETTERS = "abcdefghijklmnopqrstuvwxyz"
START = "^"
END = "$"
V = 27  # 26 letters + end marker


class LexiconError(ValueError):
    pass


@dataclass
class Lexicon:
    words: list[str]
    dropped: int = 0
    _index: set = field(default_factory=set, repr=False)
    _by_length: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = set(self.words)
        self._by_length = {}
        for w in self.words:
            self._by_length.setdefault(len(w), []).append(w)

    def __contains__(self, w: str) -> bool:
        return w in self._index

    def __len__(self) -> int:
        return len(self.words)

    def by_length(self, n: int) -> list[str]:
        return self._by_length.get(n, [])

    @property
    def lengths(self) -> list[int]:
        return sorted(self._by_length)


def load_lexicon(source) -> Lexicon:
    """Newline-delimited word list, frequency-rank ordered. Lowercases,
    dedups (first occurrence wins), drops entries with characters outside a-z."""
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source) as f:
            lines = f.read().splitlines()
    seen = set()
    words = []
    dropped = 0
    for line in lines:
        w = line.strip().lower()
        if not w:
            continue
        if any(c not in LETTERS for c in w):
            dropped += 1
            continue
        if w in seen:
            continue
        seen.add(w)
        words.append(w)
    if not words:
        raise LexiconError("empty lexicon")
    return Lexicon(words, dropped)


def default_lexicon() -> Lexicon:
    path = resources.files("handsdown.data") / "lexicon_10k.txt"
    with resources.as_file(path) as p:
        return load_lexicon(p)


class CharNgramLM:
    """Character n-gram model with add-k smoothing over a-z plus boundaries."""

    def __init__(self, n: int = 5, k: float = 0.01):
        if n < 2:
            raise LexiconError(f"n must be >= 2, got {n}")
        if not k > 0:
            raise LexiconError("k must be positive")
        self.n = n
        self.k = k
        self.ngram_counts: dict[str, float] = {}
        self.context_counts: dict[str, float] = {}

    def _padded(self, word: str) -> str:
        return START * (self.n - 1) + word + END

    def add_word(self, word: str, weight: float = 1.0) -> None:
        s = self._padded(word)
        for i in range(len(s) - self.n + 1):
            gram = s[i:i + self.n]
            ctx = gram[:-1]
            self.ngram_counts[gram] = self.ngram_counts.get(gram, 0.0) + weight
            self.context_counts[ctx] = self.context_counts.get(ctx, 0.0) + weight

    def cond_prob(self, context: str, c: str) -> float:
        num = self.ngram_counts.get(context + c, 0.0) + self.k
        den = self.context_counts.get(context, 0.0) + self.k * V
        return num / den

    def logprob(self, word: str) -> float:
        if not word or any(c not in LETTERS for c in word):
            raise LexiconError(f"illegal word {word!r}")
        s = self._padded(word)
        lp = 0.0
        for i in range(self.n - 1, len(s)):
            lp += math.log(self.cond_prob(s[i - self.n + 1:i], s[i]))
        return lp

    # snapshot: versioned JSON count dump, round-trip exact at JSON float precision
    def to_dict(self) -> dict:
        return {"format_version": 1, "n": self.n, "k": self.k,
                "ngram_counts": self.ngram_counts,
                "context_counts": self.context_counts}

    @classmethod
    def from_dict(cls, d: dict) -> "CharNgramLM":
        lm = cls(n=d["n"], k=d["k"])
        lm.ngram_counts = dict(d["ngram_counts"])
        lm.context_counts = dict(d["context_counts"])
        return lm

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)

    @classmethod
    def load(cls, path) -> "CharNgramLM":
        with open(path) as f:
            return cls.from_dict(json.load(f))


def train_char_ngram(lexicon: Lexicon, n: int = 5, k: float = 0.01,
                     rank_weighted: bool = False) -> CharNgramLM:
    """Train over the lexicon; optionally weight word i by 1/(i+1) (rank order)."""
    if not lexicon.words:
        raise LexiconError("empty lexicon")
    lm = CharNgramLM(n=n, k=k)
    for i, w in enumerate(lexicon.words):
        lm.add_word(w, weight=1.0 / (i + 1) if rank_weighted else 1.0)
    return lm


def lm_logprob(lm: CharNgramLM, word: str) -> float:
    return lm.logprob(word)
