"""Candidate-word ranking backends for noisy letter sequences.

Three interchangeable backends: a letter-only n-gram decoder (LM prior minus
an edit-distance penalty), a touch-location informed Bayesian decoder
(bivariate Gaussian spatial likelihood aligned to candidate letters, times the
LM prior), and a client for a remote neural decoder with graceful fallback.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .layout import KeyLayout, Point, LETTERS
from .lexicon import Lexicon, CharNgramLM


class DecodeError(ValueError):
    pass


@dataclass
class DecodeInput:
    letters: str
    touches: list[Point] | None = None

    def __post_init__(self):
        if self.touches is not None and len(self.touches) != len(self.letters):
            raise DecodeError("touch count must match letter count")


@dataclass
class Candidate:
    word: str
    score: float
    source: str
    literal: bool = False


@dataclass
class DecodeResult:
    ranked: list[Candidate]
    k: int
    degraded: bool = False
    latency_ms: float | None = None

    @property
    def top1(self) -> str | None:
        return self.ranked[0].word if self.ranked else None

    def words(self) -> list[str]:
        return [c.word for c in self.ranked]


@dataclass
class NgramDecoderConfig:
    max_ed: int = 4
    alpha_tradeoff: float = 4.0
    k: int = 5


@dataclass
class SpatialModel:
    layout: KeyLayout
    sigma_pitch: float = 0.4          # isotropic sigma as fraction of key pitch
    gap_logpenalty: float = math.log(0.01)
    cov: np.ndarray | None = None     # optional full 2x2 covariance override

    def __post_init__(self):
        if self.cov is None:
            s = self.sigma_pitch * self.layout.key_pitch
            self.cov = np.array([[s * s, 0.0], [0.0, s * s]])
        self.cov = np.asarray(self.cov, dtype=float)
        if not np.allclose(self.cov, self.cov.T) or np.linalg.det(self.cov) <= 0:
            raise DecodeError("covariance must be symmetric positive-definite")
        if not self.gap_logpenalty < 0:
            raise DecodeError("gap penalty must be negative in log space")
        self._inv = np.linalg.inv(self.cov)
        self._lognorm = -math.log(2 * math.pi) - 0.5 * math.log(np.linalg.det(self.cov))
        self._centers = np.array([[self.layout[c].center.x, self.layout[c].center.y]
                                  for c in LETTERS])

    def letter_logpdfs(self, p: Point) -> np.ndarray:
        """Log-density of one touch under every letter's Gaussian, shape (26,)."""
        d = np.array([p.x, p.y]) - self._centers
        quad = np.einsum("ki,ij,kj->k", d, self._inv, d)
        return self._lognorm - 0.5 * quad

    def logpdf(self, p: Point, letter: str) -> float:
        return float(self.letter_logpdfs(p)[ord(letter) - 97])


def _encode(word: str) -> np.ndarray:
    return np.frombuffer(word.encode("ascii"), dtype=np.uint8) - 97


def _ed_to_block(u_codes: np.ndarray, block: np.ndarray) -> np.ndarray:
    """Exact edit distances from u to every row of block (N, L), vectorized
    over candidates. Candidates are pre-filtered by length so the DP stays
    within the useful band."""
    n_cand, L = block.shape
    dp = np.broadcast_to(np.arange(L + 1), (n_cand, L + 1)).astype(np.int32).copy()
    for i, cu in enumerate(u_codes, 1):
        ndp = np.empty_like(dp)
        ndp[:, 0] = i
        best = np.minimum(dp[:, :-1] + (block != cu), dp[:, 1:] + 1)
        for j in range(1, L + 1):
            ndp[:, j] = np.minimum(best[:, j - 1], ndp[:, j - 1] + 1)
        dp = ndp
    return dp[:, -1]


class LexiconIndex:
    """Length-grouped code arrays plus cached LM log-probs for a lexicon."""

    def __init__(self, lexicon: Lexicon, lm: CharNgramLM):
        self.lexicon = lexicon
        self.lm = lm
        self.blocks: dict[int, tuple[list[str], np.ndarray]] = {}
        for L in lexicon.lengths:
            words = lexicon.by_length(L)
            self.blocks[L] = (words, np.stack([_encode(w) for w in words]))
        self.logprobs = {w: lm.logprob(w) for w in lexicon.words}


def candidate_set(u: str, index: LexiconIndex, max_ed: int = 4) -> dict[str, int]:
    """All lexicon words with ED(u, w) <= max_ed, mapped to their distance."""
    if not u:
        raise DecodeError("empty input sequence")
    u_codes = _encode(u)
    out: dict[str, int] = {}
    for L in range(max(1, len(u) - max_ed), len(u) + max_ed + 1):
        if L not in index.blocks:
            continue
        words, block = index.blocks[L]
        eds = _ed_to_block(u_codes, block)
        for i in np.flatnonzero(eds <= max_ed):
            out[words[i]] = int(eds[i])
    return out


def _finish(scored: list[tuple[float, str]], u: str, k: int, source: str,
            include_literal: bool = True) -> list[Candidate]:
    """Sort (score desc, word asc), truncate to k, dedup, append the literal.

    Scores are quantized to 1e-9 for the ordering so that analytically tied
    candidates (equal up to float rounding) fall back to lexicographic order
    deterministically."""
    scored.sort(key=lambda t: (-round(t[0], 9), t[1]))
    ranked = []
    seen = set()
    for score, word in scored:
        if word in seen:
            continue
        seen.add(word)
        ranked.append(Candidate(word, score, source))
        if len(ranked) == k:
            break
    if include_literal:
        if u in seen:
            for c in ranked:
                if c.word == u:
                    c.literal = True
        else:
            floor = ranked[-1].score - 1.0 if ranked else 0.0
            ranked.append(Candidate(u, floor, source, literal=True))
    return ranked


class NgramDecoder:
    """Letter-only decoder: score(w) = log P(w) - alpha * ED(u, w) over C(u)."""

    backend_id = "ngram"

    def __init__(self, index: LexiconIndex, cfg: NgramDecoderConfig | None = None):
        self.index = index
        self.cfg = cfg or NgramDecoderConfig()

    def decode(self, inp: DecodeInput) -> DecodeResult:
        cfg = self.cfg
        cands = candidate_set(inp.letters, self.index, cfg.max_ed)
        scored = [(self.index.logprobs[w] - cfg.alpha_tradeoff * ed, w)
                  for w, ed in cands.items()]
        ranked = _finish(scored, inp.letters, cfg.k, self.backend_id)
        return DecodeResult(ranked, cfg.k)


def _spatial_loglik_block(lp: np.ndarray, block: np.ndarray, gap: float) -> np.ndarray:
    """Max-alignment log P(S|w) for all candidates in block (N, m).

    lp[j] holds the 26 letter log-densities of touch j; matches contribute
    those densities, unmatched touches/letters contribute the gap penalty.
    """
    n_cand, m = block.shape
    n = lp.shape[0]
    dp = np.broadcast_to(np.arange(m + 1) * gap, (n_cand, m + 1)).copy()
    for j in range(1, n + 1):
        cost = lp[j - 1][block]  # (N, m)
        ndp = np.empty_like(dp)
        ndp[:, 0] = j * gap
        best = np.maximum(dp[:, :-1] + cost, dp[:, 1:] + gap)
        for i in range(1, m + 1):
            ndp[:, i] = np.maximum(best[:, i - 1], ndp[:, i - 1] + gap)
        dp = ndp
    return dp[:, -1]


def spatial_loglik(touches: list[Point], word: str, sm: SpatialModel) -> float:
    """Single-pair reference path for the alignment likelihood."""
    lp = np.stack([sm.letter_logpdfs(p) for p in touches])
    return float(_spatial_loglik_block(lp, _encode(word)[None, :], sm.gap_logpenalty)[0])


class BayesianDecoder:
    """Touch-location informed decoder: log P(S|w) + log P(w) over C(u)."""

    backend_id = "bayes"

    def __init__(self, index: LexiconIndex, spatial: SpatialModel,
                 cfg: NgramDecoderConfig | None = None):
        self.index = index
        self.spatial = spatial
        self.cfg = cfg or NgramDecoderConfig()

    def decode(self, inp: DecodeInput) -> DecodeResult:
        if inp.touches is None:
            raise DecodeError("bayesian backend requires touch locations")
        cfg = self.cfg
        cands = candidate_set(inp.letters, self.index, cfg.max_ed)
        lp = np.stack([self.spatial.letter_logpdfs(p) for p in inp.touches])
        by_len: dict[int, list[str]] = {}
        for w in cands:
            by_len.setdefault(len(w), []).append(w)
        scored = []
        for L, words in by_len.items():
            block = np.stack([_encode(w) for w in words])
            logliks = _spatial_loglik_block(lp, block, self.spatial.gap_logpenalty)
            for w, ll in zip(words, logliks):
                scored.append((float(ll) + self.index.logprobs[w], w))
        ranked = _finish(scored, inp.letters, cfg.k, self.backend_id)
        return DecodeResult(ranked, cfg.k)


@dataclass
class RemoteDecoderConfig:
    endpoint: str
    timeout_ms: float = 2000.0
    fallback_backend: str = "ngram"

    def __post_init__(self):
        if not self.timeout_ms > 0:
            raise DecodeError("timeout must be positive")


class RemoteDecoder:
    """Client for a remote neural decoder; uploads only the letter sequence.

    Any transport or protocol failure falls back to the configured local
    backend and tags the result degraded; it never raises to the caller.
    """

    backend_id = "remote"

    def __init__(self, cfg: RemoteDecoderConfig, registry: "DecoderRegistry",
                 k: int = 5):
        self.cfg = cfg
        self.registry = registry
        self.k = k

    def decode(self, inp: DecodeInput) -> DecodeResult:
        import requests

        try:
            resp = requests.post(self.cfg.endpoint,
                                 json={"noisy": inp.letters, "k": self.k},
                                 timeout=self.cfg.timeout_ms / 1000.0)
            resp.raise_for_status()
            payload = resp.json()
            scored = [(float(c["score"]), str(c["word"]))
                      for c in payload["candidates"]]
        except Exception:
            fallback = self.registry.get(self.cfg.fallback_backend)
            result = fallback.decode(inp)
            return DecodeResult(result.ranked, result.k, degraded=True)
        ranked = _finish(scored, inp.letters, self.k, self.backend_id)
        return DecodeResult(ranked, self.k)


class DecoderRegistry:
    def __init__(self):
        self._backends = {}

    def register(self, decoder) -> None:
        self._backends[decoder.backend_id] = decoder

    def get(self, backend_id: str):
        if backend_id not in self._backends:
            raise DecodeError(f"unknown backend {backend_id!r}")
        return self._backends[backend_id]

    def backends(self) -> list[str]:
        return sorted(self._backends)


def decode(inp: DecodeInput, backend_id: str, registry: DecoderRegistry) -> DecodeResult:
    """Dispatch to a registered backend and record wall-clock latency."""
    backend = registry.get(backend_id)
    t0 = time.perf_counter()
    result = backend.decode(inp)
    result.latency_ms = (time.perf_counter() - t0) * 1000.0
    return result


# convenience wrappers matching the functional surface

def ngram_decode(inp: DecodeInput, index: LexiconIndex,
                 cfg: NgramDecoderConfig | None = None) -> DecodeResult:
    return NgramDecoder(index, cfg).decode(inp)


def bayesian_decode(inp: DecodeInput, index: LexiconIndex, spatial: SpatialModel,
                    cfg: NgramDecoderConfig | None = None) -> DecodeResult:
    return BayesianDecoder(index, spatial, cfg).decode(inp)
