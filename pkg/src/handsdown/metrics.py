"""Quantitative measures: Top-k accuracy, AvgED, WPM, WER, CER, intent ratio,
time allocation, and the inter-onset interval study with bootstrap CIs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .noise import levenshtein


def length_bucket(word: str) -> str:
    L = len(word)
    return "short" if L <= 7 else ("mid" if L <= 14 else "long")


BUCKETS = ("short", "mid", "long")


@dataclass
class TrialRecord:
    gold: str
    ranked: list[str]
    realized_ed: int | None = None

    @property
    def bucket(self) -> str:
        return length_bucket(self.gold)


@dataclass
class EvalReport:
    n_trials: int
    topk: dict[int, float]
    avg_ed: float
    by_bucket: dict[str, dict[int, float]]
    by_bucket_n: dict[str, int]
    by_ed: dict[int, dict[int, float]]
    by_ed_n: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "topk": {str(k): v for k, v in self.topk.items()},
            "avg_ed": self.avg_ed,
            "by_bucket": {b: {str(k): v for k, v in d.items()}
                          for b, d in self.by_bucket.items()},
            "by_bucket_n": self.by_bucket_n,
            "by_ed": {str(e): {str(k): v for k, v in d.items()}
                      for e, d in self.by_ed.items()},
            "by_ed_n": {str(e): n for e, n in self.by_ed_n.items()},
        }


def topk_report(trials: list[TrialRecord], ks=(1, 2, 3, 5)) -> EvalReport:
    """EM@k plus AvgED of Top-1 outputs, with length-bucket and realized-ED
    breakdowns."""
    if not trials:
        raise ValueError("no trials")

    def em(sub: list[TrialRecord]) -> dict[int, float]:
        return {k: sum(t.gold in t.ranked[:k] for t in sub) / len(sub) for k in ks}

    topk = em(trials)
    avg_ed = float(np.mean([levenshtein(t.ranked[0], t.gold) if t.ranked else len(t.gold)
                            for t in trials]))
    by_bucket, by_bucket_n = {}, {}
    for b in BUCKETS:
        sub = [t for t in trials if t.bucket == b]
        if sub:
            by_bucket[b] = em(sub)
            by_bucket_n[b] = len(sub)
    by_ed, by_ed_n = {}, {}
    eds = sorted({t.realized_ed for t in trials if t.realized_ed is not None})
    for e in eds:
        sub = [t for t in trials if t.realized_ed == e]
        by_ed[e] = em(sub)
        by_ed_n[e] = len(sub)
    return EvalReport(len(trials), topk, avg_ed, by_bucket, by_bucket_n, by_ed, by_ed_n)


def wpm(transcribed_chars: int, minutes: float) -> float:
    """Words per minute: |S| / (5 * T)."""
    if minutes <= 0:
        raise ValueError("minutes must be positive")
    return transcribed_chars / (5.0 * minutes)


def word_msd(a: list[str], b: list[str]) -> int:
    """Unit-cost minimum string distance at the word level."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, wa in enumerate(a, 1):
        cur = [i]
        for j, wb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (wa != wb)))
        prev = cur
    return prev[-1]


def wer(transcribed: list[str], presented: list[str]) -> float:
    if not presented:
        raise ValueError("presented sentence is empty")
    return word_msd(transcribed, presented) / len(presented)


def correction_stats(corrected_words: int, committed_words: int,
                     corrections: int, minutes: float) -> tuple[float, float]:
    """(CER, corrections per minute). CER = corrected / committed words."""
    if minutes <= 0:
        raise ValueError("minutes must be positive")
    cer = corrected_words / committed_words if committed_words else 0.0
    return cer, corrections / minutes


def intent_ratio(intended_threads: int, total_threads: int,
                 intended_events: int, total_events: int) -> float:
    """Equal-weight average of the intended thread and event fractions."""
    if total_threads <= 0 or total_events <= 0:
        raise ValueError("totals must be positive")
    if not (0 <= intended_threads <= total_threads
            and 0 <= intended_events <= total_events):
        raise ValueError("intended counts must not exceed totals")
    return 0.5 * intended_threads / total_threads + 0.5 * intended_events / total_events


def time_allocation(word_spans: list[tuple[float, float]],
                    session_span: tuple[float, float]) -> tuple[float, float]:
    """(within-word, inter-word) time proportions; they sum to 1."""
    t0, t1 = session_span
    total = t1 - t0
    if total <= 0:
        raise ValueError("empty session span")
    if len(word_spans) <= 1:  # single-word sessions count as all within-word
        return 1.0, 0.0
    within = sum(min(e, t1) - max(s, t0) for s, e in word_spans if e > s)
    within = min(within, total)
    frac = within / total
    return frac, 1.0 - frac


@dataclass
class IntervalStudyResult:
    fraction: float
    per_user: dict[str, float]
    ci_low: float
    ci_high: float
    median_gap_ms: float
    n_gaps: int


def interval_study(onsets_by_user: dict[str, list[float]], threshold_ms: float = 100.0,
                   bootstrap_reps: int = 10_000, seed: int = 0,
                   jitter_ms: float = 0.0) -> IntervalStudyResult:
    """Fraction of adjacent intentional inter-onset gaps <= threshold, pooled
    over users, with a user-stratified percentile bootstrap CI."""
    thr = threshold_ms + jitter_ms
    gaps_by_user = {}
    for user, onsets in onsets_by_user.items():
        ts = sorted(onsets)
        gaps = [b - a for a, b in zip(ts, ts[1:])]
        if gaps:
            gaps_by_user[user] = gaps
    if not gaps_by_user:
        raise ValueError("no intentional contacts")
    all_gaps = [g for gs in gaps_by_user.values() for g in gs]
    fraction = sum(g <= thr for g in all_gaps) / len(all_gaps)
    per_user = {u: sum(g <= thr for g in gs) / len(gs)
                for u, gs in gaps_by_user.items()}

    users = sorted(gaps_by_user)
    hits = np.array([sum(g <= thr for g in gaps_by_user[u]) for u in users], dtype=float)
    totals = np.array([len(gaps_by_user[u]) for u in users], dtype=float)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(users), size=(bootstrap_reps, len(users)))
    stats = hits[idx].sum(axis=1) / totals[idx].sum(axis=1)
    ci_low, ci_high = np.percentile(stats, [2.5, 97.5])
    return IntervalStudyResult(fraction, per_user, float(ci_low), float(ci_high),
                               float(np.median(all_gaps)), len(all_gaps))
