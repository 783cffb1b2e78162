"""Realtime typing session engine.

Streams touch events through the pipeline, shows live intermediate letters,
decodes on Space (k = 5), serves ranked suggestions, applies the two-mode
Backspace, and instruments per-commit latency. Pure state machine: transport
(WebSocket) lives in server.py, replay drives it directly.
"""
from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field

from .decode import DecodeInput, DecoderRegistry, decode
from .layout import KeyLayout
from .metrics import wer as word_error_rate
from .pipeline import (HandStateCloud, PipelineConfig, RawTouchEvent,
                       StreamError, ThreadTracker, resolve_word)

SUGGESTION_K = 5  # Top-1 commits; ranks 2-5 plus the literal become suggestions


class SessionError(ValueError):
    pass


@dataclass
class LatencyRecord:
    decode_ms: float
    outbound_ms: float = 0.0
    inbound_ms: float = 0.0
    end_to_end_ms: float = 0.0

    def to_dict(self) -> dict:
        return {"decode_ms": self.decode_ms, "outbound_ms": self.outbound_ms,
                "inbound_ms": self.inbound_ms, "end_to_end_ms": self.end_to_end_ms}


@dataclass
class Suggestion:
    rank: int
    word: str
    literal: bool = False


class Session:
    def __init__(self, registry: DecoderRegistry, backend_id: str,
                 layout: KeyLayout, cfg: PipelineConfig | None = None,
                 phrases: list[str] | None = None):
        registry.get(backend_id)  # validates the backend id
        self.id = uuid.uuid4().hex
        self.registry = registry
        self.backend_id = backend_id
        self.layout = layout
        self.cfg = cfg or PipelineConfig()
        self.phrases = list(phrases) if phrases else []
        self.phrase_idx = 0

        self.cloud = HandStateCloud.from_config(self.cfg)
        self._word_cloud_snapshot = self.cloud.copy()
        self.tracker = ThreadTracker(self.cfg)
        self.committed: list[str] = []
        self.suggestions: list[Suggestion] = []
        self.suggestions_active = False
        self.latencies: list[LatencyRecord] = []
        self.corrected_words = 0
        self.corrections = 0
        self.start_mark = time.perf_counter()

    # -- helpers ---------------------------------------------------------

    @property
    def committed_text(self) -> str:
        return " ".join(self.committed)

    @property
    def target_phrase(self) -> str | None:
        if self.phrase_idx < len(self.phrases):
            return self.phrases[self.phrase_idx]
        return None

    def _resolve(self, mutate: bool = False):
        cloud = self.cloud if mutate else self._word_cloud_snapshot.copy()
        return resolve_word(self.tracker.closed, self.layout, self.cfg, cloud)

    def _new_word(self):
        self.tracker = ThreadTracker(self.cfg)
        self._word_cloud_snapshot = self.cloud.copy()

    def _intermediate_msg(self) -> dict:
        out = self._resolve()
        selected = {tid for tid, _, _ in out.representatives}
        marks = []
        for th in self.tracker.closed:
            marks.append({"pos": {"x": th.x_end.x, "y": th.x_end.y},
                          "intent": th.id in selected})
        return {"kind": "intermediate", "letters": out.letters, "marks": marks}

    # -- operations ------------------------------------------------------

    def push_touch(self, e: RawTouchEvent) -> list[dict]:
        self.suggestions_active = False
        if e.kind == "down":
            control = self.layout.control_key_at(e.pos)
            if control == "space":
                return self.commit_word()
            if control == "backspace":
                return self.backspace()
            if control == "enter":
                return self.submit_phrase()
        try:
            self.tracker.ingest(e)
        except StreamError as exc:
            return [{"kind": "error", "code": "stream", "msg": str(exc)}]
        return [self._intermediate_msg()]

    def commit_word(self) -> list[dict]:
        out = self._resolve(mutate=True)  # advances the session cloud
        if not out.letters:
            self._word_cloud_snapshot = self.cloud.copy()
            return [{"kind": "ack", "msg": "nothing to commit"}]
        t0 = time.perf_counter()
        result = decode(DecodeInput(out.letters, [p for _, p, _ in out.representatives]
                                    if self.backend_id == "bayes" else None),
                        self.backend_id, self.registry)
        top1 = result.top1 or out.letters
        self.committed.append(top1)
        self.suggestions = []
        for i, cand in enumerate(result.ranked[1:], start=2):
            self.suggestions.append(Suggestion(i, cand.word, cand.literal))
        if not any(s.literal for s in self.suggestions) and result.ranked \
                and not result.ranked[0].literal:
            self.suggestions.append(Suggestion(len(self.suggestions) + 2,
                                               out.letters, literal=True))
        self.suggestions_active = True
        rec = LatencyRecord(decode_ms=result.latency_ms or 0.0)
        rec.end_to_end_ms = max((time.perf_counter() - t0) * 1000.0, rec.decode_ms)
        self.latencies.append(rec)
        self._new_word()
        return [{
            "kind": "commit", "word": top1,
            "suggestions": [{"rank": s.rank, "word": s.word, "literal": s.literal}
                            for s in self.suggestions],
            "latency": rec.to_dict(),
            "degraded": result.degraded,
        }]

    def select_suggestion(self, rank: int) -> list[dict]:
        if not self.suggestions_active:
            return [{"kind": "error", "code": "stale",
                     "msg": "suggestions are no longer active"}]
        match = [s for s in self.suggestions if s.rank == rank]
        if not match or not self.committed:
            return [{"kind": "error", "code": "bad_rank", "msg": f"no rank {rank}"}]
        self.committed[-1] = match[0].word
        self.suggestions_active = False
        return [{"kind": "replace", "word": match[0].word}]

    def backspace(self) -> list[dict]:
        self.suggestions_active = False
        if self.tracker.closed or self.tracker.open_threads:
            # mid-word: drop the letters and roll the cloud back to word start
            self.cloud = self._word_cloud_snapshot.copy()
            self._new_word()
            return [{"kind": "intermediate", "letters": "", "marks": []}]
        if self.committed:
            self.committed.pop()
            self.corrected_words += 1
            self.corrections += 1
            return [{"kind": "backspace", "removed": True}]
        return [{"kind": "ack", "msg": "nothing to delete"}]

    def submit_phrase(self) -> list[dict]:
        target = self.target_phrase
        if target is None:
            return [{"kind": "error", "code": "no_phrase",
                     "msg": "no target phrase configured"}]
        transcribed = self.committed_text
        minutes = max((time.perf_counter() - self.start_mark) / 60.0, 1e-9)
        speed = len(transcribed) / (5.0 * minutes)
        rate = word_error_rate(transcribed.split() if transcribed else [],
                               target.split())
        committed_n = len(self.committed) + self.corrected_words
        cer = self.corrected_words / committed_n if committed_n else 0.0
        msg = {
            "kind": "phrase_result", "target": target, "transcribed": transcribed,
            "wpm": speed, "wer": rate, "cer": cer,
            "latencies": [r.to_dict() for r in self.latencies],
            "done": self.phrase_idx + 1 >= len(self.phrases),
        }
        self.phrase_idx += 1
        self.committed = []
        self.latencies = []
        self.corrected_words = 0
        self.corrections = 0
        self.suggestions_active = False
        self._new_word()
        self.start_mark = time.perf_counter()
        if self.target_phrase is not None:
            return [msg, {"kind": "phrase", "text": self.target_phrase}]
        return [msg]

    # -- message protocol --------------------------------------------------

    def handle(self, msg: dict) -> list[dict]:
        kind = msg.get("kind")
        if kind == "touch":
            e = msg["e"]
            from .pipeline import event_from_json
            return self.push_touch(event_from_json(e))
        if kind == "space":
            return self.commit_word()
        if kind == "backspace":
            return self.backspace()
        if kind == "enter":
            return self.submit_phrase()
        if kind == "suggest":
            return self.select_suggestion(int(msg["rank"]))
        return [{"kind": "error", "code": "bad_message", "msg": f"unknown kind {kind!r}"}]


def open_session(registry: DecoderRegistry, backend_id: str, layout: KeyLayout,
                 cfg: PipelineConfig | None = None,
                 phrases: list[str] | None = None) -> Session:
    return Session(registry, backend_id, layout, cfg, phrases)


def replay_events(session: Session, events) -> list[dict]:
    """Feed a recorded touch log through a session; returns all emissions."""
    emissions = []
    for e in events:
        emissions.extend(session.push_touch(e))
    return emissions
