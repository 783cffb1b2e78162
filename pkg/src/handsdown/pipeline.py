"""Raw touch events -> letter sequence.

Threading via a uniform spatial hash over open-thread endpoints, greedy time
clustering within the cognitive window, and travel-score selection of one
representative contact per cluster against a decaying hand-state cloud.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .layout import KeyLayout, Point, nearest_key

EMPTY_CLOUD_SCORE = 1e30  # cold start: first contact of a word must be selectable


class StreamError(ValueError):
    """Out-of-order timestamps or malformed events."""


@dataclass(frozen=True)
class RawTouchEvent:
    kind: str  # down | move | up
    t: float   # ms, monotonic within a session
    pos: Point
    session: str = ""
    word_id: int = 0
    intent: bool | None = None

    def __post_init__(self):
        if self.kind not in ("down", "move", "up"):
            raise StreamError(f"bad event kind {self.kind!r}")


@dataclass
class TouchThread:
    id: int
    t_start: float
    t_end: float
    x_start: Point
    x_end: Point
    polyline: list[Point] = field(default_factory=list)
    open: bool = True
    intent: bool | None = None

    @property
    def onset(self) -> float:
        return self.t_start


@dataclass
class TimeCluster:
    anchor_onset: float
    members: list[TouchThread] = field(default_factory=list)


@dataclass
class PipelineConfig:
    tau_c: float = 100.0       # cognitive window, ms
    kappa: int = 3             # cluster size cap; larger clusters are discarded
    h: float = 0.06            # spatial hash cell size
    r_g: float = 0.05          # association radius
    t_gap: float = 120.0       # association time gap, ms
    rho: float = 0.9           # cloud decay factor per step
    delta: float = 50.0        # cloud decay step, ms
    t_max: float = 1000.0      # cloud pruning horizon, ms
    epsilon: float = 1e-3      # weight floor in the travel score
    tie_tol: float = 0.05      # relative tie tolerance for travel scores

    def __post_init__(self):
        if self.tau_c <= 0:
            raise ValueError("tau_c must be positive")
        if self.kappa < 1:
            raise ValueError("kappa must be >= 1")
        if self.r_g > 3 * self.h:
            raise ValueError("r_g must be <= 3h for the 3x3 grid probe")


@dataclass
class HandStateCloud:
    rho: float = 0.9
    delta: float = 50.0
    t_max: float = 1000.0
    epsilon: float = 1e-3
    points: list[tuple[Point, float]] = field(default_factory=list)

    def weight(self, tau_m: float, now: float) -> float:
        return self.rho ** ((now - tau_m) / self.delta)

    @classmethod
    def from_config(cls, cfg: PipelineConfig) -> "HandStateCloud":
        return cls(rho=cfg.rho, delta=cfg.delta, t_max=cfg.t_max, epsilon=cfg.epsilon)

    def copy(self) -> "HandStateCloud":
        c = HandStateCloud(self.rho, self.delta, self.t_max, self.epsilon)
        c.points = list(self.points)
        return c


def update_cloud(cloud: HandStateCloud, contacts: list[tuple[Point, float]],
                 now: float) -> HandStateCloud:
    """Append contacts, then prune everything older than t_max (inclusive horizon)."""
    cloud.points.extend(contacts)
    cloud.points = [(p, tm) for p, tm in cloud.points if now - tm <= cloud.t_max]
    return cloud


def travel_score(candidate: tuple[Point, float], cloud: HandStateCloud) -> float:
    """Time-discounted distance of the candidate from the hand-state cloud."""
    x, t = candidate
    if not cloud.points:
        return EMPTY_CLOUD_SCORE
    best = math.inf
    for p, tau_m in cloud.points:
        w = cloud.weight(tau_m, t)
        s = x.dist(p) / max(w, cloud.epsilon)
        if s < best:
            best = s
    return best


def select_representative(cluster: TimeCluster, cloud: HandStateCloud,
                          cfg: PipelineConfig) -> TouchThread:
    """Argmax travel score; near-ties go to the most recent touch in the cluster."""
    if not cluster.members:
        raise ValueError("empty cluster")
    scored = [(travel_score((th.x_end, th.onset), cloud), th) for th in cluster.members]
    top = max(s for s, _ in scored)
    tied = [th for s, th in scored if top - s <= cfg.tie_tol * abs(top)]
    return max(tied, key=lambda th: th.onset)


def cluster_threads(threads: list[TouchThread], cfg: PipelineConfig
                    ) -> tuple[list[TimeCluster], int]:
    """Greedy onset-ordered clustering; clusters larger than kappa are discarded."""
    clusters: list[TimeCluster] = []
    for th in sorted(threads, key=lambda t: (t.onset, t.id)):
        if clusters and th.onset - clusters[-1].anchor_onset <= cfg.tau_c:
            clusters[-1].members.append(th)
        else:
            clusters.append(TimeCluster(anchor_onset=th.onset, members=[th]))
    kept = [c for c in clusters if len(c.members) <= cfg.kappa]
    return kept, len(clusters) - len(kept)


class ThreadTracker:
    """Incremental thread formation with O(1) expected association per event."""

    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        self._next_id = 0
        self.open_threads: dict[int, TouchThread] = {}
        self.closed: list[TouchThread] = []
        self.stray_drops = 0
        self._grid: dict[tuple[int, int], set[int]] = {}
        self._last_t = -math.inf

    def _cell(self, p: Point) -> tuple[int, int]:
        return (int(p.x / self.cfg.h), int(p.y / self.cfg.h))

    def _grid_add(self, tid: int, p: Point):
        self._grid.setdefault(self._cell(p), set()).add(tid)

    def _grid_remove(self, tid: int, p: Point):
        cell = self._cell(p)
        s = self._grid.get(cell)
        if s:
            s.discard(tid)
            if not s:
                del self._grid[cell]

    def _find_nearest_open(self, e: RawTouchEvent) -> TouchThread | None:
        cx, cy = self._cell(e.pos)
        best, best_d = None, math.inf
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for tid in self._grid.get((cx + dx, cy + dy), ()):
                    th = self.open_threads[tid]
                    if e.t - th.t_end > self.cfg.t_gap:
                        continue
                    d = e.pos.dist(th.x_end)
                    if d <= self.cfg.r_g and (d < best_d or (d == best_d and th.id < best.id)):
                        best, best_d = th, d
        return best

    def ingest(self, e: RawTouchEvent) -> TouchThread | None:
        """Feed one event; returns a thread when the event closes one."""
        if e.t < self._last_t:
            raise StreamError(f"out-of-order timestamp {e.t} < {self._last_t}")
        self._last_t = e.t
        if e.kind == "down":
            th = TouchThread(id=self._next_id, t_start=e.t, t_end=e.t,
                             x_start=e.pos, x_end=e.pos, intent=e.intent)
            self._next_id += 1
            self.open_threads[th.id] = th
            self._grid_add(th.id, e.pos)
            return None
        th = self._find_nearest_open(e)
        if th is None:
            self.stray_drops += 1
            return None
        self._grid_remove(th.id, th.x_end)
        if e.kind == "move":
            th.polyline.append(e.pos)
        th.x_end = e.pos
        th.t_end = e.t
        if e.kind == "up":
            th.open = False
            del self.open_threads[th.id]
            self.closed.append(th)
            return th
        self._grid_add(th.id, e.pos)
        return None


def ingest_event(state: ThreadTracker, e: RawTouchEvent) -> TouchThread | None:
    return state.ingest(e)


@dataclass
class PipelineOutput:
    letters: str
    representatives: list[tuple[int, Point, float]]  # (thread id, endpoint, onset ms)
    suppressed: list[int]
    discarded_clusters: int


def resolve_word(threads: list[TouchThread], layout: KeyLayout, cfg: PipelineConfig,
                 cloud: HandStateCloud) -> PipelineOutput:
    """Cluster closed threads, select representatives against the evolving cloud,
    and map them to letters. Mutates the given cloud (all contacts feed it)."""
    clusters, discarded = cluster_threads(threads, cfg)
    letters = []
    reps = []
    suppressed = []
    for cl in clusters:
        now = max(th.onset for th in cl.members)
        cloud.points = [(p, tm) for p, tm in cloud.points if now - tm <= cloud.t_max]
        rep = select_representative(cl, cloud, cfg)
        letters.append(nearest_key(rep.x_end, layout))
        reps.append((rep.id, rep.x_end, rep.onset))
        suppressed.extend(th.id for th in cl.members if th.id != rep.id)
        # resting fingers still shape the cloud: endpoints plus down positions
        contacts = []
        for th in cl.members:
            contacts.append((th.x_start, th.t_start))
            contacts.append((th.x_end, th.t_end))
        update_cloud(cloud, contacts, now)
    return PipelineOutput("".join(letters), reps, suppressed, discarded)


def run_pipeline(events, layout: KeyLayout, cfg: PipelineConfig | None = None,
                 cloud: HandStateCloud | None = None) -> PipelineOutput:
    """Full pass for one word: ingest -> cluster -> select -> nearest key."""
    cfg = cfg or PipelineConfig()
    cloud = cloud if cloud is not None else HandStateCloud.from_config(cfg)
    tracker = ThreadTracker(cfg)
    for e in events:
        tracker.ingest(e)
    return resolve_word(tracker.closed, layout, cfg, cloud)


# --- touch-log JSONL --------------------------------------------------------

def event_to_json(e: RawTouchEvent) -> dict:
    return {"session": e.session, "word_id": e.word_id, "kind": e.kind,
            "t": e.t, "x": e.pos.x, "y": e.pos.y, "intent": e.intent}


def event_from_json(d: dict) -> RawTouchEvent:
    return RawTouchEvent(kind=d["kind"], t=float(d["t"]),
                         pos=Point(float(d["x"]), float(d["y"])),
                         session=d.get("session", ""), word_id=int(d.get("word_id", 0)),
                         intent=d.get("intent"))


def read_touch_log(path) -> list[RawTouchEvent]:
    events = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                events.append(event_from_json(json.loads(line)))
    return events


def write_touch_log(events: list[RawTouchEvent], path) -> None:
    with open(path, "w") as f:
        for e in events:
            f.write(json.dumps(event_to_json(e)) + "\n")
