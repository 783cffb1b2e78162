"""Error-channel models and ED-balanced synthetic corpus generation.

Two channels corrupt a gold word: near-key slips of the intended finger
(per-letter 2D offset GMM mapped through the soft nearest-key kernel) and
co-activation of resting fingers (smoothed categorical tables per intended
letter and row-by-hand bucket, plus local swaps). Corpora are balanced to an
approximately uniform edit-distance histogram within each length regime.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .layout import (KeyLayout, Point, LETTERS, NO_KEY, geometry_bucket,
                     all_buckets, soft_key_distribution)


def levenshtein(u: str, w: str) -> int:
    """Unit-cost insert/delete/substitute edit distance."""
    if len(u) < len(w):
        u, w = w, u
    prev = list(range(len(w) + 1))
    for i, cu in enumerate(u, 1):
        cur = [i]
        for j, cw in enumerate(w, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (cu != cw)))
        prev = cur
    return prev[-1]


def e_max(L: int) -> int:
    """Length-dependent edit-distance cap: 2 / 3 / 4 by word length."""
    if L < 1:
        raise ValueError("word length must be >= 1")
    if L <= 6:
        return 2
    if L <= 9:
        return 3
    return 4


def length_regime(L: int) -> str:
    return "short" if L <= 6 else ("mid" if L <= 9 else "long")


REGIMES = ("short", "mid", "long")


# --- offset GMM (Near channel) ----------------------------------------------

@dataclass
class GmmComponent:
    weight: float
    mean: list[float]        # offset in layout units
    cov: list[list[float]]   # 2x2, symmetric positive-definite


@dataclass
class OffsetGmm:
    per_letter: dict[str, list[GmmComponent]]
    pooled: list[GmmComponent]
    fit_report: dict[str, str] = field(default_factory=dict)

    def components(self, letter: str) -> list[GmmComponent]:
        return self.per_letter.get(letter, self.pooled)

    def sample(self, letter: str, rng: np.random.Generator) -> tuple[float, float]:
        comps = self.components(letter)
        weights = np.array([c.weight for c in comps])
        idx = rng.choice(len(comps), p=weights / weights.sum())
        c = comps[idx]
        d = rng.multivariate_normal(np.asarray(c.mean), np.asarray(c.cov))
        return float(d[0]), float(d[1])


def fit_offset_gmm(samples: dict[str, list[tuple[float, float]]],
                   n_components: int = 2, min_samples: int = 10,
                   seed: int = 0, reg_covar: float = 1e-6) -> OffsetGmm:
    """EM fit per letter with a pooled fallback for under-sampled letters."""
    from sklearn.mixture import GaussianMixture

    all_pts = [p for pts in samples.values() for p in pts]
    if not all_pts:
        raise ValueError("no offset samples provided")

    def fit(points):
        arr = np.asarray(points, dtype=float)
        nc = min(n_components, len(arr))
        gm = GaussianMixture(n_components=nc, covariance_type="full",
                             reg_covar=reg_covar, random_state=seed,
                             init_params="kmeans", n_init=1)
        gm.fit(arr)
        return [GmmComponent(float(w), m.tolist(), c.tolist())
                for w, m, c in zip(gm.weights_, gm.means_, gm.covariances_)]

    pooled = fit(all_pts)
    per_letter = {}
    report = {}
    for letter in LETTERS:
        pts = samples.get(letter, [])
        if len(pts) >= min_samples:
            per_letter[letter] = fit(pts)
            report[letter] = "fitted"
        else:
            report[letter] = "pooled"
    return OffsetGmm(per_letter, pooled, report)


def default_offset_gmm(layout: KeyLayout, sigma_pitch: float = 0.35) -> OffsetGmm:
    """Isotropic fallback when no human logs are available."""
    s = sigma_pitch * layout.key_pitch
    comp = [GmmComponent(1.0, [0.0, 0.0], [[s * s, 0.0], [0.0, s * s]])]
    return OffsetGmm({c: comp for c in LETTERS}, comp,
                     {c: "default" for c in LETTERS})


def sample_near_slip(letter: str, gmm: OffsetGmm, alpha_kernel: float,
                     layout: KeyLayout, rng: np.random.Generator,
                     extra_tap_prob: float = 0.15,
                     delta: tuple[float, float] | None = None):
    """Near channel outcome: ('substitute', c) | ('extra', c) | ('delete', None)
    | ('none', None) when the perturbed contact still reads as the letter itself."""
    if delta is None:
        delta = gmm.sample(letter, rng)
    center = layout[letter].center
    px = min(max(center.x + delta[0], 0.0), 1.0)
    py = min(max(center.y + delta[1], 0.0), 1.0)
    q = soft_key_distribution(Point(px, py), alpha_kernel, layout)
    if q[NO_KEY] == 1.0:
        return ("delete", None)
    if rng.random() < extra_tap_prob:
        keys = sorted(c for c in q if c != NO_KEY)
        probs = np.array([q[c] for c in keys])
        c = keys[rng.choice(len(keys), p=probs / probs.sum())]
        return ("extra", c)
    c = max((c for c in q if c != NO_KEY), key=lambda c: q[c])
    if c == letter:
        return ("none", None)
    return ("substitute", c)


# --- co-activation table (CoAct channel) ------------------------------------

@dataclass
class CoActTable:
    # probs[(letter, bucket)] -> categorical over letters, add-k smoothed
    probs: dict[tuple[str, tuple[int, str]], dict[str, float]]
    swap_base: float = 0.25
    swap_decay: float = 0.5  # per unit of cross-row + cross-hand distance

    def categorical(self, letter: str, bucket: tuple[int, str]) -> dict[str, float]:
        return self.probs.get((letter, bucket),
                              {c: 1.0 / 26 for c in LETTERS})

    def sample(self, letter: str, bucket: tuple[int, str],
               rng: np.random.Generator) -> str:
        cat = self.categorical(letter, bucket)
        keys = sorted(cat)
        probs = np.array([cat[c] for c in keys])
        return keys[rng.choice(len(keys), p=probs / probs.sum())]

    def swap_prob(self, a: str, b: str, layout: KeyLayout) -> float:
        ra, ha = geometry_bucket(a, layout)
        rb, hb = geometry_bucket(b, layout)
        dist = abs(ra - rb) + (ha != hb)
        return self.swap_base * (self.swap_decay ** dist)


def fit_coact_table(clusters: list[tuple[str, list[str]]], layout: KeyLayout,
                    k: float = 0.5) -> CoActTable:
    """Count co-fired letters per (intended letter, bucket of the co-firer)
    and smooth each categorical with add-k."""
    counts: dict[tuple[str, tuple[int, str]], dict[str, float]] = {}
    for intent, cofired in clusters:
        for c in cofired:
            bucket = geometry_bucket(c, layout)
            d = counts.setdefault((intent, bucket), {})
            d[c] = d.get(c, 0.0) + 1.0
    probs = {}
    for a in LETTERS:
        for bucket in all_buckets():
            raw = counts.get((a, bucket), {})
            total = sum(raw.values()) + k * 26
            probs[(a, bucket)] = {c: (raw.get(c, 0.0) + k) / total for c in LETTERS}
    return CoActTable(probs)


def default_coact_table(layout: KeyLayout, scale: float = 1.5) -> CoActTable:
    """Adjacency-biased fallback: co-fired letters concentrate near the target."""
    probs = {}
    for a in LETTERS:
        ca = layout[a].center
        raw = {c: math.exp(-ca.dist(layout[c].center) / (scale * layout.key_pitch))
               for c in LETTERS if c != a}
        z = sum(raw.values())
        cat = {c: 0.98 * v / z for c, v in raw.items()}
        cat[a] = 0.02
        for bucket in all_buckets():
            probs[(a, bucket)] = cat
    return CoActTable(probs)


# --- per-position edit propensities -----------------------------------------

HOME_ROW = 1
# distance of each finger from its index finger, scaled to [0,1]
FINGER_REACH = {0: 1.0, 1: 2 / 3, 2: 1 / 3, 3: 0.0, 4: 0.0, 5: 0.0,
                6: 0.0, 7: 1 / 3, 8: 2 / 3, 9: 1.0}


@dataclass
class PropensityModel:
    # linear score over (row distance from home, cross-hand step,
    # finger reach, local travel distance)
    weights: list[float] = field(default_factory=lambda: [0.5, 0.3, 0.4, 2.0])

    def features(self, word: str, i: int, layout: KeyLayout) -> list[float]:
        k = layout[word[i]]
        row_dist = abs(k.row - HOME_ROW)
        if i == 0:
            cross, travel = 0.0, 0.0
        else:
            prev = layout[word[i - 1]]
            cross = float(prev.hand != k.hand)
            travel = prev.center.dist(k.center)
        return [row_dist, cross, FINGER_REACH[k.finger], travel]

    def position_weights(self, word: str, layout: KeyLayout) -> np.ndarray:
        w = np.asarray(self.weights)
        scores = np.array([math.exp(float(np.dot(w, self.features(word, i, layout))))
                           for i in range(len(word))])
        return scores / scores.sum()


def fit_propensity(aligned_pairs: list[tuple[str, list[int]]], layout: KeyLayout,
                   iters: int = 200, lr: float = 0.5) -> PropensityModel:
    """Match model feature expectations to the empirical distribution of edited
    positions from aligned human pairs (word, list of edited position indices)."""
    model = PropensityModel(weights=[0.0, 0.0, 0.0, 0.0])
    data = [(w, pos) for w, pos in aligned_pairs if pos and len(w) > 1]
    if not data:
        return PropensityModel()
    feats = {w: np.array([model.features(w, i, layout) for i in range(len(w))])
             for w, _ in data}
    emp = np.zeros(4)
    n = 0
    for w, positions in data:
        for p in positions:
            emp += feats[w][p]
            n += 1
    emp /= n
    weights = np.zeros(4)
    for _ in range(iters):
        exp = np.zeros(4)
        for w, positions in data:
            f = feats[w]
            s = np.exp(f @ weights)
            s /= s.sum()
            exp += len(positions) * (s @ f)
        exp /= n
        weights += lr * (emp - exp)
    return PropensityModel(weights=weights.tolist())


# --- pairs, config, synthesis -------------------------------------------------

@dataclass
class NoisePair:
    noisy: str
    gold: str
    realized_ed: int
    annotations: list[str] = field(default_factory=list)


@dataclass
class SynthConfig:
    seed: int = 0
    alpha_kernel: float = 400.0
    balance_tolerance: float = 0.02     # max per-bin deviation from uniform
    near_weight: float = 0.6            # channel mix when no fit is available
    extra_tap_prob: float = 0.15
    coact_substitute_prob: float = 0.1
    geometric_p: float = 0.45           # length-aware edit-count prior
    insert_after: bool = True           # extra taps land after the intended letter
    pair_budget: int = 50
    corpus_budget: int = 100_000

    def __post_init__(self):
        if not (0 < self.balance_tolerance < 0.2):
            raise ValueError("balance tolerance must be in (0, 0.2)")


@dataclass
class NoiseModel:
    gmm: OffsetGmm
    coact: CoActTable
    propensity: PropensityModel

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "gmm": {
                "per_letter": {a: [asdict(c) for c in comps]
                               for a, comps in self.gmm.per_letter.items()},
                "pooled": [asdict(c) for c in self.gmm.pooled],
                "fit_report": self.gmm.fit_report,
            },
            "coact": {
                "probs": [{"letter": a, "row": b[0], "hand": b[1], "cat": cat}
                          for (a, b), cat in sorted(self.coact.probs.items())],
                "swap_base": self.coact.swap_base,
                "swap_decay": self.coact.swap_decay,
            },
            "propensity": {"weights": self.propensity.weights},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        g = d["gmm"]
        gmm = OffsetGmm(
            per_letter={a: [GmmComponent(**c) for c in comps]
                        for a, comps in g["per_letter"].items()},
            pooled=[GmmComponent(**c) for c in g["pooled"]],
            fit_report=g.get("fit_report", {}),
        )
        c = d["coact"]
        coact = CoActTable(
            probs={(e["letter"], (e["row"], e["hand"])): e["cat"]
                   for e in c["probs"]},
            swap_base=c["swap_base"], swap_decay=c["swap_decay"],
        )
        return cls(gmm, coact, PropensityModel(weights=d["propensity"]["weights"]))

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)

    @classmethod
    def load(cls, path) -> "NoiseModel":
        with open(path) as f:
            return cls.from_dict(json.load(f))


def default_noise_model(layout: KeyLayout) -> NoiseModel:
    return NoiseModel(default_offset_gmm(layout), default_coact_table(layout),
                      PropensityModel())


class SynthesisFailure(RuntimeError):
    pass


def _draw_edit_count(L: int, cfg: SynthConfig, rng: np.random.Generator) -> int:
    cap = e_max(L)
    p = cfg.geometric_p
    probs = np.array([(1 - p) ** e for e in range(cap + 1)])
    return int(rng.choice(cap + 1, p=probs / probs.sum()))


def _apply_ops(word: str, ops: list[tuple[int, str, str | None]],
               insert_after: bool) -> str:
    # one op per original position; fixed order: swaps, deletions, then
    # insertions/substitutions left to right
    cells = [[c] for c in word]
    order = {"swap": 0, "delete": 1, "substitute": 2, "extra": 2}
    for pos, op, payload in sorted(ops, key=lambda o: (order[o[1]], o[0])):
        if op == "swap" and pos + 1 < len(cells):
            cells[pos], cells[pos + 1] = cells[pos + 1], cells[pos]
        elif op == "delete":
            cells[pos] = []
        elif op == "substitute" and cells[pos]:
            cells[pos] = [payload]
        elif op == "extra":
            cells[pos] = cells[pos] + [payload] if insert_after else [payload] + cells[pos]
    return "".join(c for cell in cells for c in cell)


def synthesize_pair(gold: str, model: NoiseModel, layout: KeyLayout,
                    cfg: SynthConfig, rng: np.random.Generator,
                    forced_edit_count: int | None = None) -> NoisePair:
    """One noisy-gold pair; rejects and resamples while the realized edit
    distance exceeds the length cap."""
    cap = e_max(len(gold))
    for _ in range(cfg.pair_budget):
        n_edits = (forced_edit_count if forced_edit_count is not None
                   else _draw_edit_count(len(gold), cfg, rng))
        n_edits = min(n_edits, cap, len(gold))
        if n_edits == 0:
            return NoisePair(gold, gold, 0, [])
        pw = model.propensity.position_weights(gold, layout)
        positions = rng.choice(len(gold), size=n_edits, replace=False, p=pw)
        ops = []
        notes = []
        for pos in sorted(int(p) for p in positions):
            a = gold[pos]
            if rng.random() < cfg.near_weight:
                op, payload = sample_near_slip(
                    a, model.gmm, cfg.alpha_kernel, layout, rng,
                    extra_tap_prob=cfg.extra_tap_prob)
                if op == "none":
                    continue
                ops.append((pos, op, payload))
                notes.append(f"Near:{op}@{pos}")
            else:
                bucket = geometry_bucket(a, layout)
                if (pos + 1 < len(gold)
                        and rng.random() < model.coact.swap_prob(a, gold[pos + 1], layout)):
                    ops.append((pos, "swap", None))
                    notes.append(f"CoAct:swap@{pos}")
                elif rng.random() < cfg.coact_substitute_prob:
                    c = model.coact.sample(a, bucket, rng)
                    ops.append((pos, "substitute", c))
                    notes.append(f"CoAct:substitute@{pos}")
                else:
                    c = model.coact.sample(a, bucket, rng)
                    ops.append((pos, "extra", c))
                    notes.append(f"CoAct:extra@{pos}")
        noisy = _apply_ops(gold, ops, cfg.insert_after)
        if not noisy:
            continue
        ed = levenshtein(noisy, gold)
        if ed <= cap:
            return NoisePair(noisy, gold, ed, notes)
    raise SynthesisFailure(f"could not synthesize a capped pair for {gold!r}")


def balance_corpus(lexicon_words: list[str], target_size: int, model: NoiseModel,
                   layout: KeyLayout, cfg: SynthConfig) -> tuple[list[NoisePair], dict]:
    """ED-balanced corpus: within each length regime, every bin e in
    0..E_max holds ~1/(E_max+1) of the pairs within the balance tolerance."""
    by_regime: dict[str, list[str]] = {r: [] for r in REGIMES}
    for w in lexicon_words:
        by_regime[length_regime(len(w))].append(w)
    by_regime = {r: ws for r, ws in by_regime.items() if ws}

    total_words = sum(len(ws) for ws in by_regime.values())
    quotas: dict[str, list[int]] = {}
    for r, ws in by_regime.items():
        rt = round(target_size * len(ws) / total_words)
        nbins = e_max(len(ws[0])) + 1
        q, rem = divmod(rt, nbins)
        quotas[r] = [q + (1 if b < rem else 0) for b in range(nbins)]

    pairs: list[NoisePair] = []
    report = {"attempts": 0, "failures": 0, "filled": {}, "unfilled": {}}
    for r, ws in by_regime.items():
        ridx = REGIMES.index(r)
        quota = list(quotas[r])
        order_rng = np.random.default_rng([cfg.seed, ridx])
        word_order = list(order_rng.permutation(len(ws)))
        wi = 0
        attempt = 0
        while any(q > 0 for q in quota) and attempt < cfg.corpus_budget:
            gold = ws[word_order[wi % len(ws)]]
            wi += 1
            # aim at the neediest bin reachable for this word
            cap = e_max(len(gold))
            needy = max((b for b in range(cap + 1) if quota[b] > 0),
                        key=lambda b: quota[b], default=None)
            if needy is None:
                break
            rng = np.random.default_rng([cfg.seed, ridx, attempt])
            attempt += 1
            report["attempts"] += 1
            try:
                pair = synthesize_pair(gold, model, layout, cfg, rng,
                                       forced_edit_count=needy)
            except SynthesisFailure:
                report["failures"] += 1
                continue
            if pair.realized_ed <= cap and quota[pair.realized_ed] > 0:
                quota[pair.realized_ed] -= 1
                pairs.append(pair)
        report["filled"][r] = [q0 - q for q0, q in zip(quotas[r], quota)]
        report["unfilled"][r] = quota
    return pairs, report


# --- corpus TSV ---------------------------------------------------------------

def write_corpus(pairs: list[NoisePair], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for p in pairs:
            f.write(f"{p.noisy}\t{p.gold}\t{p.realized_ed}\t{';'.join(p.annotations)}\n")


def read_corpus(path) -> list[NoisePair]:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            noisy, gold, ed, ann = line.split("\t")
            pairs.append(NoisePair(noisy, gold, int(ed),
                                   ann.split(";") if ann else []))
    return pairs
