"""QWERTY key layout in normalized coordinates and geometric key-mapping primitives.

Coordinates are fractions of the keyboard rectangle: origin top-left,
x in [0,1] left-to-right, y in [0,1] top-to-bottom.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

LAYOUT_VERSION = "1"

LETTERS = "abcdefghijklmnopqrstuvwxyz"
CONTROL_KEYS = ("space", "enter", "backspace")

LEFT_HAND = set("qwertasdfgzxcvb")

# touch-typing finger assignment, 0 = left pinky .. 9 = right pinky
FINGER = {
    "q": 0, "a": 0, "z": 0,
    "w": 1, "s": 1, "x": 1,
    "e": 2, "d": 2, "c": 2,
    "r": 3, "f": 3, "v": 3, "t": 3, "g": 3, "b": 3,
    "y": 6, "h": 6, "n": 6, "u": 6, "j": 6, "m": 6,
    "i": 7, "k": 7,
    "o": 8, "l": 8,
    "p": 9,
}


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise LayoutError(f"non-finite point ({self.x}, {self.y})")
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise LayoutError(f"point outside unit square ({self.x}, {self.y})")

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class KeyGeom:
    key: str
    center: Point
    width: float
    height: float
    row: int
    hand: str  # left | right
    finger: int
    col: int   # column index within its row, used for tie-breaking

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, p: Point) -> bool:
        return (abs(p.x - self.center.x) <= self.width / 2
                and abs(p.y - self.center.y) <= self.height / 2)


class KeyLayout:
    """Immutable letter + control key geometry; lookup by key id is total."""

    def __init__(self, keys: list[KeyGeom], version: str = LAYOUT_VERSION):
        self.version = version
        self._by_id = {k.key: k for k in keys}
        if len(self._by_id) != len(keys):
            raise LayoutError("duplicate key ids")
        missing = [c for c in LETTERS if c not in self._by_id]
        if missing:
            raise LayoutError(f"layout misses letters: {missing}")
        # letter keys in deterministic (row, col) order for tie-breaking
        self.letter_keys = sorted(
            (self._by_id[c] for c in LETTERS), key=lambda k: (k.row, k.col)
        )
        self.key_pitch = self._by_id["f"].width  # horizontal pitch reference

    def __getitem__(self, key: str) -> KeyGeom:
        return self._by_id[key]

    def __contains__(self, key: str) -> bool:
        return key in self._by_id

    @property
    def keys(self) -> list[KeyGeom]:
        return list(self._by_id.values())

    def control_key_at(self, p: Point) -> str | None:
        for kid in CONTROL_KEYS:
            if kid in self._by_id and self._by_id[kid].contains(p):
                return kid
        return None


def nearest_key(p: Point, layout: KeyLayout) -> str:
    """Letter key whose center is closest to p; ties go to smaller (row, col)."""
    best = None
    best_d = math.inf
    for k in layout.letter_keys:  # already (row, col)-sorted
        d = p.dist(k.center)
        if d < best_d - 1e-15:
            best, best_d = k, d
    return best.key


def no_key_radius(layout: KeyLayout, key: str) -> float:
    """Beyond 0.75 key diagonals from the nearest center a slip counts as no-key."""
    return 0.75 * layout[key].diagonal


NO_KEY = "<no-key>"


def soft_key_distribution(p: Point, alpha_kernel: float, layout: KeyLayout) -> dict[str, float]:
    """Soft nearest-key kernel: q(c|p) ~ exp(-alpha * ||p - center(c)||^2).

    Returns a probability map over letters plus NO_KEY. A contact farther than
    the no-key radius from every center carries all mass on NO_KEY (deletion).
    """
    if not alpha_kernel > 0:
        raise LayoutError(f"alpha_kernel must be positive, got {alpha_kernel}")
    nk = nearest_key(p, layout)
    if p.dist(layout[nk].center) > no_key_radius(layout, nk):
        q = {k.key: 0.0 for k in layout.letter_keys}
        q[NO_KEY] = 1.0
        return q
    d2 = {k.key: p.dist(k.center) ** 2 for k in layout.letter_keys}
    m = min(d2.values())
    raw = {c: math.exp(-alpha_kernel * (v - m)) for c, v in d2.items()}
    z = sum(raw.values())
    q = {c: v / z for c, v in raw.items()}
    q[NO_KEY] = 0.0
    return q


def geometry_bucket(key: str, layout: KeyLayout) -> tuple[int, str]:
    """Coarse (row, hand) bucket; partitions the 26 letters into 6 buckets."""
    if key not in LETTERS:
        raise LayoutError(f"geometry_bucket expects a letter key, got {key!r}")
    k = layout[key]
    return (k.row, k.hand)


def all_buckets() -> list[tuple[int, str]]:
    return [(r, h) for r in range(3) for h in ("left", "right")]


# --- layout file format -----------------------------------------------------
# JSON: {"layout_version": str, "keys": {id: {cx, cy, w, h, row, hand, finger, col}}}

def layout_to_dict(layout: KeyLayout) -> dict:
    keys = {}
    for k in sorted(layout.keys, key=lambda k: k.key):
        keys[k.key] = {
            "cx": k.center.x, "cy": k.center.y,
            "w": k.width, "h": k.height,
            "row": k.row, "hand": k.hand, "finger": k.finger, "col": k.col,
        }
    return {"layout_version": layout.version, "keys": keys}


def layout_from_dict(d: dict) -> KeyLayout:
    keys = []
    for kid, g in d["keys"].items():
        keys.append(KeyGeom(
            key=kid, center=Point(g["cx"], g["cy"]),
            width=g["w"], height=g["h"], row=g["row"],
            hand=g["hand"], finger=g["finger"], col=g["col"],
        ))
    return KeyLayout(keys, version=d["layout_version"])


def save_layout(layout: KeyLayout, path) -> None:
    with open(path, "w") as f:
        json.dump(layout_to_dict(layout), f, indent=2, sort_keys=True)
        f.write("\n")


def load_layout(path) -> KeyLayout:
    with open(path) as f:
        return layout_from_dict(json.load(f))


def make_default_layout() -> KeyLayout:
    """Three staggered letter rows, key width 1/10 of row width, plus controls."""
    rows = [("qwertyuiop", 0.0), ("asdfghjkl", 0.05), ("zxcvbnm", 0.15)]
    w, h = 0.1, 0.25
    keys = []
    for row, (letters, offset) in enumerate(rows):
        cy = h * (row + 0.5)
        for col, c in enumerate(letters):
            cx = offset + w * (col + 0.5)
            hand = "left" if c in LEFT_HAND else "right"
            keys.append(KeyGeom(c, Point(round(cx, 6), round(cy, 6)),
                                w, h, row, hand, FINGER[c], col))
    keys.append(KeyGeom("backspace", Point(0.925, 0.625), 0.15, h, 2, "right", 9, 8))
    keys.append(KeyGeom("space", Point(0.45, 0.875), 0.5, h, 3, "left", 4, 1))
    keys.append(KeyGeom("enter", Point(0.85, 0.875), 0.3, h, 3, "right", 9, 2))
    return KeyLayout(keys)


def default_layout() -> KeyLayout:
    path = resources.files("handsdown.data") / "qwerty_layout.json"
    with resources.as_file(path) as p:
        return load_layout(p)
