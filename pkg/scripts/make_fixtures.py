"""Regenerate the bundled test fixtures (touch traces, session log, phrases).

Traces are synthetic but shaped like real hands-down input: taps land on key
centers, every tap is a down/up pair, and the drift trace carries one cluster
with a co-dragged resting contact so selection picks the reaching finger.
"""
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from handsdown.layout import default_layout

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src/handsdown/data/fixtures"

PHRASES = [
    "the quick brown dog",
    "hello world this is a test",
    "time and people work together",
    "a good life needs good people",
    "light under the small house",
    "many common words are simple",
    "the answer to the question",
    "machine learning is not magic",
    "water flows over the large field",
    "great work takes great care",
]


def tap(events, t, x, y, session="s0", word_id=0, intent=True, hold=60.0):
    events.append({"session": session, "word_id": word_id, "kind": "down",
                   "t": t, "x": x, "y": y, "intent": intent})
    events.append({"session": session, "word_id": word_id, "kind": "up",
                   "t": t + hold, "x": x, "y": y, "intent": intent})


def write_jsonl(path, events):
    events = sorted(events, key=lambda e: e["t"])
    with open(path, "w") as f:
        for e in events:
            f.write(json.dumps(e) + "\n")


def make_eligible_trace(layout):
    """Word trace for 'eligible' whose second cluster holds a resting contact
    plus a reaching contact drifted toward 'k': intermediate reads 'ekigible'."""
    events = []
    t = 0.0
    word = "eligible"
    for i, c in enumerate(word):
        kc = layout[c].center
        if i == 1:  # the 'l' press: rest near the previous key + drifted reach
            e_center = layout["e"].center
            # resting finger barely moves, lands first
            tap(events, t, e_center.x + 0.02, e_center.y + 0.01, intent=False)
            # the reach toward 'l' lands 40 ms later, drifted onto 'k'
            tap(events, t + 40.0, 0.83, 0.375, intent=True)
        else:
            tap(events, t, kc.x, kc.y, intent=True)
        t += 300.0
    write_jsonl(FIXTURES / "eligible_trace.jsonl", events)


def make_session_log(layout):
    """10-phrase transcription session: clean center taps, Space commits,
    Enter submits each phrase."""
    events = []
    t = 0.0
    space = layout["space"].center
    enter = layout["enter"].center
    wid = 0
    for phrase in PHRASES:
        for word in phrase.split():
            for c in word:
                kc = layout[c].center
                tap(events, t, kc.x, kc.y, word_id=wid)
                t += 250.0
            tap(events, t, space.x, space.y, word_id=wid)
            t += 400.0
            wid += 1
        tap(events, t, enter.x, enter.y, word_id=wid)
        t += 800.0
    write_jsonl(FIXTURES / "session_10phrases.jsonl", events)
    with open(FIXTURES / "session_10phrases.expected.txt", "w") as f:
        f.write("\n".join(PHRASES) + "\n")
    with open(FIXTURES / "phrases_10.txt", "w") as f:
        f.write("\n".join(PHRASES) + "\n")


def make_interval_log():
    """Two users with hand-computable inter-onset gaps.

    user_a onsets 0,50,200,290,590 -> gaps 50,150,90,300 (2 of 4 <= 100 ms)
    user_b onsets 0,200,450,850    -> gaps 200,250,400   (0 of 3)
    pooled fraction = 2/7
    """
    events = []
    for user, onsets in (("user_a", [0, 50, 200, 290, 590]),
                         ("user_b", [0, 200, 450, 850])):
        for t in onsets:
            tap(events, float(t), 0.5, 0.4, session=user, hold=30.0)
    events.sort(key=lambda e: (e["session"], e["t"]))
    with open(FIXTURES / "interval_two_users.jsonl", "w") as f:
        for e in events:
            f.write(json.dumps(e) + "\n")


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    layout = default_layout()
    make_eligible_trace(layout)
    make_session_log(layout)
    make_interval_log()
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
