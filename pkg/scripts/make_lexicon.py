"""Regenerate the bundled frequency-ranked lexicon.

No curated frequency list ships with this environment, so we rank words by
frequency over the English prose available on the build machine (package docs
and docstrings). Output: one word per line, most frequent first.
"""
import ast
import collections
import pathlib
import re
import sys

WORD_RE = re.compile(r"[a-z]+")
DOC_ROOTS = [
    "/usr/local/lib/python3.10/dist-packages",
    "/usr/lib/python3.10",
    "/usr/share/doc",
]
TRIPLE_RE = re.compile(r'"""(.*?)"""|\'\'\'(.*?)\'\'\'', re.S)


def main(out_path: str, size: int = 10000) -> None:
    cnt = collections.Counter()

    def feed(text: str):
        for w in WORD_RE.findall(text.lower()):
            if 1 <= len(w) <= 20:
                cnt[w] += 1

    for root in DOC_ROOTS:
        for p in pathlib.Path(root).rglob("*"):
            if not p.is_file():
                continue
            if p.suffix in (".rst", ".md", ".txt"):
                try:
                    feed(p.read_text(errors="ignore"))
                except OSError:
                    pass
            elif p.suffix == ".py":
                try:
                    src = p.read_text(errors="ignore")
                except OSError:
                    continue
                for m in TRIPLE_RE.finditer(src):
                    feed(m.group(1) or m.group(2) or "")

    words = [w for w, _ in cnt.most_common(size)]
    with open(out_path, "w") as f:
        f.write("\n".join(words) + "\n")
    print(f"wrote {len(words)} words to {out_path}")


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "src/handsdown/data/lexicon_10k.txt"
    main(out)
