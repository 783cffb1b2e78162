"""Command line entry points: replay, synth, fit, decode, eval, serve."""
from __future__ import annotations

import argparse
import json
import statistics
import sys

import numpy as np

from . import decode as dec
from . import metrics, noise
from .layout import default_layout, load_layout
from .lexicon import default_lexicon, load_lexicon, train_char_ngram
from .pipeline import PipelineConfig, read_touch_log
from .service import Session, replay_events


def _layout(args):
    return load_layout(args.layout) if getattr(args, "layout", None) else default_layout()


def _lexicon(args):
    return load_lexicon(args.lexicon) if getattr(args, "lexicon", None) else default_lexicon()


def _registry(args, layout, lexicon):
    lm = train_char_ngram(lexicon)
    index = dec.LexiconIndex(lexicon, lm)
    registry = dec.DecoderRegistry()
    registry.register(dec.NgramDecoder(index))
    registry.register(dec.BayesianDecoder(index, dec.SpatialModel(layout)))
    if getattr(args, "remote_endpoint", None):
        registry.register(dec.RemoteDecoder(
            dec.RemoteDecoderConfig(args.remote_endpoint), registry))
    return registry


def cmd_replay(args):
    layout = _layout(args)
    lexicon = _lexicon(args)
    registry = _registry(args, layout, lexicon)
    session = Session(registry, args.backend, layout, PipelineConfig())
    events = read_touch_log(args.log)
    emissions = replay_events(session, events)
    if args.commit_at_end:
        emissions.extend(session.commit_word())
    for m in emissions:
        if args.verbose or m["kind"] in ("commit", "phrase_result", "error"):
            print(json.dumps(m))
    print(json.dumps({"kind": "final", "committed": session.committed_text}))


def cmd_synth(args):
    layout = _layout(args)
    lexicon = _lexicon(args)
    model = (noise.NoiseModel.load(args.model) if args.model
             else noise.default_noise_model(layout))
    cfg = noise.SynthConfig(seed=args.seed)
    pairs, report = noise.balance_corpus(lexicon.words, args.size, model, layout, cfg)
    noise.write_corpus(pairs, args.out)
    print(json.dumps({"pairs": len(pairs), "report": report}))


def cmd_fit(args):
    layout = _layout(args)
    logs = json.load(open(args.logs))
    gmm = noise.fit_offset_gmm(
        {a: [tuple(p) for p in pts] for a, pts in logs.get("offsets", {}).items()}
    ) if logs.get("offsets") else noise.default_offset_gmm(layout)
    coact = noise.fit_coact_table(
        [(c["intent"], c["cofired"]) for c in logs.get("clusters", [])], layout
    ) if logs.get("clusters") else noise.default_coact_table(layout)
    prop = noise.fit_propensity(
        [(p["word"], p["positions"]) for p in logs.get("edits", [])], layout
    ) if logs.get("edits") else noise.PropensityModel()
    noise.NoiseModel(gmm, coact, prop).save(args.out)
    print(f"wrote noise model to {args.out}")


def cmd_decode(args):
    layout = _layout(args)
    lexicon = _lexicon(args)
    registry = _registry(args, layout, lexicon)
    pairs = noise.read_corpus(args.corpus)
    with open(args.out, "w") as f:
        for p in pairs:
            result = dec.decode(dec.DecodeInput(
                p.noisy,
                [layout[c].center for c in p.noisy] if args.backend == "bayes" else None,
            ), args.backend, registry)
            f.write(json.dumps({
                "input": p.noisy, "gold": p.gold, "realized_ed": p.realized_ed,
                "ranked": [{"word": c.word, "score": c.score, "literal": c.literal}
                           for c in result.ranked],
            }) + "\n")
    print(f"decoded {len(pairs)} inputs with backend {args.backend}")


def cmd_eval(args):
    trials = []
    with open(args.decoded) as f:
        for line in f:
            d = json.loads(line)
            trials.append(metrics.TrialRecord(
                gold=d["gold"], ranked=[c["word"] for c in d["ranked"]],
                realized_ed=d.get("realized_ed")))
    report = metrics.topk_report(trials)
    out = report.to_dict()
    if args.interval_log:
        onsets: dict[str, list[float]] = {}
        for e in read_touch_log(args.interval_log):
            if e.kind == "down" and e.intent:
                onsets.setdefault(e.session, []).append(e.t)
        study = metrics.interval_study(onsets, jitter_ms=args.jitter)
        out["interval_study"] = {
            "fraction": study.fraction, "ci": [study.ci_low, study.ci_high],
            "median_gap_ms": study.median_gap_ms, "n_gaps": study.n_gaps,
            "per_user": study.per_user,
        }
    text = json.dumps(out, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    print(text)
    if args.csv:
        with open(args.csv, "w") as f:
            f.write("bucket,n,em1,em2,em3,em5\n")
            for b, d in report.by_bucket.items():
                f.write(f"{b},{report.by_bucket_n[b]},{d[1]},{d[2]},{d[3]},{d[5]}\n")


def cmd_serve(args):
    import uvicorn

    from .server import create_app

    layout = _layout(args)
    lexicon = _lexicon(args)
    registry = _registry(args, layout, lexicon)
    phrases = None
    if args.phrases:
        phrases = [ln.strip() for ln in open(args.phrases) if ln.strip()]
    app = create_app(registry, layout, default_backend=args.backend,
                     phrases=phrases, log_dir=args.log_dir,
                     static_dir=args.static_dir)
    host, _, port = args.addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="handsdown")
    sub = p.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("replay", help="replay a touch-log JSONL through a session")
    rp.add_argument("--log", required=True)
    rp.add_argument("--backend", default="ngram")
    rp.add_argument("--layout")
    rp.add_argument("--lexicon")
    rp.add_argument("--commit-at-end", action="store_true")
    rp.add_argument("--verbose", action="store_true")
    rp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("synth", help="generate an ED-balanced noisy corpus")
    sp.add_argument("--lexicon")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--model")
    sp.add_argument("--layout")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_synth)

    fp = sub.add_parser("fit", help="fit noise models from annotated logs")
    fp.add_argument("--logs", required=True)
    fp.add_argument("--layout")
    fp.add_argument("--out", required=True)
    fp.set_defaults(func=cmd_fit)

    dp = sub.add_parser("decode", help="batch-decode a corpus TSV")
    dp.add_argument("--backend", default="ngram", choices=["ngram", "bayes", "remote"])
    dp.add_argument("--corpus", required=True)
    dp.add_argument("--lexicon")
    dp.add_argument("--layout")
    dp.add_argument("--remote-endpoint")
    dp.add_argument("--out", required=True)
    dp.set_defaults(func=cmd_decode)

    ep = sub.add_parser("eval", help="evaluate decode output")
    ep.add_argument("--decoded", required=True)
    ep.add_argument("--interval-log")
    ep.add_argument("--jitter", type=float, default=0.0)
    ep.add_argument("--out")
    ep.add_argument("--csv")
    ep.set_defaults(func=cmd_eval)

    vp = sub.add_parser("serve", help="run the realtime typing service")
    vp.add_argument("--addr", default="127.0.0.1:8000")
    vp.add_argument("--backend", default="ngram")
    vp.add_argument("--lexicon")
    vp.add_argument("--layout")
    vp.add_argument("--phrases")
    vp.add_argument("--log-dir")
    vp.add_argument("--static-dir")
    vp.add_argument("--remote-endpoint")
    vp.set_defaults(func=cmd_serve)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
