import functools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from handsdown.layout import LETTERS, all_buckets, geometry_bucket
from handsdown.noise import (
    NoiseModel, NoisePair, SynthConfig, SynthesisFailure, balance_corpus,
    default_coact_table, default_noise_model, default_offset_gmm, e_max,
    fit_coact_table, fit_offset_gmm, fit_propensity, length_regime, levenshtein,
    read_corpus, sample_near_slip, synthesize_pair, write_corpus,
)

words_st = st.text(alphabet="abcdef", max_size=8)


def recursive_ed(u, w):
    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(go(i - 1, j) + 1, go(i, j - 1) + 1,
                   go(i - 1, j - 1) + (u[i - 1] != w[j - 1]))
    return go(len(u), len(w))


class TestLevenshtein:
    @pytest.mark.parametrize("u,w,d", [
        ("ekigible", "eligible", 1),
        ("", "abc", 3),
        ("kitten", "sitting", 3),
        ("same", "same", 0),
    ])
    def test_fixtures(self, u, w, d):
        assert levenshtein(u, w) == d

    @given(words_st, words_st)
    def test_matches_recursive_oracle(self, u, w):
        assert levenshtein(u, w) == recursive_ed(u, w)

    @given(words_st, words_st)
    def test_symmetric(self, u, w):
        assert levenshtein(u, w) == levenshtein(w, u)


class TestEditCap:
    @pytest.mark.parametrize("L,cap", [(3, 2), (8, 3), (15, 4)])
    def test_fixtures(self, L, cap):
        assert e_max(L) == cap

    def test_piecewise_rule(self):
        for L in range(1, 31):
            assert e_max(L) == (2 if L <= 6 else 3 if L <= 9 else 4)

    def test_rejects_non_positive_length(self):
        with pytest.raises(ValueError):
            e_max(0)

    def test_regimes_track_caps(self):
        assert [length_regime(L) for L in (3, 8, 15)] == ["short", "mid", "long"]


class TestOffsetGmm:
    def test_zero_offsets_degenerate(self):
        gmm = fit_offset_gmm({"a": [(0.0, 0.0)] * 30})
        comps = gmm.components("a")
        for c in comps:
            assert np.allclose(c.mean, [0.0, 0.0], atol=1e-9)
            assert np.all(np.linalg.eigvalsh(np.asarray(c.cov)) > 0)  # regularized

    def test_two_blobs_recovered(self):
        rng = np.random.default_rng(0)
        blob1 = rng.normal([0.05, 0.0], 0.002, size=(200, 2))
        blob2 = rng.normal([-0.05, 0.02], 0.002, size=(200, 2))
        gmm = fit_offset_gmm({"a": np.vstack([blob1, blob2]).tolist()})
        means = sorted((c.mean for c in gmm.components("a")), key=lambda m: m[0])
        assert means[0][0] == pytest.approx(-0.05, abs=0.005)
        assert means[1][0] == pytest.approx(0.05, abs=0.005)

    def test_under_sampled_letter_pools(self):
        gmm = fit_offset_gmm({"a": [(0.01, 0.0)] * 30, "b": [(0.0, 0.0)] * 3})
        assert gmm.fit_report["b"] == "pooled"
        assert "b" not in gmm.per_letter
        assert gmm.components("b") == gmm.pooled

    def test_no_samples_rejected(self):
        with pytest.raises(ValueError):
            fit_offset_gmm({})

    def test_sampling_deterministic(self, layout):
        gmm = default_offset_gmm(layout)
        a = gmm.sample("k", np.random.default_rng(7))
        b = gmm.sample("k", np.random.default_rng(7))
        assert a == b


class TestNearSlip:
    def test_zero_offset_realizes_no_error(self, layout):
        gmm = default_offset_gmm(layout)
        op, payload = sample_near_slip("a", gmm, 400.0, layout,
                                       np.random.default_rng(0), delta=(0.0, 0.0))
        assert (op, payload) == ("none", None)

    def test_one_pitch_rightward_from_k_substitutes_l(self, layout):
        gmm = default_offset_gmm(layout)
        op, payload = sample_near_slip("k", gmm, 400.0, layout,
                                       np.random.default_rng(0),
                                       extra_tap_prob=0.0,
                                       delta=(layout.key_pitch, 0.0))
        assert (op, payload) == ("substitute", "l")

    def test_far_offset_deletes(self, layout):
        gmm = default_offset_gmm(layout)
        op, payload = sample_near_slip("k", gmm, 400.0, layout,
                                       np.random.default_rng(0),
                                       delta=(0.0, 0.5))
        assert (op, payload) == ("delete", None)


class TestCoActTable:
    def test_single_observation_dominates(self, layout):
        bucket = geometry_bucket("k", layout)
        table = fit_coact_table([("j", ["k"])], layout)
        cat = table.categorical("j", bucket)
        assert max(cat, key=cat.get) == "k"

    def test_unseen_pair_is_uniform(self, layout):
        table = fit_coact_table([("j", ["k"])], layout)
        cat = table.categorical("a", (0, "right"))
        assert all(v == pytest.approx(1 / 26, rel=1e-9) for v in cat.values())

    def test_categoricals_normalized_and_positive(self, layout):
        table = fit_coact_table([("j", ["k", "l"]), ("f", ["d"])], layout)
        for a in "jfa":
            for bucket in all_buckets():
                cat = table.categorical(a, bucket)
                assert sum(cat.values()) == pytest.approx(1.0, abs=1e-9)
                assert min(cat.values()) > 0

    def test_swap_propensity_decays_with_distance(self, layout):
        table = default_coact_table(layout)
        same = table.swap_prob("a", "s", layout)     # same row, same hand
        far = table.swap_prob("a", "p", layout)      # cross row, cross hand
        assert same > far

    def test_default_table_biases_neighbors(self, layout):
        table = default_coact_table(layout)
        cat = table.categorical("j", geometry_bucket("j", layout))
        assert cat["k"] > cat["q"]


class TestSynthesis:
    def test_forced_zero_edits_is_identity(self, layout):
        model = default_noise_model(layout)
        pair = synthesize_pair("hands", model, layout, SynthConfig(),
                               np.random.default_rng(0), forced_edit_count=0)
        assert pair == NoisePair("hands", "hands", 0, [])

    def test_short_word_respects_cap(self, layout):
        model = default_noise_model(layout)
        cfg = SynthConfig()
        rng = np.random.default_rng(1)
        for _ in range(20_000):
            pair = synthesize_pair("the", model, layout, cfg, rng)
            assert pair.realized_ed <= 2

    def test_realized_ed_is_true_distance(self, layout, lexicon):
        model = default_noise_model(layout)
        cfg = SynthConfig(seed=3)
        rng = np.random.default_rng(3)
        for w in lexicon.words[:300:3]:
            pair = synthesize_pair(w, model, layout, cfg, rng)
            assert pair.realized_ed == levenshtein(pair.noisy, pair.gold)
            assert pair.realized_ed <= e_max(len(w))
            assert pair.gold == w

    def test_deterministic_under_seed(self, layout):
        model = default_noise_model(layout)
        cfg = SynthConfig(seed=5)
        a = synthesize_pair("question", model, layout, cfg,
                            np.random.default_rng([5, 0]), forced_edit_count=2)
        b = synthesize_pair("question", model, layout, cfg,
                            np.random.default_rng([5, 0]), forced_edit_count=2)
        assert a == b

    def test_annotations_tag_channels(self, layout):
        model = default_noise_model(layout)
        rng = np.random.default_rng(11)
        for _ in range(50):
            pair = synthesize_pair("between", model, layout, SynthConfig(), rng)
            assert all(n.split(":")[0] in ("Near", "CoAct") for n in pair.annotations)


class TestBalanceCorpus:
    def test_bins_uniform_within_tolerance(self, layout, lexicon):
        model = default_noise_model(layout)
        cfg = SynthConfig(seed=42)
        pairs, report = balance_corpus(lexicon.words[:1500], 1200, model, layout, cfg)
        by_regime = {}
        for p in pairs:
            by_regime.setdefault(length_regime(len(p.gold)), []).append(p.realized_ed)
        for regime, eds in by_regime.items():
            nbins = e_max(len(next(p.gold for p in pairs
                                   if length_regime(len(p.gold)) == regime))) + 1
            for b in range(nbins):
                frac = sum(e == b for e in eds) / len(eds)
                assert abs(frac - 1 / nbins) <= cfg.balance_tolerance, (regime, b)

    def test_deterministic(self, layout, lexicon):
        model = default_noise_model(layout)
        cfg = SynthConfig(seed=9)
        a, _ = balance_corpus(lexicon.words[:400], 300, model, layout, cfg)
        b, _ = balance_corpus(lexicon.words[:400], 300, model, layout, cfg)
        assert a == b


class TestPropensity:
    def test_position_weights_normalized(self, layout):
        model = default_noise_model(layout).propensity
        w = model.position_weights("question", layout)
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert (w > 0).all()

    def test_fit_biases_toward_edited_positions(self, layout):
        # edits always on the reach-heavy top-row letter of "at"
        model = fit_propensity([("at", [1])] * 50, layout)
        w = model.position_weights("at", layout)
        assert w[1] > w[0]

    def test_fit_without_data_falls_back(self, layout):
        model = fit_propensity([], layout)
        assert model.position_weights("ab", layout).sum() == pytest.approx(1.0)


class TestCorpusIO:
    def test_tsv_round_trip(self, tmp_path):
        pairs = [NoisePair("teh", "the", 2, ["CoAct:swap@0"]),
                 NoisePair("hands", "hands", 0, [])]
        path = tmp_path / "corpus.tsv"
        write_corpus(pairs, path)
        assert read_corpus(path) == pairs

    def test_model_snapshot_round_trip(self, layout, tmp_path):
        model = default_noise_model(layout)
        path = tmp_path / "noise.json"
        model.save(path)
        loaded = NoiseModel.load(path)
        assert loaded.to_dict() == model.to_dict()
        a = synthesize_pair("word", model, layout, SynthConfig(),
                            np.random.default_rng(2), forced_edit_count=1)
        b = synthesize_pair("word", loaded, layout, SynthConfig(),
                            np.random.default_rng(2), forced_edit_count=1)
        assert a == b


class TestSynthConfig:
    def test_tolerance_bounds(self):
        with pytest.raises(ValueError):
            SynthConfig(balance_tolerance=0.5)
