import pytest

from handsdown.metrics import (
    TrialRecord, correction_stats, intent_ratio, interval_study, length_bucket,
    time_allocation, topk_report, wer, word_msd, wpm,
)


class TestTopkReport:
    def test_all_correct(self):
        trials = [TrialRecord("cat", ["cat", "car"]), TrialRecord("dog", ["dog"])]
        report = topk_report(trials)
        assert report.topk[1] == 1.0 and report.avg_ed == 0.0

    def test_gold_at_rank_three(self):
        trials = [TrialRecord("cat", ["car", "cab", "cat"]) for _ in range(4)]
        report = topk_report(trials)
        assert report.topk[1] == 0.0
        assert report.topk[3] == 1.0

    def test_monotone_in_k(self):
        trials = [TrialRecord("cat", ["car", "cat"]),
                  TrialRecord("dog", ["dog"]),
                  TrialRecord("bird", ["cat", "dog", "fish", "ant", "bee"])]
        report = topk_report(trials)
        ks = sorted(report.topk)
        assert all(report.topk[a] <= report.topk[b]
                   for a, b in zip(ks, ks[1:]))

    def test_bucket_and_ed_breakdowns(self):
        trials = [TrialRecord("cat", ["cat"], realized_ed=0),
                  TrialRecord("considerable", ["considerable"], realized_ed=2),
                  TrialRecord("characterization", ["wrong"], realized_ed=1)]
        report = topk_report(trials)
        assert report.by_bucket_n == {"short": 1, "mid": 1, "long": 1}
        assert report.by_ed[0][1] == 1.0
        assert report.by_ed_n == {0: 1, 1: 1, 2: 1}

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            topk_report([])

    def test_buckets(self):
        assert length_bucket("short") == "short"          # 5 chars
        assert length_bucket("moderately") == "mid"       # 10 chars
        assert length_bucket("extraordinarily") == "long" # 15 chars


class TestWpm:
    def test_formula(self):
        assert wpm(25, 1.0) == 5.0
        assert wpm(250, 2.0) == 25.0

    def test_rejects_non_positive_time(self):
        with pytest.raises(ValueError):
            wpm(10, 0.0)


class TestWer:
    def test_identical(self):
        s = "the quick brown fox jumps".split()
        assert wer(s, s) == 0.0

    def test_one_substitution_of_five(self):
        a = "the quick brown fox jumps".split()
        b = "the quick brown dog jumps".split()
        assert wer(a, b) == pytest.approx(0.2)

    def test_hand_computed_msd(self):
        assert word_msd("a b c".split(), "a x c d".split()) == 2
        assert wer("a b c".split(), "a x c d".split()) == 0.5

    def test_empty_transcription_is_all_deletions(self):
        assert wer([], "a b c".split()) == 1.0

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            wer(["a"], [])


class TestCorrectionStats:
    def test_no_corrections(self):
        assert correction_stats(0, 30, 0, 2.0) == (0.0, 0.0)

    def test_ratio(self):
        cer, per_min = correction_stats(2, 40, 3, 2.0)
        assert cer == pytest.approx(0.05)
        assert per_min == pytest.approx(1.5)


class TestIntentRatio:
    def test_mixed(self):
        assert intent_ratio(3, 6, 10, 40) == pytest.approx(0.375)

    def test_all_intended(self):
        assert intent_ratio(6, 6, 40, 40) == 1.0

    def test_bad_totals_rejected(self):
        with pytest.raises(ValueError):
            intent_ratio(1, 0, 1, 1)
        with pytest.raises(ValueError):
            intent_ratio(7, 6, 1, 1)


class TestTimeAllocation:
    def test_full_coverage(self):
        assert time_allocation([(0, 50), (50, 100)], (0, 100)) == (1.0, 0.0)

    def test_partial(self):
        within, between = time_allocation([(0, 50), (70, 100)], (0, 100))
        assert within == pytest.approx(0.8) and between == pytest.approx(0.2)

    def test_single_word_counts_as_within(self):
        assert time_allocation([(10, 20)], (0, 100)) == (1.0, 0.0)

    def test_empty_span_rejected(self):
        with pytest.raises(ValueError):
            time_allocation([(0, 1)], (5, 5))


class TestIntervalStudy:
    def test_single_user_fixture(self):
        # onsets giving gaps {50, 150, 90, 300}: 2 of 4 at or under 100 ms
        res = interval_study({"u": [0, 50, 200, 290, 590]}, bootstrap_reps=500)
        assert res.fraction == 0.5
        assert res.per_user == {"u": 0.5}
        assert res.n_gaps == 4

    def test_no_fast_gaps(self):
        res = interval_study({"u": [0, 200, 500]}, bootstrap_reps=500)
        assert res.fraction == 0.0
        assert (res.ci_low, res.ci_high) == (0.0, 0.0)

    def test_two_user_pooling(self):
        res = interval_study({"a": [0, 50, 200, 290, 590],
                              "b": [0, 200, 450, 850]}, bootstrap_reps=2000)
        assert res.fraction == pytest.approx(2 / 7)
        assert res.ci_low <= res.fraction <= res.ci_high

    def test_jitter_widens_threshold(self):
        onsets = {"u": [0, 50, 200, 290, 590]}  # gaps 50,150,90,300
        assert interval_study(onsets, jitter_ms=60.0,
                              bootstrap_reps=500).fraction == 0.75

    def test_deterministic_ci(self):
        onsets = {"a": [0, 40, 300], "b": [0, 90, 500]}
        r1 = interval_study(onsets, bootstrap_reps=1000, seed=3)
        r2 = interval_study(onsets, bootstrap_reps=1000, seed=3)
        assert (r1.ci_low, r1.ci_high) == (r2.ci_low, r2.ci_high)

    def test_median_gap(self):
        res = interval_study({"u": [0, 100, 300]}, bootstrap_reps=100)
        assert res.median_gap_ms == 150.0

    def test_no_gaps_rejected(self):
        with pytest.raises(ValueError):
            interval_study({"u": [5.0]})
