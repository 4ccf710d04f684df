"""Synthetic data generators used by the evaluation harness."""

import numpy as np
import pytest

from dyscreen.core.types import Label
from dyscreen.core.variants import FULL, MID_9_11, YOUNG_7_8
from dyscreen.errors import DataError
from dyscreen.evaluation.synth import estimate_prevalence, synth_generate, synth_session
from dyscreen.features import extract_features


class TestEstimatePrevalence:
    def test_screening_uptake_product(self):
        assert estimate_prevalence(0.51, 0.20) == pytest.approx(0.102)
        assert estimate_prevalence(0.5, 0.5, 0.8) == pytest.approx(0.2)
        assert estimate_prevalence(0.0, 1.0) == 0.0

    def test_rates_must_be_probabilities(self):
        with pytest.raises(DataError, match="flag_rate"):
            estimate_prevalence(1.2, 0.5)
        with pytest.raises(DataError, match="take_rate"):
            estimate_prevalence(0.5, -0.1)
        with pytest.raises(DataError, match="tp_share"):
            estimate_prevalence(0.5, 0.5, 2.0)


class TestSynthGenerate:
    def test_positive_count_rounds_half_up(self):
        assert sum(1 for r, _ in synth_generate(20, 0.5, 0.2, 1).records if r.label is Label.DYSLEXIA) == 10
        # 0.108 * 250 = 27.0
        data = synth_generate(250, 0.108, 0.2, 1)
        assert int(data.labels().sum()) == 27
        # 25 * 0.1 = 2.5 rounds to 3
        assert int(synth_generate(25, 0.1, 0.2, 1).labels().sum()) == 3

    def test_deterministic_for_a_seed(self):
        a = synth_generate(30, 0.3, 0.4, seed=5)
        b = synth_generate(30, 0.3, 0.4, seed=5)
        Xa, ya = a.to_arrays()
        Xb, yb = b.to_arrays()
        assert np.array_equal(Xa, Xb) and np.array_equal(ya, yb)
        Xc, _ = synth_generate(30, 0.3, 0.4, seed=6).to_arrays()
        assert not np.array_equal(Xa, Xc)

    def test_respects_variant_shape_and_ages(self):
        data = synth_generate(15, 0.4, 0.2, seed=2, variant=YOUNG_7_8)
        X, _ = data.to_arrays()
        assert X.shape == (15, 118)
        assert all(7 <= r.age <= 8 for r, _ in data.records)
        mid = synth_generate(15, 0.4, 0.2, seed=2, variant=MID_9_11)
        assert all(9 <= r.age <= 11 for r, _ in mid.records)

    def test_blocks_satisfy_the_measure_identities(self):
        data = synth_generate(25, 0.3, 0.5, seed=11)
        for _, vec in data.records:
            for qid in FULL.qids:
                clicks, hits, misses, score, acc, missrate = vec.question_block(qid)
                assert clicks == hits + misses
                assert score == hits
                assert acc == pytest.approx(hits / clicks, abs=1e-12)
                assert missrate == pytest.approx(misses / clicks, abs=1e-12)

    def test_separation_shifts_positive_accuracy_down(self):
        data = synth_generate(200, 0.5, 0.4, seed=3)
        X, y = data.to_arrays()
        acc_cols = [FULL.block(q)[0] + 4 for q in FULL.qids]
        pos_acc = X[y == 1][:, acc_cols].mean()
        neg_acc = X[y == 0][:, acc_cols].mean()
        # hit probabilities sit in [.75,.95] vs [.35,.55]; realized ratios
        # carry binomial noise but the means keep the full 0.4 gap
        assert neg_acc - pos_acc > 0.3

    def test_zero_separation_mixes_the_classes(self):
        data = synth_generate(200, 0.5, 0.0, seed=3)
        X, y = data.to_arrays()
        acc_cols = [FULL.block(q)[0] + 4 for q in FULL.qids]
        assert abs(X[y == 1][:, acc_cols].mean() - X[y == 0][:, acc_cols].mean()) < 0.02

    def test_validation(self):
        with pytest.raises(DataError, match="n must be"):
            synth_generate(5, 0.5, 0.2, 1)
        with pytest.raises(DataError):
            synth_generate(20, 0.0, 0.2, 1)
        with pytest.raises(DataError):
            synth_generate(20, 1.0, 0.2, 1)
        with pytest.raises(DataError):
            synth_generate(20, 0.5, 1.5, 1)
        with pytest.raises(DataError, match="single-class"):
            synth_generate(10, 0.01, 0.2, 1)


class TestSynthSession:
    def test_produces_a_valid_completed_session(self, manifest):
        log = synth_session(seed=4, manifest=manifest)
        assert log.completed
        assert log.variant.name == "Full"
        # construction already ran SessionLog validation; spot-check shape
        kinds = {e.kind.value for e in log.events}
        assert "QuestionStart" in kinds and "QuestionEnd" in kinds

    def test_extraction_round_trip_produces_full_vectors(self, manifest):
        log = synth_session(seed=9, manifest=manifest)
        vec = extract_features(log, manifest)
        assert vec.values.shape == (196,)
        assert np.all(np.isfinite(vec.values))

    def test_variant_sessions_only_visit_variant_questions(self, manifest):
        log = synth_session(seed=2, manifest=manifest, variant=YOUNG_7_8)
        qids = {e.qid for e in log.events}
        assert qids <= set(YOUNG_7_8.qids)
        vec = extract_features(log, manifest)
        assert vec.values.shape == (118,)

    def test_deterministic_for_a_seed(self, manifest):
        a = synth_session(seed=31, manifest=manifest)
        b = synth_session(seed=31, manifest=manifest)
        assert a.events == b.events
        assert a.participant == b.participant

    def test_keeps_a_supplied_participant(self, manifest):
        from conftest import make_participant

        person = make_participant(pid="keepme", age=12)
        log = synth_session(seed=1, manifest=manifest, participant=person)
        assert log.participant.id == "keepme"

    def test_timestamps_never_decrease(self, manifest):
        log = synth_session(seed=13, manifest=manifest)
        times = [e.timestamp for e in log.events]
        assert times == sorted(times)
