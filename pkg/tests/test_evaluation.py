"""Entailment decision rule, threshold tuning, implicitness scoring, baselines."""

import math

import numpy as np
import pytest

from dualsem.data import EisPair, to_eis_pairs_from_inli, to_rte_instances
from dualsem.encoders import DualEmbedding, DualEncoder, EncoderSpec, ToyConfig
from dualsem.errors import EvaluationError
from dualsem.evaluation import (
    ENTAILMENT,
    NON_ENTAILMENT,
    RTE_CLASS_ORDER,
    ScoredInstance,
    eis_evaluate,
    eis_predict,
    eis_report_json,
    imp_score,
    length_baseline,
    length_baseline_evaluate,
    report_from_scores,
    rte_evaluate,
    rte_predict,
    rte_report_json,
    rte_score,
    tune_threshold,
)
from dualsem.synthetic import make_synthetic_corpus
from dualsem.tokenization import WhitespaceTokenizer


def unit_dual(explicit, implicit):
    return DualEmbedding(explicit=np.array(explicit, float), implicit=np.array(implicit, float))


def premise_and_hypothesis(cos_explicit, cos_implicit):
    """A premise dual and a hypothesis vector with the two prescribed cosines."""
    premise = unit_dual([1, 0, 0, 0], [0, 1, 0, 0])
    rest = math.sqrt(max(0.0, 1.0 - cos_explicit**2 - cos_implicit**2))
    hypothesis = np.array([cos_explicit, cos_implicit, rest, 0.0])
    return premise, hypothesis


@pytest.fixture(scope="module")
def toy_model():
    split = make_synthetic_corpus(seed=0, n_samples=12, vocab_size=40)
    texts = []
    for sample in split:
        texts.append(sample.premise)
        texts.extend(sample.hypotheses().values())
    tokenizer = WhitespaceTokenizer.build(texts)
    spec = EncoderSpec(
        architecture="cross",
        embedding_dim=32,
        max_sequence_length=32,
        toy=ToyConfig(layers=1, heads=4, hidden_size=32, ffn_size=64),
    )
    return DualEncoder.build_toy(spec, tokenizer, seed=0), split


class TestRteDecision:
    def test_explicit_view_wins(self):
        premise, hyp = premise_and_hypothesis(0.9, 0.1)
        assert rte_score(premise, hyp) == pytest.approx(0.9)
        assert rte_predict(premise, hyp, gamma=0.5) == ENTAILMENT

    def test_boundary_is_non_entailment(self):
        premise, hyp = premise_and_hypothesis(0.5, 0.5)
        assert rte_predict(premise, hyp, gamma=0.5) == NON_ENTAILMENT

    def test_implicit_view_can_decide(self):
        premise, hyp = premise_and_hypothesis(-0.2, 0.6)
        assert rte_score(premise, hyp) == pytest.approx(0.6)
        assert rte_predict(premise, hyp, gamma=0.5) == ENTAILMENT

    def test_monotone_in_gamma(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            premise = unit_dual(rng.normal(size=4), rng.normal(size=4))
            hyp = rng.normal(size=4)
            labels = [rte_predict(premise, hyp, g) for g in np.linspace(-1, 1, 41)]
            # Raising gamma can only flip entailment to non-entailment.
            switched = labels.index(NON_ENTAILMENT) if NON_ENTAILMENT in labels else len(labels)
            assert all(lab == ENTAILMENT for lab in labels[:switched])
            assert all(lab == NON_ENTAILMENT for lab in labels[switched:])

    def test_zero_vector_rejected(self):
        premise = unit_dual([1, 0, 0, 0], [0, 1, 0, 0])
        with pytest.raises(ValueError):
            rte_score(premise, np.zeros(4))


def dense_sweep_accuracy(scores, golds, n_points=10_001):
    grid = np.linspace(-1.0, 1.0, n_points)
    scores = np.asarray(scores)
    gold = np.array([g == ENTAILMENT for g in golds])
    predictions = scores[None, :] > grid[:, None]
    return (predictions == gold[None, :]).sum(axis=1).max() / len(scores)


class TestTuneThreshold:
    def test_midpoint_between_separable_scores(self):
        result = tune_threshold([(0.9, ENTAILMENT), (0.1, NON_ENTAILMENT)])
        assert result.gamma == pytest.approx(0.5)
        assert result.accuracy == 1.0

    def test_inverted_scores_hit_extreme(self):
        result = tune_threshold([(0.1, ENTAILMENT), (0.9, NON_ENTAILMENT)])
        assert result.accuracy == 0.5
        assert result.gamma == -1.0  # tie between extremes, smallest wins

    def test_constant_scores_yield_class_prior(self):
        scores = [(0.3, ENTAILMENT)] * 3 + [(0.3, NON_ENTAILMENT)] * 7
        result = tune_threshold(scores)
        assert result.accuracy == 0.7

    def test_matches_dense_sweep(self):
        # Scores live on a 1e-3 grid so every accuracy plateau is wide enough
        # for the dense sweep to sample it; the two maxima must then agree.
        rng = np.random.default_rng(42)
        for _ in range(20):
            n = int(rng.integers(5, 60))
            scores = np.round(rng.uniform(-1, 1, size=n), 3)
            golds = [ENTAILMENT if rng.random() < 0.5 else NON_ENTAILMENT for _ in range(n)]
            if len(set(golds)) < 2:
                continue
            result = tune_threshold(list(zip(scores, golds)))
            assert result.accuracy == dense_sweep_accuracy(scores, golds)

    def test_beats_every_candidate(self):
        rng = np.random.default_rng(7)
        scores = rng.uniform(-1, 1, size=30)
        golds = [ENTAILMENT if rng.random() < 0.4 else NON_ENTAILMENT for _ in range(30)]
        result = tune_threshold(list(zip(scores, golds)))
        gold = np.array([g == ENTAILMENT for g in golds])
        for gamma in np.linspace(-1, 1, 201):
            candidate_acc = ((scores > gamma) == gold).mean()
            assert result.accuracy >= candidate_acc

    def test_empty_rejected(self):
        with pytest.raises(EvaluationError):
            tune_threshold([])

    def test_single_class_rejected(self):
        with pytest.raises(EvaluationError):
            tune_threshold([(0.2, ENTAILMENT), (0.4, ENTAILMENT)])

    def test_unknown_label_rejected(self):
        with pytest.raises(EvaluationError):
            tune_threshold([(0.2, "maybe"), (0.4, ENTAILMENT)])


def scored(score, origin):
    gold = ENTAILMENT if origin in ("explicit-entailment", "implied-entailment") else NON_ENTAILMENT
    return ScoredInstance(score=score, gold=gold, origin=origin)


class TestRteReport:
    def test_all_correct(self):
        items = [
            scored(0.9, "explicit-entailment"),
            scored(0.8, "implied-entailment"),
            scored(0.1, "neutral"),
            scored(0.0, "contradiction"),
        ]
        report = report_from_scores(items, gamma=0.5)
        assert all(report.per_class[o] == 1.0 for o in RTE_CLASS_ORDER)
        assert report.average == 1.0

    def test_forced_all_entailment(self):
        items = [scored(0.5, origin) for origin in RTE_CLASS_ORDER]
        report = report_from_scores(items, gamma=-1.0)
        assert report.per_class["explicit-entailment"] == 1.0
        assert report.per_class["implied-entailment"] == 1.0
        assert report.per_class["neutral"] == 0.0
        assert report.per_class["contradiction"] == 0.0
        assert report.average == 0.5

    def test_absent_class_warns_and_is_excluded(self):
        items = [
            scored(0.9, "explicit-entailment"),
            scored(0.8, "implied-entailment"),
            scored(0.1, "neutral"),
        ]
        with pytest.warns(UserWarning, match="contradiction"):
            report = report_from_scores(items, gamma=0.5)
        assert report.per_class["contradiction"] is None
        assert report.average == pytest.approx(1.0)

    def test_average_recomputes_from_classes(self):
        rng = np.random.default_rng(3)
        items = [
            scored(float(rng.uniform(-1, 1)), origin)
            for origin in RTE_CLASS_ORDER
            for _ in range(rng.integers(1, 9))
        ]
        report = report_from_scores(items, gamma=0.2)
        values = [report.per_class[o] for o in RTE_CLASS_ORDER]
        assert report.average == pytest.approx(sum(values) / 4)

    def test_model_evaluation_smoke(self, toy_model):
        model, split = toy_model
        report = rte_evaluate(model, to_rte_instances(split), gamma=0.0)
        assert set(report.per_class) == set(RTE_CLASS_ORDER)
        assert all(0.0 <= v <= 1.0 for v in report.per_class.values())
        assert 0.0 <= report.average <= 1.0

    def test_json_shape(self):
        items = [scored(0.5, origin) for origin in RTE_CLASS_ORDER]
        payload = rte_report_json(report_from_scores(items, gamma=0.25))
        assert set(payload) == {"rte", "gamma"}
        assert set(payload["rte"]) == {"exp", "imp", "neu", "con", "avg"}
        assert payload["gamma"] == 0.25

    def test_json_marks_absent_class_null(self):
        items = [
            scored(0.9, "explicit-entailment"),
            scored(0.8, "implied-entailment"),
            scored(0.1, "neutral"),
        ]
        with pytest.warns(UserWarning):
            payload = rte_report_json(report_from_scores(items, gamma=0.5))
        assert payload["rte"]["con"] is None


class TestImpScore:
    def test_identical_views(self):
        assert imp_score(unit_dual([1, 0], [2, 0])) == pytest.approx(0.0)

    def test_orthogonal_views(self):
        assert imp_score(unit_dual([1, 0], [0, 1])) == pytest.approx(1.0)

    def test_antipodal_views(self):
        assert imp_score(unit_dual([1, 0], [-1, 0])) == pytest.approx(2.0)

    def test_scale_invariant(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            e, i = rng.normal(size=5), rng.normal(size=5)
            base = imp_score(unit_dual(e, i))
            assert imp_score(unit_dual(3.7 * e, 0.01 * i)) == pytest.approx(base)

    def test_zero_view_rejected_at_construction(self):
        with pytest.raises(ValueError):
            unit_dual([0, 0], [1, 0])


class TestEisPredict:
    def test_more_implicit_first(self):
        s1 = unit_dual([1, 0, 0], [0, 1, 0])  # imp 1.0
        s2 = unit_dual([1, 0, 0], [1, 1, 0])  # imp 1 - 1/sqrt(2)
        assert eis_predict(s1, s2) == 1
        assert eis_predict(s2, s1) == 2

    def test_tie_resolves_to_one(self):
        s = unit_dual([1, 0], [0, 1])
        assert eis_predict(s, s) == 1

    def test_antisymmetric_when_scores_differ(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            s1 = unit_dual(rng.normal(size=4), rng.normal(size=4))
            s2 = unit_dual(rng.normal(size=4), rng.normal(size=4))
            if imp_score(s1) == imp_score(s2):
                continue
            assert {eis_predict(s1, s2), eis_predict(s2, s1)} == {1, 2}

    def test_model_evaluation_smoke(self, toy_model):
        model, split = toy_model
        pairs = to_eis_pairs_from_inli(split, seed=0)
        report = eis_evaluate(model, pairs)
        assert report.n_pairs == len(pairs)
        assert 0.0 <= report.accuracy <= 1.0
        assert eis_report_json(report) == {"eis": {"accuracy": report.accuracy}}

    def test_empty_pairs_rejected(self, toy_model):
        model, _ = toy_model
        with pytest.raises(EvaluationError):
            eis_evaluate(model, [])


class TestLengthBaseline:
    def test_longer_side_wins(self):
        assert length_baseline(EisPair(s1="a bb", s2="a", gold_more_implicit=1)) == 1
        assert length_baseline(EisPair(s1="a", s2="a bb", gold_more_implicit=2)) == 2

    def test_tie_resolves_to_one(self):
        assert length_baseline(EisPair(s1="abc", s2="xyz", gold_more_implicit=1)) == 1

    def test_trims_whitespace(self):
        assert length_baseline(EisPair(s1="  ab  ", s2="abc", gold_more_implicit=2)) == 2

    def test_evaluate_counts_correct_pairs(self):
        pairs = [
            EisPair(s1="a long premise sentence", s2="short", gold_more_implicit=1),
            EisPair(s1="short", s2="a long premise sentence", gold_more_implicit=2),
            EisPair(s1="tiny", s2="much longer text here", gold_more_implicit=1),
        ]
        report = length_baseline_evaluate(pairs)
        assert report.accuracy == pytest.approx(2 / 3)
        assert report.n_pairs == 3

    def test_deterministic(self):
        pairs = [
            EisPair(s1=f"sentence number {i}", s2=f"s{i}", gold_more_implicit=1)
            for i in range(10)
        ]
        assert length_baseline_evaluate(pairs) == length_baseline_evaluate(pairs)
