"""Per-class metrics, quantile cutoffs, and the god-class detection rule."""

import numpy as np
import pytest

from godsplit.detection import (
    ClassMetrics,
    DetectionRule,
    FiveNumberSummary,
    class_cohesion,
    class_coupling,
    compute_class_metrics,
    detect_god_classes,
    metric_summary,
    quantile,
)
from godsplit.engine import SimilarityEngine

from helpers import StubEngine, god_system, tree_model


def test_class_cohesion_from_pair_values():
    table = {
        ("Client.send", "Client.recv"): 2.0,
        ("Client.send", "Client.close"): 4.0,
        ("Client.recv", "Client.close"): 6.0,
    }
    engine = StubEngine(tree_model(), table)
    assert class_cohesion(engine, "Client") == pytest.approx(4.0)


def test_class_cohesion_two_methods_is_the_pair_value():
    engine = StubEngine(tree_model(), {("Panel.show", "Panel.focus"): 1.7})
    assert class_cohesion(engine, "Panel") == pytest.approx(1.7)


def test_class_cohesion_absent_below_two_methods():
    engine = StubEngine(tree_model(), {})
    assert class_cohesion(engine, "Socket") is None  # one method
    assert class_cohesion(engine, "Writer") is None  # no methods


def test_class_cohesion_matches_double_loop_oracle():
    model = god_system()
    engine = SimilarityEngine(model)
    for cid in model.class_ids():
        methods = model.methods_of(cid)
        if len(methods) < 2:
            continue
        total = sum(engine.iss(a, b) for a in methods for b in methods if a != b)
        expected = total / (len(methods) * (len(methods) - 1))
        assert class_cohesion(engine, cid) == pytest.approx(expected, abs=1e-9)


def test_class_cohesion_invariant_under_method_order():
    model = god_system()
    engine = SimilarityEngine(model)
    ic = class_cohesion(engine, "Store")
    # same system, Store's methods declared in reverse order
    reordered = god_system()
    entities = list(reordered.entities.values())
    store = [e for e in entities if e.parent == "Store"]
    rest = [e for e in entities if e.parent != "Store"]
    from godsplit.model import CodeModel

    shuffled = CodeModel(rest + store[::-1], reordered.relationships, reordered.calls)
    assert class_cohesion(SimilarityEngine(shuffled), "Store") == pytest.approx(ic, abs=1e-12)


def test_class_coupling_counts_distinct_partners():
    model = tree_model(
        calls=[
            ("Client.send", "Socket.open"),
            ("Client.send", "View.draw"),
            ("Socket.open", "Client.recv"),
        ]
    )
    assert class_coupling(model, "Client") == 2  # Socket and View, Socket once


def test_class_coupling_isolated_class():
    assert class_coupling(tree_model(), "Writer") == 0


def test_class_coupling_relationship_only():
    model = tree_model(relationships=[("Client", "Socket", "generalization")])
    assert class_coupling(model, "Client") == 1
    assert class_coupling(model, "Socket") == 1


def test_class_coupling_rejects_non_class():
    with pytest.raises(ValueError):
        class_coupling(tree_model(), "Client.send")
    with pytest.raises(KeyError):
        class_coupling(tree_model(), "missing")


def test_metric_summary_values():
    s = metric_summary([1, 2, 3, 4])
    assert s.q3 == pytest.approx(3.25)
    assert s.q1 == pytest.approx(1.75)
    assert metric_summary([5]) == FiveNumberSummary(5, 5, 5, 5, 5)
    assert metric_summary([1, 2, 3, 4, 5]).median == 3
    with pytest.raises(ValueError):
        metric_summary([])


def test_summary_is_ordered():
    s = metric_summary([9.0, 1.0, 4.0, 2.0, 8.5, 8.5])
    assert s.min <= s.q1 <= s.median <= s.q3 <= s.max


def test_rule_matches_strictly():
    rule = DetectionRule(nom_cutoff=9.0, cbo_cutoff=6.0, ic_cutoff=1.22)
    assert rule.matches(ClassMetrics("X", "x", nom=22, cbo=10, ic=0.9))
    assert not rule.matches(ClassMetrics("X", "x", nom=9, cbo=10, ic=0.9))  # nom not above
    assert not rule.matches(ClassMetrics("X", "x", nom=22, cbo=6, ic=0.9))
    assert not rule.matches(ClassMetrics("X", "x", nom=22, cbo=10, ic=1.22))
    assert not rule.matches(ClassMetrics("X", "x", nom=22, cbo=10, ic=None))


def test_identical_metrics_detect_nothing():
    metrics = [ClassMetrics(f"C{i}", f"c{i}", nom=5, cbo=3, ic=1.0) for i in range(6)]
    rule = DetectionRule.from_metrics(metrics)
    assert rule.nom_cutoff == 5 and rule.cbo_cutoff == 3 and rule.ic_cutoff == 1.0
    assert [m for m in metrics if rule.matches(m)] == []


def test_detect_on_god_system_matches_rule_oracle():
    model = god_system()
    engine = SimilarityEngine(model)
    report = detect_god_classes(model, engine)

    # independent application of the rule over the computed metrics
    noms = [m.nom for m in report.metrics]
    cbos = [m.cbo for m in report.metrics]
    ics = [m.ic for m in report.metrics if m.ic is not None]
    nom_cut, cbo_cut, ic_cut = (np.quantile(v, 0.75) for v in (noms, cbos, ics))
    expected = [
        m.class_id
        for m in report.metrics
        if m.ic is not None and m.nom > nom_cut and m.cbo > cbo_cut and m.ic < ic_cut
    ]
    assert report.detected == expected == ["Hub"]
    assert report.rule.nom_cutoff == pytest.approx(nom_cut)


def test_detected_classes_have_at_least_two_methods():
    model = god_system()
    report = detect_god_classes(model, SimilarityEngine(model))
    for cid in report.detected:
        assert len(model.methods_of(cid)) >= 2


def test_raising_quartile_never_enlarges_qualified_set():
    model = god_system()
    engine = SimilarityEngine(model)
    low = detect_god_classes(model, engine, quartile=0.75)
    high = detect_god_classes(model, engine, quartile=0.9)

    def qualified(report):
        rule = report.rule
        return {
            m.class_id
            for m in report.metrics
            if m.nom > rule.nom_cutoff and m.cbo > rule.cbo_cutoff
        }

    assert qualified(high) <= qualified(low)


def test_small_classes_excluded_from_ic_distribution():
    model = god_system()
    report = detect_god_classes(model, SimilarityEngine(model))
    present = [m.ic for m in report.metrics if m.ic is not None]
    assert report.rule.ic_cutoff == pytest.approx(quantile(present, 0.75))
    util = next(m for m in report.metrics if m.class_id == "Util")
    assert util.ic is None


def test_detect_empty_model():
    from godsplit.model import CodeModel, Entity

    model = CodeModel([Entity("root", "package", "root")])
    report = detect_god_classes(model, SimilarityEngine(model))
    assert report.metrics == [] and report.detected == [] and report.rule is None


def test_compute_metrics_in_model_order():
    model = god_system()
    metrics = compute_class_metrics(model, SimilarityEngine(model))
    assert [m.class_id for m in metrics] == model.class_ids()
