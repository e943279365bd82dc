"""Estimator front ends: sklearn parameter discipline, fitted attributes."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from godsplit.decomposition import ResponsibilityGraph, ThresholdDecomposer
from godsplit.detection import GodClassDetector

from helpers import god_system, tree_model

BLOCK_MATRIX = np.array(
    [
        [0.0, 5.0, 0.1, 0.1],
        [5.0, 0.0, 0.1, 0.1],
        [0.1, 0.1, 0.0, 5.0],
        [0.1, 0.1, 5.0, 0.0],
    ]
)


def test_detector_finds_hub():
    detector = GodClassDetector()
    flags = detector.fit_predict(god_system())
    assert detector.detected_ == ["Hub"]
    assert flags.dtype == bool
    assert dict(zip(detector.classes_, flags))["Hub"]
    assert sum(flags) == 1


def test_detector_get_set_params_and_clone():
    detector = GodClassDetector(quartile=0.9, weights={"inner": 1.6}, tapping="clamp")
    params = detector.get_params()
    assert params["quartile"] == 0.9
    assert params["weights"] == {"inner": 1.6}
    cloned = clone(detector)
    assert cloned.get_params() == params
    detector.set_params(quartile=0.8)
    assert detector.quartile == 0.8


def test_detector_predict_requires_fit():
    with pytest.raises(NotFittedError):
        GodClassDetector().predict()


def test_detector_predict_rejects_other_model():
    detector = GodClassDetector().fit(god_system())
    with pytest.raises(ValueError):
        detector.predict(tree_model())
    assert detector.predict().sum() == 1


def test_detector_rejects_non_model_input():
    with pytest.raises(TypeError):
        GodClassDetector().fit(np.zeros((3, 3)))


def test_detector_weight_params_flow_into_engine():
    detector = GodClassDetector(weights={"generalization": 1.9}, call_multiplier=3.0).fit(god_system())
    assert detector.engine_.weights.generalization == 1.9
    assert detector.engine_.weights.same_class_call_multiplier == 3.0


def test_decomposer_on_block_matrix():
    labels = ThresholdDecomposer(threshold=1.0).fit_predict(BLOCK_MATRIX)
    assert list(labels) == [0, 0, 1, 1]


def test_decomposer_defaults_to_mean_threshold():
    decomposer = ThresholdDecomposer().fit(BLOCK_MATRIX)
    assert decomposer.threshold_ == pytest.approx(np.mean([5.0, 0.1, 0.1, 0.1, 0.1, 5.0]))
    assert decomposer.n_groups_ == 2
    assert decomposer.removed_edges_ == 4


def test_decomposer_enforces_interval():
    with pytest.raises(ValueError):
        ThresholdDecomposer(threshold=100.0).fit(BLOCK_MATRIX)
    loose = ThresholdDecomposer(threshold=100.0, enforce_interval=False).fit(BLOCK_MATRIX)
    assert loose.n_groups_ == 4


def test_decomposer_accepts_graph():
    graph = ResponsibilityGraph.from_weights(
        "Client",
        ["Client.send", "Client.recv", "Client.close"],
        {
            ("Client.send", "Client.recv"): 5.67,
            ("Client.send", "Client.close"): 1.24,
            ("Client.recv", "Client.close"): 1.59,
        },
    )
    decomposer = ThresholdDecomposer(threshold=2.0).fit(graph)
    assert decomposer.groups_ == [["Client.send", "Client.recv"], ["Client.close"]]
    assert list(decomposer.labels_) == [0, 0, 1]


def test_decomposer_validates_matrix():
    with pytest.raises(ValueError):
        ThresholdDecomposer().fit(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        ThresholdDecomposer().fit(np.array([[0.0]]))
    lopsided = BLOCK_MATRIX.copy()
    lopsided[0, 1] = 9.0
    with pytest.raises(ValueError):
        ThresholdDecomposer().fit(lopsided)


def test_decomposer_clone_roundtrip():
    decomposer = ThresholdDecomposer(threshold=1.5, enforce_interval=False)
    assert clone(decomposer).get_params() == decomposer.get_params()
