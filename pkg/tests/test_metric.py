import numpy as np
import pytest

from ttpkit import metric
from ttpkit.errors import FormatError, MetricViolationError, RestrictedBoundsError
from ttpkit.metric import KTCInstance, MetricInstance


def test_single_vertex_is_valid():
    assert metric.check_metric(MetricInstance([[0]])) == []


def test_asymmetry_reported():
    m = MetricInstance([[0, 1], [2, 0]])
    kinds = [v.kind for v in metric.check_metric(m)]
    assert "asymmetry" in kinds


def test_triangle_violation_reported():
    d = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    report = metric.check_metric(MetricInstance(d))
    assert any(v.kind == "triangle" for v in report)
    assert any("5" in v.detail for v in report)


def test_negative_and_diagonal_reported():
    report = metric.check_metric(MetricInstance([[0, -1], [-1, 1]]))
    kinds = {v.kind for v in report}
    assert "negative" in kinds and "diagonal" in kinds


def test_generator_deterministic():
    a = metric.random_restricted_ktc(7, 5, 3, 10)
    b = metric.random_restricted_ktc(7, 5, 3, 10)
    assert a == b
    assert metric.instance_to_text(a) == metric.instance_to_text(b)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("n,k,wmax", [(5, 3, 10), (9, 4, 5), (12, 3, 2)])
def test_generator_postconditions(seed, n, k, wmax):
    inst = metric.random_restricted_ktc(seed, n, k, wmax)
    assert metric.check_metric(inst.metric) == []
    legs = np.delete(inst.dist[inst.depot], inst.depot)
    assert legs.min() >= 1 and legs.max() <= wmax


def test_generator_rejects_bad_inputs():
    with pytest.raises(ValueError):
        metric.random_restricted_ktc(0, 1, 3, 10)
    with pytest.raises(ValueError):
        metric.random_restricted_ktc(0, 5, 3, 0)


def test_roundtrip(tmp_path):
    inst = metric.random_restricted_ktc(11, 6, 3, 8)
    path = tmp_path / "inst.ktc"
    metric.save_instance(inst, path)
    assert metric.load_instance(path) == inst


def test_load_shape_error():
    text = "KTC 1\nn=3 k=3 depot=1 restricted=0 wmax=0\n0 1 1\n1 0 1\n"
    with pytest.raises(FormatError, match="3 matrix rows"):
        metric.instance_from_text(text)


def test_load_header_error():
    with pytest.raises(FormatError, match="header"):
        metric.instance_from_text("KTX 9\n")


def test_load_metric_violation():
    text = "KTC 1\nn=2 k=3 depot=1 restricted=0 wmax=0\n0 2\n1 0\n"
    with pytest.raises(MetricViolationError):
        metric.instance_from_text(text)


def test_load_restricted_violation():
    text = "KTC 1\nn=2 k=3 depot=1 restricted=1 wmax=5\n0 0\n0 0\n"
    with pytest.raises(RestrictedBoundsError):
        metric.instance_from_text(text)


def test_restricted_bounds_enforced_on_construction():
    with pytest.raises(RestrictedBoundsError):
        KTCInstance(MetricInstance([[0, 7], [7, 0]]), depot=0, k=3, restricted=True, wmax=5)
