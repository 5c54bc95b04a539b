import numpy as np
import pytest

from becbell.errors import DomainError, StructuralError, UnstableError
from becbell.gaussian import validate
from becbell.pipeline import PipelineConfig, run_point
from becbell.sweep import AXES, Axis, SweepSpec, error_code, run_sweep


def test_axis_validation():
    with pytest.raises(StructuralError):
        Axis("bogus", 0, 1, 3)
    with pytest.raises(StructuralError):
        Axis("eta", 0, 1, 1)
    with pytest.raises(StructuralError):
        SweepSpec(axes=())
    with pytest.raises(StructuralError):
        SweepSpec(axes=(Axis("eta", 1, 0.5, 2), Axis("eta", 1, 0.5, 2)))
    with pytest.raises(StructuralError):
        SweepSpec(axes=(Axis("eta", 1, 0.5, 2),), outputs=("volume",))


def test_points_are_row_major():
    spec = SweepSpec(axes=(Axis("epsilon_1", 1, 2, 2), Axis("epsilon_2", 3, 5, 3)))
    pts = list(spec.points())
    assert [c for c, _ in pts] == [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]
    assert pts[4][1].filter_a.epsilon == 2 and pts[4][1].filter_b.epsilon == 4


@pytest.mark.parametrize("name", sorted(AXES))
def test_every_axis_changes_the_config(name):
    base = PipelineConfig()
    assert AXES[name](base, 0.37) != base


def test_sweep_matches_single_points():
    spec = SweepSpec(axes=(Axis("epsilon_1", 4.0, 8.0, 2), Axis("epsilon_2", 4.0, 8.0, 2)))
    res = run_sweep(spec)
    # identical nodes: A at epsilon=4 is the same solve as B at epsilon=4
    assert res.metadata["n_node_solves"] == 2
    for (coords, cfg), point in zip(spec.points(), res.points):
        single = run_point(cfg).measures
        assert point.measures.discord == single.discord
        assert validate(point.cm_ab).physical


def test_failures_are_recorded_not_raised():
    spec = SweepSpec(axes=(Axis("omega_1", -1.0, 0.0, 3),))
    res = run_sweep(spec)
    assert res.failures == [((0.0,), "domain")]
    surf = res.surface("discord")
    assert np.isnan(surf[-1]) and np.all(np.isfinite(surf[:-1]))


def test_unstable_points_flagged():
    spec = SweepSpec(axes=(Axis("drive", 3.0, 400.0, 2),))
    res = run_sweep(spec)
    assert res.points[0].stable and not res.points[1].stable
    assert res.points[1].error_code == "unstable"


def test_parallel_equals_serial():
    spec = SweepSpec(axes=(Axis("epsilon_1", 2.0, 10.0, 3), Axis("epsilon_2", 2.0, 10.0, 2)))
    a = run_sweep(spec, workers=1)
    b = run_sweep(spec, workers=3)
    assert a.coords == b.coords
    np.testing.assert_array_equal(a.surface("discord"), b.surface("discord"))
    np.testing.assert_array_equal(a.surface("log_negativity"), b.surface("log_negativity"))


def test_error_codes():
    assert error_code(UnstableError("x")) == "unstable"
    assert error_code(DomainError("x")) == "domain"
    assert error_code(ValueError("x")) == "error"


def test_coupling_off_gives_nothing():
    res = run_point(PipelineConfig(*(PipelineConfig().node_a.with_(coupling_omega_b=0.0),) * 2))
    assert res.measures.discord == pytest.approx(0.0, abs=1e-6)
    assert res.measures.log_negativity == 0.0


def test_node_exchange_swaps_the_measured_mode():
    # exchanging the filters of identical nodes at T = 1/2 exchanges the two BEC modes,
    # so one-way discord with mode 1 measured maps onto mode 2 measured
    axes = (Axis("epsilon_1", 2.0, 12.0, 3), Axis("epsilon_2", 2.0, 12.0, 3))
    base = PipelineConfig()
    d1 = run_sweep(SweepSpec(base, axes)).surface("discord")
    d2 = run_sweep(SweepSpec(base.with_(measured_mode=2), axes)).surface("discord")
    np.testing.assert_allclose(d1, d2.T, atol=1e-12)
    assert np.abs(d1 - d1.T).max() > 1e-3
    en = run_sweep(SweepSpec(base, axes)).surface("log_negativity")
    np.testing.assert_allclose(en, en.T, atol=1e-12)
