import math

import numpy as np
import pytest

from becbell.errors import DomainError, UnstableError
from becbell.node import LinearModel, NodeParams, build_linear_model, derive_node
from becbell.oracles import augmented_filtered_cm
from becbell.spectral import (FilterSpec, check_physical, filtered_node_cm, intracavity_spectral_cm,
                              lyapunov_steady_cm, solve_lyapunov)
from becbell.validation import random_stable_model


@pytest.fixture(scope="module")
def decoupled():
    d = derive_node(NodeParams(coupling_omega_b=0.0))
    return d, build_linear_model(d)


@pytest.mark.parametrize("center", [-2.0, -1.0, -0.3, 0.0, 0.7])
@pytest.mark.parametrize("eps", [0.5, 8.0, 30.0])
def test_decoupled_node_emits_vacuum(decoupled, center, eps):
    d, m = decoupled
    cm = filtered_node_cm(m, FilterSpec(center * d.omega_b, eps / d.omega_b)).cm
    np.testing.assert_allclose(cm, np.diag([d.n_c + 0.5, d.n_c + 0.5, 0.5, 0.5]), atol=1e-7)


@pytest.mark.parametrize("seed", range(5))
def test_unfiltered_integral_matches_lyapunov(seed):
    m = random_stable_model(np.random.default_rng(seed))
    spec, err = intracavity_spectral_cm(m, tol=1e-10)
    np.testing.assert_allclose(spec, lyapunov_steady_cm(m), atol=1e-9)
    assert err < 1e-9


def test_lyapunov_solver_residual(rng):
    for _ in range(20):
        m = random_stable_model(rng, n=6)
        v = solve_lyapunov(m.drift, m.diffusion)
        assert np.abs(m.drift @ v + v @ m.drift.T + m.diffusion).max() < 1e-10


@pytest.mark.parametrize("center, eps", [(-1.0, 8.0), (-1.0, 0.5), (-0.4, 3.0), (-2.0, 30.0), (1.0, 8.0)])
def test_filtered_cm_matches_augmented_oracle(ref_node, ref_model, center, eps):
    filt = FilterSpec.from_epsilon(center * ref_node.omega_b, eps)
    quad = filtered_node_cm(ref_model, filt, tol=1e-10).cm
    np.testing.assert_allclose(quad, augmented_filtered_cm(ref_model, filt), atol=1e-8)


def test_reference_node_cm_is_physical(ref_node, ref_model):
    cm = filtered_node_cm(ref_model, FilterSpec.from_epsilon(-ref_node.omega_b, 8.0)).cm
    check_physical(cm)
    assert np.allclose(cm, cm.T)


def test_broadband_filter_tracks_intracavity_field(ref_node, ref_model):
    # as tau -> 0 the filtered mode reduces to sqrt(2 kappa tau)-weighted output: vacuum dominated
    filt = FilterSpec(-ref_node.omega_b, 1e-3 / ref_node.kappa)
    cm = filtered_node_cm(ref_model, filt).cm
    np.testing.assert_allclose(cm[2:, 2:], 0.5 * np.eye(2), atol=5e-3)
    np.testing.assert_allclose(cm[:2, :2], lyapunov_steady_cm(ref_model)[:2, :2], rtol=1e-9)


def test_halving_tolerance_converges(ref_node, ref_model):
    filt = FilterSpec.from_epsilon(-ref_node.omega_b, 8.0)
    a = filtered_node_cm(ref_model, filt, tol=1e-7)
    b = filtered_node_cm(ref_model, filt, tol=5e-8)
    assert np.abs(a.cm - b.cm).max() < 1e-7
    assert a.error <= 1e-7 and b.error <= 5e-8


def test_continuity_in_epsilon(ref_node, ref_model):
    eps = np.linspace(7.9, 8.1, 5)
    cms = [filtered_node_cm(ref_model, FilterSpec.from_epsilon(-ref_node.omega_b, e)).cm for e in eps]
    jumps = [np.abs(b - a).max() for a, b in zip(cms, cms[1:])]
    assert max(jumps) < 1e-2
    assert max(jumps) / min(jumps) < 3


def test_filter_spec_validation():
    with pytest.raises(DomainError):
        FilterSpec(1.0, 0.0)
    with pytest.raises(DomainError):
        FilterSpec.from_epsilon(0.0, 8.0)
    f = FilterSpec.from_epsilon(-2.0, 8.0)
    assert f.tau == 4.0 and f.epsilon == -8.0


def test_unstable_model_rejected():
    m = LinearModel(np.diag([1.0, -1, -1, -1]), np.eye(4), np.zeros((4, 4)), 1.0)
    with pytest.raises(UnstableError):
        filtered_node_cm(m, FilterSpec(1.0, 1.0))
    with pytest.raises(UnstableError):
        lyapunov_steady_cm(m)


def test_tol_must_be_positive(ref_model):
    with pytest.raises(DomainError):
        filtered_node_cm(ref_model, FilterSpec(1.0, 1.0), tol=0.0)
