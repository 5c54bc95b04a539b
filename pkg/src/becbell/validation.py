"""Oracle suites behind ``becbell validate``.

Each suite returns a :class:`SuiteResult` with the worst deviation it saw,
so a failure report points at the offending quantity instead of a bare
boolean.
"""

import contextlib
from dataclasses import dataclass

import numpy as np

from . import bell
from .bell import BellConfig, TwoNodeState, bell_condition, general_dyne_oracle
from .gaussian import direct_sum, permute_modes
from .measures import gaussian_discord, log_negativity
from .node import LinearModel, NodeParams, build_linear_model, derive_node
from .oracles import RandomStateSpec, highprec_discord, make_tmsv, random_physical_cm
from .spectral import DEFAULT_TOL, FilterSpec, filtered_node_cm, intracavity_spectral_cm, lyapunov_steady_cm, solve_lyapunov


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: worst {self.worst:.3e} (threshold {self.threshold:.1e})"
        return text + (f" -- {self.detail}" if self.detail else "")


def random_stable_model(rng, n=4):
    """Random drift with spectrum shifted into the left half-plane, PSD diagonal diffusion."""
    a = rng.normal(size=(n, n))
    shift = np.max(np.linalg.eigvals(a).real) + rng.uniform(0.05, 1.0)
    a = a - shift * np.eye(n)
    d = np.diag(rng.uniform(0.1, 2.0, size=n))
    return LinearModel(a, d, np.zeros((n, n)), 1.0)


def random_two_node_state(seed):
    """Two independent random two-mode CMs, arranged as a two-node state."""
    a = random_physical_cm(RandomStateSpec(seed=2 * seed))
    b = random_physical_cm(RandomStateSpec(seed=2 * seed + 1))
    return TwoNodeState(permute_modes(direct_sum(a, b), bell.GLOBAL_ORDER))


def random_bell_config(rng):
    return BellConfig(rng.uniform(0.1, 0.9), rng.uniform(0.3, 1.0), rng.uniform(0.3, 1.0))


def suite_lyapunov(n_models=50, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_models):
        m = random_stable_model(rng)
        v = solve_lyapunov(m.drift, m.diffusion)
        res = np.abs(m.drift @ v + v @ m.drift.T + m.diffusion).max() / np.abs(m.diffusion).max()
        worst = max(worst, res)
    return SuiteResult("lyapunov residual", worst < 1e-10, worst, 1e-10)


def suite_calibration_a(tol=DEFAULT_TOL, n=5, threshold=1e-6):
    """Decoupled nodes emit vacuum through any filter.

    The grid is over (Omega, tau) with ``tau = epsilon / omega_B`` so that
    Omega = 0 is included.
    """
    params = NodeParams(coupling_omega_b=0.0)
    d = derive_node(params)
    m = build_linear_model(d)
    target = np.diag([d.n_c + 0.5, d.n_c + 0.5, 0.5, 0.5])
    worst = 0.0
    for center in np.linspace(-2.0, 0.0, n):
        for eps in np.linspace(0.5, 30.0, n):
            filt = FilterSpec(center * d.omega_b, eps / d.omega_b)
            cm = filtered_node_cm(m, filt, tol=tol).cm
            worst = max(worst, np.abs(cm - target).max())
    return SuiteResult("calibration A (vacuum output)", worst < threshold, worst, threshold)


def suite_calibration_b(tol=DEFAULT_TOL, n_models=50, seed=1):
    """Unfiltered frequency integral equals the Lyapunov solution."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_models):
        m = random_stable_model(rng)
        spec, _ = intracavity_spectral_cm(m, tol=tol)
        worst = max(worst, np.abs(spec - lyapunov_steady_cm(m)).max())
    return SuiteResult("calibration B (quadrature vs Lyapunov)", worst < 10 * tol, worst, 10 * tol)


def suite_bell_oracle(n_states=200, n_configs=20, seed=2, threshold=1e-9):
    rng = np.random.default_rng(seed)
    configs = [random_bell_config(rng) for _ in range(n_configs)]
    worst, where = 0.0, ""
    for i in range(n_states):
        state = random_two_node_state(i)
        for cfg in configs:
            diff = np.abs(bell_condition(state, cfg, check=False) - general_dyne_oracle(state, cfg))
            if diff.max() > worst:
                worst = float(diff.max())
                r, c = np.unravel_index(np.argmax(diff), diff.shape)
                where = f"state {i}, T={cfg.transmissivity:.3f}, entry ({r},{c})"
    return SuiteResult("Bell conditioning vs general-dyne oracle", worst < threshold, worst, threshold,
                       where if worst >= threshold else "")


def suite_measures(n_random=500, seed=3, threshold=1e-10):
    worst = 0.0
    for r in (0.1, 0.3, 0.5, 1.0):
        worst = max(worst, abs(log_negativity(make_tmsv(r)) - 2 * r))
    for nbar in (0.0, 0.5, 1.0, 3.0):
        prod = np.diag([nbar + 0.5] * 2 + [2 * nbar + 0.5] * 2)
        worst = max(worst, gaussian_discord(prod)[0], log_negativity(prod))
    for i in range(n_random):
        cm = random_physical_cm(RandomStateSpec(seed=seed * 100003 + i))
        worst = max(worst, abs(gaussian_discord(cm)[0] - highprec_discord(cm)))
    return SuiteResult("TMSV / product / high-precision discord", worst < threshold, worst, threshold)


@contextlib.contextmanager
def inject_fault(kind):
    """Test-only hook: corrupt one closed-form kernel to prove the suites catch it."""
    original = bell.k_matrices
    if kind == "k12_sign":
        def broken(gam, t):
            k11, k22, k12 = original(gam, t)
            k12 = k12.copy()
            k12[1, 1] = -k12[1, 1]
            return k11, k22, k12
        bell.k_matrices = broken
    elif kind is not None:
        raise ValueError(f"unknown fault {kind!r}")
    try:
        yield
    finally:
        bell.k_matrices = original


def run_all(tol=DEFAULT_TOL, fault=None, quick=False):
    """Run every suite; ``quick`` shrinks sample counts for smoke tests."""
    scale = 10 if quick else 1
    with inject_fault(fault):
        return [
            suite_lyapunov(50 // scale),
            suite_calibration_a(tol),
            suite_calibration_b(tol, 50 // scale),
            suite_bell_oracle(200 // scale, 20 // (2 if quick else 1)),
            suite_measures(500 // scale),
        ]
