"""Stationary covariance matrix of (BEC mode, filtered cavity output).

The filtered output mode is

    a_filt(t) = int F(t - s) a_out(s) ds,   F(t) = sqrt(2/tau) exp(-(1/tau + i Omega) t) Theta(t),

with ``a_out = sqrt(2 kappa) a - a_in``. In the frequency domain (transform
``int dt e^{i w t}``) the response of ``(Q, P, X_filt, Y_filt)`` to the noise
vector ``n`` is ``-U(w) (M(w) + P_port)`` with ``M(w) = (i w + A)^-1`` and
``U(w) = diag(1, 1, sqrt(2 kappa) R(w))``, where ``R`` is the transform of
the real 2x2 kernel ``[[Re F, -Im F], [Im F, Re F]]``. Hence

    V = (1/2pi) int dw U (M + P_port) D (M + P_port)^dag U^dag.

The integrand at ``-w`` is the complex conjugate of the one at ``w``, so we
integrate ``2 Re`` over ``w >= 0``, after the change of variables
``w = tan(theta)`` which makes the half-line finite. Everything runs in units
of kappa.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConventionError, DomainError, NumericalError, UnstableError
from .gaussian import validate
from .node import LinearModel, is_stable
from .quadrature import integrate

# fixed by the vacuum calibration: a decoupled cavity must emit variance 1/2
SPECTRAL_NORM = 1.0 / (2.0 * math.pi)
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class FilterSpec:
    """Causal exponential filter. ``center`` is Omega [s^-1], ``tau`` the inverse bandwidth [s]."""

    center: float
    tau: float

    def __post_init__(self):
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise DomainError(f"filter tau must be positive and finite, got {self.tau!r}")

    @property
    def epsilon(self):
        return self.center * self.tau

    @classmethod
    def from_epsilon(cls, center, epsilon):
        """Build from ``epsilon = |Omega| tau`` at fixed center."""
        if center == 0:
            raise DomainError("epsilon does not determine tau when the filter center is 0")
        return cls(center, abs(epsilon) / abs(center))


@dataclass(frozen=True)
class NodeCM:
    """4x4 CM over ``(Q, P, X_filt, Y_filt)`` plus the quadrature error estimate."""

    cm: np.ndarray
    error: float
    n_intervals: int = 0


def _scaled(model):
    k = model.kappa
    return model.drift / k, model.diffusion / k, model.port * k


def _peaks(a, extra=()):
    pts = np.abs(np.linalg.eigvals(a).imag)
    pts = np.concatenate([pts, np.abs(np.asarray(extra, dtype=float))])
    pts = pts[pts > 0]
    return np.unique(np.arctan(pts))


def _transfer(a, w):
    """Batched ``(i w + A)^-1`` for a 1-D array of frequencies."""
    eye = np.eye(a.shape[0])
    return np.linalg.inv(1j * w[:, None, None] * eye + a[None, :, :])


def _filter_matrix(w, center, tau):
    """Batched 2x2 transform of the real quadrature kernel of F, times sqrt(2 kappa) (kappa = 1)."""
    amp = math.sqrt(2.0 / tau)
    fwd = amp / (1.0 / tau + 1j * center - 1j * w)
    conj = amp / (1.0 / tau - 1j * center - 1j * w)
    re = 0.5 * (fwd + conj)
    im = (fwd - conj) / 2j
    out = np.empty(w.shape + (2, 2), dtype=complex)
    out[:, 0, 0] = re
    out[:, 0, 1] = -im
    out[:, 1, 0] = im
    out[:, 1, 1] = re
    return math.sqrt(2.0) * out


def _check_stable(model):
    if not is_stable(model):
        raise UnstableError("drift matrix is not stable; no stationary state")


def _finish(raw, err, n, tol):
    asym = float(np.max(np.abs(raw - raw.T)))
    if asym > 10 * max(tol, err):
        raise NumericalError(f"integrated CM asymmetric by {asym:.3e}", achieved=asym)
    return 0.5 * (raw + raw.T), err, n


def filtered_node_cm(model: LinearModel, filt: FilterSpec, tol=DEFAULT_TOL, limit=4000) -> NodeCM:
    """Stationary CM of the BEC mode and the filtered output mode of one node.

    Raises:
        UnstableError: the model has no steady state.
        NumericalError: the quadrature budget ran out before reaching ``tol``.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    _check_stable(model)
    a, d, port = _scaled(model)
    center = filt.center / model.kappa
    tau = filt.tau * model.kappa

    def integrand(theta):
        w = np.tan(theta)
        jac = 1.0 / np.cos(theta) ** 2
        m = _transfer(a, w) + port
        u = np.zeros((w.size, 4, 4), dtype=complex)
        u[:, 0, 0] = u[:, 1, 1] = 1.0
        u[:, 2:, 2:] = _filter_matrix(w, center, tau)
        k = u @ m
        val = k @ d @ np.conj(np.swapaxes(k, 1, 2))
        return (2.0 * SPECTRAL_NORM) * jac[:, None, None] * val.real

    pts = _peaks(a, extra=[center, 1.0 / tau])
    raw, err, n = integrate(integrand, 0.0, 0.5 * math.pi, points=pts, epsabs=tol, limit=limit)
    cm, err, n = _finish(raw, err, n, tol)
    return NodeCM(cm, err, n)


def intracavity_spectral_cm(model: LinearModel, tol=DEFAULT_TOL, limit=4000):
    """``(1/2pi) int dw M D M^dag``: the unfiltered intracavity CM by quadrature.

    Returns ``(cm, error_estimate)``. Used to validate the quadrature against
    the Lyapunov solution independently of the filter and port terms.
    """
    _check_stable(model)
    a, d, _ = _scaled(model)

    def integrand(theta):
        w = np.tan(theta)
        jac = 1.0 / np.cos(theta) ** 2
        m = _transfer(a, w)
        val = m @ d @ np.conj(np.swapaxes(m, 1, 2))
        return (2.0 * SPECTRAL_NORM) * jac[:, None, None] * val.real

    raw, err, n = integrate(integrand, 0.0, 0.5 * math.pi, points=_peaks(a), epsabs=tol, limit=limit)
    cm, err, _ = _finish(raw, err, n, tol)
    return cm, err


def solve_lyapunov(a, d):
    """Solve ``A V + V A^T = -D`` through the vectorized (Kronecker) linear system."""
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    n = a.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(A V) = (A kron I) vec(V), vec(V A^T) = (I kron A) vec(V)
    op = np.kron(a, eye) + np.kron(eye, a)
    v = np.linalg.solve(op, -d.ravel()).reshape(n, n)
    return 0.5 * (v + v.T)


def lyapunov_steady_cm(model: LinearModel):
    """Intracavity steady-state CM from the Lyapunov equation (no filter, no port)."""
    _check_stable(model)
    return solve_lyapunov(model.drift / model.kappa, model.diffusion / model.kappa)


def check_physical(cm, what="covariance matrix"):
    rep = validate(cm)
    if not rep.physical:
        raise ConventionError(f"{what} violates the uncertainty relation (worst eigenvalue {rep.worst_eigenvalue:.3e})")
    return cm
