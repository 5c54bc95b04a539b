"""Gaussian quantum discord and logarithmic negativity of a two-mode CM."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .gaussian import entropy_f, extract_blocks, permute_modes, symplectic_eigenvalues

CLAMP = 1e-9
EPS_MACHINE = float(np.finfo(float).eps)
EPS_BAND = 64 * math.sqrt(EPS_MACHINE)


@dataclass(frozen=True)
class MeasureResult:
    discord: float
    log_negativity: float
    s1: float
    s2: float
    s3: float
    s4: float
    lambda_plus: float
    lambda_minus: float
    branch: str
    eta_minus: float


def _det2(m):
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def invariants(cm):
    """Scaled local symplectic invariants ``(s1, s2, s3, s4)``; vacuum gives all ones except s3 = 0."""
    v1, v2, v3 = extract_blocks(cm)
    return 4 * _det2(v1), 4 * _det2(v2), 4 * _det2(v3), 16 * float(np.linalg.det(cm))


def _sqrt_clamped(x, what):
    if x < 0:
        if x < -CLAMP:
            raise NumericalError(f"{what} is negative ({x:.3e})")
        return 0.0
    return math.sqrt(x)


def symplectic_pair(s1, s2, s3, s4):
    """``(lambda_plus, lambda_minus)`` from the invariants, vacuum value 1."""
    s_delta = s1 + s2 + 2 * s3
    root = _sqrt_clamped(s_delta ** 2 - 4 * s4, "s_delta^2 - 4 s4")
    lam_p = math.sqrt(0.5 * (s_delta + root))
    return lam_p, _sqrt_clamped(0.5 * (s_delta - root), "lambda_-^2")


def discord_terms(s1, s2, s3, s4, lambdas=None):
    """Return ``(discord, lambda_plus, lambda_minus, epsilon, branch)`` from the invariants.

    Mode 1 (the ``s1`` block) is the measured mode. ``lambdas`` may supply
    the symplectic eigenvalues (vacuum 1) computed elsewhere; by default
    they come from the invariants.
    """
    lam_p, lam_m = lambdas if lambdas is not None else symplectic_pair(s1, s2, s3, s4)

    first = (s4 - s2 * s1) ** 2 <= (1 + s1) * s3 ** 2 * (s2 + s4)
    # the first branch divides by (s1 - 1)^2; a pure measured mode means a
    # product state, where both branches coincide and the second is finite
    if first and (s1 - 1) ** 2 > 1e-12:
        rad = s3 ** 2 + (s1 - 1) * (s4 - s2)
        # zero for a pure conditional state, where it is the difference of two
        # large terms; anything inside their rounding error is that zero
        if abs(rad) <= 64 * EPS_MACHINE * (s3 ** 2 + abs((s1 - 1) * (s4 - s2))):
            rad = 0.0
        inner = _sqrt_clamped(rad, "first-branch radicand")
        eps = (2 * s3 ** 2 + (s1 - 1) * (s4 - s2) + 2 * abs(s3) * inner) / (s1 - 1) ** 2
        branch = "branch1"
    else:
        inner = _sqrt_clamped(s3 ** 4 + (s4 - s2 * s1) ** 2 - 2 * s3 ** 2 * (s4 + s2 * s1),
                              "second-branch radicand")
        # (c - a + b - sqrt R)/(2 s1) multiplied through by its conjugate
        eps = 2 * s2 * s4 / (s2 * s1 - s3 ** 2 + s4 + inner)
        branch = "branch2"
    # near pure states the radicands cancel to zero and eps inherits a
    # sqrt(machine epsilon) error; inside that band eps < 1 is rounding
    if 1 - EPS_BAND * max(1.0, s1 * s2) <= eps < 1:
        eps = 1.0

    d = (entropy_f(math.sqrt(s1)) - entropy_f(lam_m) - entropy_f(lam_p)
         + entropy_f(_sqrt_clamped(eps, "epsilon")))
    if d < 0:
        if d < -CLAMP:
            raise NumericalError(f"discord evaluated negative ({d:.3e})")
        d = 0.0
    return d, lam_p, lam_m, eps, branch


def gaussian_discord(cm, measured_mode=1):
    """Gaussian discord with homodyne/heterodyne-optimal measurement on ``measured_mode``.

    Returns ``(discord, diagnostics)`` where diagnostics is a dict with the
    invariants, the symplectic eigenvalues and the branch taken.
    """
    cm = np.asarray(cm, dtype=float)
    if measured_mode == 2:
        cm = permute_modes(cm, (1, 0))
    elif measured_mode != 1:
        raise ValueError("measured_mode must be 1 or 2")
    s1, s2, s3, s4 = invariants(cm)
    # same values as symplectic_pair(), without its cancellation near pure states
    nu = 2 * symplectic_eigenvalues(cm)
    d, lam_p, lam_m, eps, branch = discord_terms(s1, s2, s3, s4, lambdas=(nu[1], nu[0]))
    return d, dict(s1=s1, s2=s2, s3=s3, s4=s4, lambda_plus=lam_p, lambda_minus=lam_m,
                   epsilon=eps, branch=branch)


def least_pt_eigenvalue(cm):
    """Smallest symplectic eigenvalue of the partial transpose (vacuum 1/2).

    Evaluated as ``det V / eta_+^2`` rather than ``(sigma - root)/2``: the
    two are equal, but the subtraction cancels for strongly correlated states.
    """
    v1, v2, v3 = extract_blocks(cm)
    sigma = _det2(v1) + _det2(v2) - 2 * _det2(v3)
    det = float(np.linalg.det(cm))
    root = _sqrt_clamped(sigma ** 2 - 4 * det, "sigma^2 - 4 det V")
    eta_p2 = 0.5 * (sigma + root)
    if eta_p2 <= 0:
        raise NumericalError("partially transposed CM has a non-positive symplectic invariant")
    return _sqrt_clamped(det / eta_p2, "eta_-^2")


def log_negativity(cm):
    eta = least_pt_eigenvalue(cm)
    if eta == 0:
        raise NumericalError("partially transposed CM has a zero symplectic eigenvalue")
    return max(0.0, -math.log(2 * eta))


def evaluate(cm, measured_mode=1):
    """Both measures plus diagnostics, packed in a MeasureResult."""
    d, diag = gaussian_discord(cm, measured_mode)
    eta = least_pt_eigenvalue(cm)
    en = max(0.0, -math.log(2 * eta)) if eta > 0 else math.inf
    return MeasureResult(d, en, diag["s1"], diag["s2"], diag["s3"], diag["s4"],
                         diag["lambda_plus"], diag["lambda_minus"], diag["branch"], eta)
