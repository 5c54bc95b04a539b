"""Covariance-matrix primitives for Gaussian states.

Conventions used everywhere in the package:

* quadrature ordering ``(x1, p1, x2, p2, ...)``;
* ``x = (a + a^dag)/sqrt(2)`` so the vacuum covariance matrix is ``I/2``;
* covariance matrices are plain ``numpy`` arrays of shape ``(2n, 2n)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StructuralError

SYMMETRY_RTOL = 1e-12
PHYSICAL_ATOL = 1e-9


def _as_cm(cm):
    cm = np.asarray(cm, dtype=float)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] % 2:
        raise StructuralError(f"covariance matrix must be square with even size, got shape {cm.shape}")
    return cm


def n_modes(cm):
    return _as_cm(cm).shape[0] // 2


def symplectic_form(n):
    """Block-diagonal symplectic form with 2x2 blocks ``[[0, 1], [-1, 0]]``."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class PhysicalityReport:
    symmetric: bool
    physical: bool
    worst_eigenvalue: float
    asymmetry: float

    def __bool__(self):
        return self.symmetric and self.physical


def validate(cm, atol=PHYSICAL_ATOL):
    """Check symmetry and the uncertainty relation ``V + i/2 Omega >= 0``.

    Args:
        cm: ``(2n, 2n)`` real matrix.
        atol: slack allowed on the smallest eigenvalue.

    Returns:
        PhysicalityReport. The input is never modified.
    """
    cm = _as_cm(cm)
    n = cm.shape[0] // 2
    scale = max(np.max(np.abs(cm)), 1.0)
    asym = float(np.max(np.abs(cm - cm.T)))
    symmetric = asym <= SYMMETRY_RTOL * scale
    sym = 0.5 * (cm + cm.T)
    herm = sym + 0.5j * symplectic_form(n)
    worst = float(np.min(np.linalg.eigvalsh(herm)))
    return PhysicalityReport(symmetric, worst >= -atol, worst, asym)


def symplectic_eigenvalues(cm):
    """Symplectic spectrum, ascending, vacuum value 1/2.

    These are the moduli of the eigenvalues of ``i Omega V``. With the
    Cholesky factor ``V = L L^T`` the same spectrum is that of the Hermitian
    matrix ``L^T (i Omega) L``, whose eigenvalues are perfectly conditioned;
    the direct non-Hermitian route loses half the digits near pure states.
    Eigenvalues come in +/- pairs and each pair contributes one value.
    """
    cm = _as_cm(cm)
    report = validate(cm)
    if not report.physical:
        raise DomainError(f"non-physical covariance matrix (worst eigenvalue {report.worst_eigenvalue:.3e})")
    n = cm.shape[0] // 2
    sym = 0.5 * (cm + cm.T)
    try:
        chol = np.linalg.cholesky(sym)
        ev = np.linalg.eigvalsh(chol.T @ (1j * symplectic_form(n)) @ chol)
    except np.linalg.LinAlgError:
        ev = np.linalg.eigvals(1j * symplectic_form(n) @ sym)
    mods = np.sort(np.abs(ev))
    return 0.5 * (mods[0::2] + mods[1::2])


def entropy_f(x):
    """``f(x) = (x+1)/2 log2((x+1)/2) - (x-1)/2 log2((x-1)/2)`` for ``x >= 1``.

    Values within 1e-9 below 1 are treated as exactly 1; anything lower is
    a domain error rather than a silent clamp.
    """
    x = float(x)
    if x < 1.0 - PHYSICAL_ATOL or not np.isfinite(x):
        raise DomainError(f"entropy_f needs x >= 1, got {x!r}")
    if x <= 1.0:
        return 0.0
    up = 0.5 * (x + 1.0)
    down = 0.5 * (x - 1.0)
    return up * math.log2(up) - down * math.log2(down)


def permute_modes(cm, order):
    """Reorder modes; ``order[k]`` is the old index of the new k-th mode (0-based)."""
    cm = _as_cm(cm)
    n = cm.shape[0] // 2
    order = [int(k) for k in order]
    if sorted(order) != list(range(n)):
        raise StructuralError(f"{order} is not a permutation of range({n})")
    idx = np.array([[2 * k, 2 * k + 1] for k in order]).ravel()
    return cm[np.ix_(idx, idx)].copy()


def direct_sum(*cms):
    size = sum(_as_cm(c).shape[0] for c in cms)
    out = np.zeros((size, size))
    k = 0
    for c in cms:
        m = c.shape[0]
        out[k:k + m, k:k + m] = c
        k += m
    return out


def extract_blocks(cm):
    """Split a two-mode CM into ``(V1, V2, V3)`` with ``V = [[V1, V3], [V3.T, V2]]``."""
    cm = _as_cm(cm)
    if cm.shape != (4, 4):
        raise StructuralError(f"extract_blocks needs a two-mode CM, got shape {cm.shape}")
    return cm[:2, :2].copy(), cm[2:, 2:].copy(), cm[:2, 2:].copy()


def assemble_blocks(v1, v2, v3):
    return np.block([[v1, v3], [np.asarray(v3).T, v2]])


def thermal_cm(nbar, n=1):
    return (nbar + 0.5) * np.eye(2 * n)
