"""Bell-like detection on the two optical modes and the conditional BEC-BEC state.

Global mode ordering of the two-node state is ``(BEC_A, BEC_B, opt_A, opt_B)``.
The optical modes are mixed on a beam splitter of transmissivity T,

    X1 = sqrt(T) X_B - sqrt(1-T) X_A,    X2 = sqrt(T) X_A + sqrt(1-T) X_B   (same for Y),

and homodyne detectors of efficiency eta_1, eta_2 read X1 and Y2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMeasurementError, DomainError, StructuralError
from .gaussian import direct_sum, permute_modes
from .spectral import check_physical

GLOBAL_ORDER = (0, 2, 1, 3)  # (BEC_A, opt_A, BEC_B, opt_B) -> (BEC_A, BEC_B, opt_A, opt_B)


@dataclass(frozen=True)
class BellConfig:
    transmissivity: float = 0.5
    eta1: float = 1.0
    eta2: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.transmissivity < 1.0:
            raise DomainError(f"transmissivity must lie in (0, 1), got {self.transmissivity!r}")
        for name in ("eta1", "eta2"):
            eta = getattr(self, name)
            if not 0.0 < eta <= 1.0:
                raise DomainError(f"{name} must lie in (0, 1], got {eta!r}")


@dataclass(frozen=True)
class TwoNodeState:
    """8x8 CM in the ordering ``(BEC_A, BEC_B, opt_A, opt_B)``."""

    cm: np.ndarray

    def __post_init__(self):
        if np.shape(self.cm) != (8, 8):
            raise StructuralError(f"two-node state needs an 8x8 CM, got {np.shape(self.cm)}")

    @property
    def bec(self):
        """A': reduced CM of the two BEC modes."""
        return self.cm[:4, :4]

    @property
    def correlations(self):
        """C = (C1 C2): BEC rows against the optical columns."""
        return self.cm[:4, 4:]

    @property
    def c1(self):
        return self.cm[:4, 4:6]

    @property
    def c2(self):
        return self.cm[:4, 6:8]

    @property
    def optics(self):
        """B': reduced CM of the two optical modes."""
        return self.cm[4:, 4:]

    @property
    def b1(self):
        return self.cm[4:6, 4:6]

    @property
    def b2(self):
        return self.cm[6:8, 6:8]

    @property
    def w(self):
        """Cross-correlation block between opt_A (rows) and opt_B (columns)."""
        return self.cm[4:6, 6:8]

    @classmethod
    def from_blocks(cls, bec, c, optics):
        return cls(np.block([[bec, c], [np.asarray(c).T, optics]]))


def assemble_two_node(cm_a, cm_b):
    """Combine two independent node CMs, each ordered ``(BEC, opt)``."""
    cm_a = getattr(cm_a, "cm", cm_a)
    cm_b = getattr(cm_b, "cm", cm_b)
    for cm in (cm_a, cm_b):
        if np.shape(cm) != (4, 4):
            raise StructuralError("node CMs must be 4x4")
        check_physical(cm, "node CM")
    return TwoNodeState(permute_modes(direct_sum(cm_a, cm_b), GLOBAL_ORDER))


def gamma_entries(state: TwoNodeState, cfg: BellConfig):
    """``(gamma1, gamma2, gamma3)``: noisy covariance of the measured pair (X1, Y2).

    The detector noise is ``(1 - eta)/(2 eta)``, i.e. vacuum variance 1/2
    admixed by the loss and rescaled by 1/eta.
    """
    t = cfg.transmissivity
    r = math.sqrt(t * (1 - t))
    a1, a3, a2 = state.b1[0, 0], state.b1[0, 1], state.b1[1, 1]
    p1, p3, p2 = state.b2[0, 0], state.b2[0, 1], state.b2[1, 1]
    w = state.w
    b1, b2, b3, b4 = w[0, 0], w[1, 1], w[0, 1], w[1, 0]
    g1 = (1 - t) * a1 + t * p1 - 2 * r * b1 + (1 - cfg.eta1) / (2 * cfg.eta1)
    g2 = t * a2 + (1 - t) * p2 + 2 * r * b2 + (1 - cfg.eta2) / (2 * cfg.eta2)
    g3 = r * (p3 - a3) - (1 - t) * b3 + t * b4
    return g1, g2, g3


def gamma_matrix(state: TwoNodeState, cfg: BellConfig):
    g1, g2, g3 = gamma_entries(state, cfg)
    gam = np.array([[g1, g3], [g3, g2]])
    det = g1 * g2 - g3 * g3
    if not det > 1e-12 * (abs(g1 * g2) + g3 * g3):
        raise DegenerateMeasurementError(f"det Gamma = {det:.3e}: measurement is degenerate")
    return gam


def k_matrices(gam, t):
    """Conditioning kernels ``K11, K22, K12`` (``K21 = K12.T``)."""
    g1, g2, g3 = gam[0, 0], gam[1, 1], gam[0, 1]
    r = math.sqrt(t * (1 - t))
    k11 = np.array([[(1 - t) * g2, r * g3], [r * g3, t * g1]])
    k22 = np.array([[t * g2, -r * g3], [-r * g3, (1 - t) * g1]])
    k12 = np.array([[-r * g2, (1 - t) * g3], [-t * g3, r * g1]])
    return k11, k22, k12


def bell_condition(state: TwoNodeState, cfg: BellConfig, check=True):
    """Conditional 4x4 CM of ``(BEC_A, BEC_B)`` after the Bell-like detection.

    Raises:
        DegenerateMeasurementError: Gamma is singular.
        ConventionError: the result is not a physical CM (``check=True``).
    """
    gam = gamma_matrix(state, cfg)
    det = gam[0, 0] * gam[1, 1] - gam[0, 1] ** 2
    k11, k22, k12 = k_matrices(gam, cfg.transmissivity)
    c1, c2 = state.c1, state.c2
    kernel = c1 @ k11 @ c1.T + c2 @ k22 @ c2.T + c1 @ k12 @ c2.T + c2 @ k12.T @ c1.T
    v = state.bec - kernel / det
    v = 0.5 * (v + v.T)
    if check:
        check_physical(v, "conditional BEC-BEC CM")
    return v


def _beam_splitter(t):
    """Symplectic acting on ``(X_A, Y_A, X_B, Y_B)`` -> ``(X1, Y1, X2, Y2)``."""
    st, sr = math.sqrt(t), math.sqrt(1 - t)
    m = np.array([[-sr, st], [st, sr]])
    return np.kron(m, np.eye(2))


def _homodyne(cm, index):
    """Condition on the quadrature at ``index`` and drop the measured mode."""
    mode = index // 2
    keep = [i for i in range(cm.shape[0]) if i // 2 != mode]
    proj = np.zeros((2, 2))
    proj[index % 2, index % 2] = 1.0
    block = cm[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2]
    cross = cm[np.ix_(keep, [2 * mode, 2 * mode + 1])]
    pinv = np.linalg.pinv(proj @ block @ proj, rcond=1e-12)
    return cm[np.ix_(keep, keep)] - cross @ pinv @ cross.T


def general_dyne_oracle(state: TwoNodeState, cfg: BellConfig, y_first=False):
    """Same conditional CM as :func:`bell_condition`, by explicit composition.

    Beam splitter, then a loss channel on each output, then two sequential
    homodyne updates through a projected pseudo-inverse. Shares no algebra
    with the closed-form kernels.
    """
    s = np.eye(8)
    s[4:, 4:] = _beam_splitter(cfg.transmissivity)
    cm = s @ state.cm @ s.T
    for mode, eta in ((2, cfg.eta1), (3, cfg.eta2)):
        sl = slice(2 * mode, 2 * mode + 2)
        loss = np.eye(8)
        loss[sl, sl] *= math.sqrt(eta)
        cm = loss @ cm @ loss.T
        cm[sl, sl] += 0.5 * (1 - eta) * np.eye(2)
    # X of output 1 sits at index 4, Y of output 2 at index 7
    if y_first:
        cm = _homodyne(cm, 7)
        cm = _homodyne(cm, 4)
    else:
        cm = _homodyne(cm, 4)
        cm = _homodyne(cm, 5)  # mode 3 shifted down after dropping mode 2
    return 0.5 * (cm + cm.T)
