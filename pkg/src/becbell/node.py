"""Single BEC-cavity node: parameters, steady state and linearized dynamics.

All rates are angular frequencies in s^-1. The fluctuation vector is
``(dQ, dP, dX, dY)``: Bogoliubov-mode position/momentum followed by the
intracavity field quadratures.
"""

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy import constants

from .errors import DomainError

HBAR = constants.hbar
KB = constants.k
C_LIGHT = constants.c

# Optical diffusion entry relative to kappa. 1.0 gives vacuum variance 1/2 for
# a decoupled cavity; 2.0 is the alternative "vacuum = 1" transcription.
NOISE_CONVENTIONS = {"vacuum_half": 1.0, "literal": 2.0}


@dataclass(frozen=True)
class AtomicParams:
    """Microscopic inputs, used only to cross-check the coupling G."""

    n_atoms: int
    atom_mass: float  # kg
    atomic_detuning: float  # s^-1
    g0: float  # vacuum Rabi frequency, s^-1
    scattering_length: float = 0.0  # m
    waist: float = 0.0  # m

    def __post_init__(self):
        if self.n_atoms <= 0:
            raise DomainError("n_atoms must be positive")
        if abs(self.atomic_detuning) < 10 * abs(self.g0):
            warnings.warn("atomic detuning is not much larger than g0; dispersive regime is questionable",
                          stacklevel=2)

    @property
    def u0(self):
        return self.g0 ** 2 / self.atomic_detuning


@dataclass(frozen=True)
class NodeParams:
    """Physical inputs of one node. Defaults reproduce the reference parameter set.

    Relative knobs are dimensionless multiples: ``drive_kappa`` is E_d/kappa,
    ``detuning_omega_c`` is Delta/Omega_c, ``collision_recoil`` is
    omega_sw/omega_R, ``bec_damping_kappa`` is gamma_c/kappa and
    ``coupling_omega_b`` is G/omega_B.
    """

    cavity_length: float = 1e-3  # m
    wavelength: float = 1046e-9  # m
    finesse: Optional[float] = 1.15e5
    kappa: Optional[float] = None  # s^-1, overrides finesse
    drive_kappa: Optional[float] = 3.0
    drive_power: Optional[float] = None  # W, overrides drive_kappa
    detuning_omega_c: float = 1.0
    recoil_frequency: float = 2 * math.pi * 3.57e3  # s^-1
    collision_recoil: float = 0.0
    bec_damping_kappa: float = 1e-3
    coupling_omega_b: Optional[float] = 0.5
    atoms: Optional[AtomicParams] = None
    temperature: float = 0.1e-6  # K

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedNode:
    kappa: float
    omega_c: float  # effective BEC detuning Omega_c
    omega_b: float  # Bogoliubov frequency
    n_c: float
    delta: float
    g: float
    gamma_c: float
    omega_sw: float
    drive: float
    alpha_s: float = 0.0
    q_s: float = 0.0
    p_s: float = 0.0
    cavity_frequency: float = 0.0
    g_atomic: Optional[float] = None


@dataclass(frozen=True)
class LinearModel:
    """Drift ``A``, diffusion ``D`` and noise-port matrix for the fluctuations."""

    drift: np.ndarray
    diffusion: np.ndarray
    port: np.ndarray
    kappa: float

    @property
    def A(self):
        return self.drift

    @property
    def D(self):
        return self.diffusion


def bose_occupation(omega, temperature):
    """Mean thermal occupation; exactly zero at ``temperature == 0``."""
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    if temperature == 0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega / (KB * temperature))


def coupling_from_atoms(atoms, cavity_frequency, cavity_length, recoil_frequency):
    """Microscopic G = (omega_c/L) sqrt(hbar / (4 omega_R m_s)) with the side-mode mass m_s."""
    m_s = HBAR * cavity_frequency ** 2 / (cavity_length ** 2 * atoms.n_atoms * atoms.u0 ** 2 * recoil_frequency)
    return cavity_frequency / cavity_length * math.sqrt(HBAR / (4 * recoil_frequency * m_s))


def derive_node(params: NodeParams) -> DerivedNode:
    """Resolve relative knobs to absolute rates and compute the steady state."""
    p = params
    for name in ("cavity_length", "wavelength", "recoil_frequency", "bec_damping_kappa"):
        if not getattr(p, name) > 0:
            raise DomainError(f"{name} must be positive, got {getattr(p, name)!r}")
    if p.collision_recoil < 0:
        raise DomainError("collision_recoil must be >= 0")
    if p.temperature < 0:
        raise DomainError("temperature must be >= 0")

    omega_cav = 2 * math.pi * C_LIGHT / p.wavelength
    if p.kappa is not None:
        kappa = p.kappa
    elif p.finesse is not None and p.finesse > 0:
        kappa = math.pi * C_LIGHT / (p.cavity_length * p.finesse)
    else:
        raise DomainError("either kappa or a positive finesse is required")
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa!r}")

    omega_r = p.recoil_frequency
    omega_sw = p.collision_recoil * omega_r
    omega_c = 4 * omega_r + 0.5 * omega_sw
    omega_b = math.sqrt(omega_c * (omega_c + omega_sw))
    # G is an atom-cavity property: scale it by the collision-free frequency 4 omega_R
    omega_b_ref = 4 * omega_r

    if p.drive_power is not None:
        if not p.drive_power > 0:
            raise DomainError("drive_power must be positive")
        drive = math.sqrt(2 * p.drive_power * kappa / (HBAR * omega_cav))
    elif p.drive_kappa is not None and p.drive_kappa > 0:
        drive = p.drive_kappa * kappa
    else:
        raise DomainError("drive amplitude must be positive")

    g_atomic = None
    if p.atoms is not None:
        g_atomic = coupling_from_atoms(p.atoms, omega_cav, p.cavity_length, omega_r)
    if p.coupling_omega_b is not None:
        if p.coupling_omega_b < 0:
            raise DomainError("coupling must be non-negative")
        g = p.coupling_omega_b * omega_b_ref
    elif g_atomic is not None:
        g = g_atomic
    else:
        raise DomainError("coupling G needs coupling_omega_b or atomic parameters")

    d = DerivedNode(
        kappa=kappa,
        omega_c=omega_c,
        omega_b=omega_b,
        n_c=bose_occupation(omega_b, p.temperature),
        delta=p.detuning_omega_c * omega_c,
        g=g,
        gamma_c=p.bec_damping_kappa * kappa,
        omega_sw=omega_sw,
        drive=drive,
        cavity_frequency=omega_cav,
        g_atomic=g_atomic,
    )
    q_s, p_s, alpha_s = steady_state(d)
    return replace(d, q_s=q_s, p_s=p_s, alpha_s=alpha_s)


def steady_state(d: DerivedNode):
    """Classical mean values ``(Q_s, P_s, alpha_s)`` with alpha_s taken real."""
    if d.omega_c == 0:
        raise DomainError("Omega_c = 0: steady state undefined")
    alpha_s = d.drive / math.hypot(d.delta, d.kappa)
    q_s = -d.g * alpha_s ** 2 / (d.omega_c + d.omega_sw + d.gamma_c ** 2 / d.omega_c)
    p_s = d.gamma_c / d.omega_c * q_s
    return q_s, p_s, alpha_s


def self_consistent_detuning(d: DerivedNode, stark_detuning, maxiter=200, rtol=1e-13):
    """Solve ``Delta = delta_c + G Q_s(Delta)`` by damped fixed-point iteration.

    Not used by the reference runs, which take Delta as an input. Returns the
    node with ``delta`` and the steady state updated.
    """
    delta = stark_detuning
    for _ in range(maxiter):
        q_s, _, _ = steady_state(replace(d, delta=delta))
        new = stark_detuning + d.g * q_s
        if abs(new - delta) <= rtol * max(abs(new), d.kappa):
            delta = new
            break
        delta = 0.5 * (delta + new)
    else:
        raise DomainError("self-consistent detuning did not converge (bistable region?)")
    out = replace(d, delta=delta)
    q_s, p_s, alpha_s = steady_state(out)
    return replace(out, q_s=q_s, p_s=p_s, alpha_s=alpha_s)


def build_linear_model(d: DerivedNode, convention="vacuum_half") -> LinearModel:
    """Drift, diffusion and port matrices of the linearized fluctuations."""
    try:
        d_opt = NOISE_CONVENTIONS[convention] * d.kappa
    except KeyError:
        raise DomainError(f"unknown noise convention {convention!r}") from None
    ga = math.sqrt(2) * d.g * d.alpha_s
    k, gam = d.kappa, d.gamma_c
    drift = np.array([
        [-gam, d.omega_c, 0.0, 0.0],
        [-(d.omega_c + d.omega_sw), -gam, -ga, 0.0],
        [0.0, 0.0, -k, d.delta],
        [-ga, 0.0, -d.delta, -k],
    ])
    d_bec = gam * (2 * d.n_c + 1)
    diffusion = np.diag([d_bec, d_bec, d_opt, d_opt])
    port = np.diag([0.0, 0.0, 1 / (2 * k), 1 / (2 * k)])
    return LinearModel(drift, diffusion, port, k)


def is_stable(model) -> bool:
    """All drift eigenvalues strictly in the left half-plane (Routh-Hurwitz equivalent)."""
    a = model.drift if isinstance(model, LinearModel) else np.asarray(model, dtype=float)
    margin = 1e-12 * np.linalg.norm(a)
    return bool(np.all(np.linalg.eigvals(a).real < -margin))
