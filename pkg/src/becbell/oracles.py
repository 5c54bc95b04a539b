"""Independent reference implementations for the validation suites.

Nothing here is used by the production pipeline. Where feasible the
oracles avoid the numerical kernels of the main path: 2x2 determinants are
written out by hand, the discord closed form is re-evaluated in 50-digit
arithmetic, and the filtered node CM is obtained from an augmented
Lyapunov equation instead of a frequency integral.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from .gaussian import symplectic_form


def make_tmsv(r):
    """Two-mode squeezed vacuum with squeezing ``r``."""
    if r < 0:
        raise ValueError("squeezing must be non-negative")
    c = 0.5 * math.cosh(2 * r)
    s = 0.5 * math.sinh(2 * r)
    return np.array([
        [c, 0, s, 0],
        [0, c, 0, -s],
        [s, 0, c, 0],
        [0, -s, 0, c],
    ])


@dataclass(frozen=True)
class RandomStateSpec:
    seed: int
    n_modes: int = 2
    thermal_range: tuple = (0.0, 2.0)
    squeezing_range: tuple = (0.0, 1.0)
    layers: int = 2


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def _squeezer(r):
    return np.diag([math.exp(-r), math.exp(r)])


def _embed(n, block, modes):
    s = np.eye(2 * n)
    idx = np.array([[2 * m, 2 * m + 1] for m in modes]).ravel()
    s[np.ix_(idx, idx)] = block
    return s


def random_symplectic(rng, n, squeezing_range=(0.0, 1.0), layers=2):
    s = np.eye(2 * n)
    for _ in range(layers):
        for m in range(n):
            local = _rotation(rng.uniform(0, 2 * np.pi)) @ _squeezer(rng.uniform(*squeezing_range)) \
                @ _rotation(rng.uniform(0, 2 * np.pi))
            s = _embed(n, local, [m]) @ s
        for m in range(n - 1):
            k = rng.integers(m + 1, n)
            th = rng.uniform(0, np.pi / 2)
            bs = np.kron(np.array([[math.cos(th), math.sin(th)], [-math.sin(th), math.cos(th)]]), np.eye(2))
            s = _embed(n, bs, [m, int(k)]) @ s
    return s


def random_physical_cm(spec: RandomStateSpec):
    """Thermal core conjugated by a random symplectic; reproducible from the seed."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_modes
    core = np.diag(np.repeat(rng.uniform(*spec.thermal_range, size=n) + 0.5, 2))
    s = random_symplectic(rng, n, spec.squeezing_range, spec.layers)
    cm = s @ core @ s.T
    return 0.5 * (cm + cm.T)


def is_symplectic(s, atol=1e-10):
    n = s.shape[0] // 2
    om = symplectic_form(n)
    return np.allclose(s @ om @ s.T, om, atol=atol)


def highprec_discord(cm, dps=50):
    """Discord closed form in ``dps``-digit arithmetic, measured mode 1."""
    with mpmath.workdps(dps):
        v = [[mpmath.mpf(float(x)) for x in row] for row in np.asarray(cm)]

        def det2(a, b, c, d):
            return a * d - b * c

        s1 = 4 * det2(v[0][0], v[0][1], v[1][0], v[1][1])
        s2 = 4 * det2(v[2][2], v[2][3], v[3][2], v[3][3])
        s3 = 4 * det2(v[0][2], v[0][3], v[1][2], v[1][3])
        s4 = 16 * mpmath.det(mpmath.matrix(v))

        def f(x):
            if x <= 1:
                return mpmath.mpf(0)
            up, down = (x + 1) / 2, (x - 1) / 2
            return up * mpmath.log(up, 2) - down * mpmath.log(down, 2)

        sd = s1 + s2 + 2 * s3
        disc = sd ** 2 - 4 * s4
        disc = max(disc, mpmath.mpf(0))
        lam_p = mpmath.sqrt((sd + mpmath.sqrt(disc)) / 2)
        lam_m = mpmath.sqrt(max((sd - mpmath.sqrt(disc)) / 2, mpmath.mpf(0)))
        if (s4 - s2 * s1) ** 2 <= (1 + s1) * s3 ** 2 * (s2 + s4) and (s1 - 1) ** 2 > mpmath.mpf("1e-12"):
            eps = (2 * s3 ** 2 + (s1 - 1) * (s4 - s2)
                   + 2 * abs(s3) * mpmath.sqrt(s3 ** 2 + (s1 - 1) * (s4 - s2))) / (s1 - 1) ** 2
        else:
            rad = s3 ** 4 + (s4 - s2 * s1) ** 2 - 2 * s3 ** 2 * (s4 + s2 * s1)
            eps = (s2 * s1 - s3 ** 2 + s4 - mpmath.sqrt(max(rad, mpmath.mpf(0)))) / (2 * s1)
        d = f(mpmath.sqrt(s1)) - f(lam_m) - f(lam_p) + f(mpmath.sqrt(eps))
        return float(d)


def augmented_filtered_cm(model, filt):
    """Filtered node CM from the Lyapunov equation of (fluctuations + filter state).

    The filter obeys ``d a_f/dt = -(1/tau + i Omega) a_f + sqrt(2/tau) a_out``
    with ``a_out = sqrt(2 kappa) a - a_in``; its stationary covariance is
    exactly the frequency integral computed by the spectral solver.
    """
    k = model.kappa
    a = model.drift / k
    d = model.diffusion / k
    om = filt.center / k
    rate = 1.0 / (filt.tau * k)
    gain = math.sqrt(2 * rate)
    big = np.zeros((6, 6))
    big[:4, :4] = a
    big[4:, 4:] = [[-rate, om], [-om, -rate]]
    big[4:, 2:4] = gain * math.sqrt(2) * np.eye(2)
    # noise enters the optical rows as sqrt(2 kappa) a_in; a_out subtracts a_in
    inject = np.zeros((6, 4))
    inject[:4, :4] = np.eye(4)
    inject[4:, 2:4] = -gain / math.sqrt(2) * np.eye(2)
    v = solve_continuous_lyapunov(big, -inject @ d @ inject.T)
    keep = [0, 1, 4, 5]
    v = v[np.ix_(keep, keep)]
    return 0.5 * (v + v.T)
