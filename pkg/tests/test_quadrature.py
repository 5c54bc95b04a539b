import math

import numpy as np
import pytest

from becbell.errors import NumericalError
from becbell.quadrature import integrate


def test_polynomial_exact():
    val, err, n = integrate(lambda x: 5 * x ** 4 - 3 * x ** 2, 0.0, 2.0)
    assert val == pytest.approx(32 - 8, abs=1e-13)
    assert n == 1


def test_smooth_function():
    val, _, _ = integrate(np.exp, 0.0, 1.0)
    assert val == pytest.approx(math.e - 1, rel=1e-14)


def test_vector_valued_integrand():
    f = lambda x: np.stack([np.sin(x), np.cos(x)], axis=-1)
    val, _, _ = integrate(f, 0.0, math.pi)
    np.testing.assert_allclose(val, [2.0, 0.0], atol=1e-13)


def test_sharp_peak_with_breakpoint():
    width = 1e-4
    f = lambda x: width / ((x - 0.3) ** 2 + width ** 2) / math.pi
    exact = (math.atan(0.7 / width) + math.atan(0.3 / width)) / math.pi
    val, err, _ = integrate(f, 0.0, 1.0, points=[0.3], epsabs=1e-10)
    assert val == pytest.approx(exact, abs=1e-9)
    assert err <= 1e-10


def test_sqrt_endpoint_singularity():
    val, _, _ = integrate(np.sqrt, 0.0, 1.0, epsabs=1e-11)
    assert val == pytest.approx(2 / 3, abs=1e-10)


def test_interval_budget_exhaustion_reports_achieved():
    f = lambda x: np.sin(1.0 / (x + 1e-9))
    with pytest.raises(NumericalError) as info:
        integrate(f, 0.0, 1.0, epsabs=1e-14, limit=8)
    assert info.value.achieved > 0


def test_deterministic():
    f = lambda x: np.stack([np.exp(-x) * np.sin(50 * x), 1 / (1 + x ** 2)], axis=-1)
    a = integrate(f, 0.0, 10.0, points=[1.0, 2.5], epsabs=1e-12)
    b = integrate(f, 0.0, 10.0, points=[1.0, 2.5], epsabs=1e-12)
    assert np.array_equal(a[0], b[0]) and a[1] == b[1] and a[2] == b[2]
