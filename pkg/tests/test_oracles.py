import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from becbell.gaussian import entropy_f, symplectic_eigenvalues, validate
from becbell.oracles import (RandomStateSpec, highprec_discord, is_symplectic, make_tmsv, random_physical_cm,
                             random_symplectic)


def test_tmsv_structure():
    r = 0.7
    v = make_tmsv(r)
    c, s = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    np.testing.assert_allclose(v, [[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    np.testing.assert_allclose(symplectic_eigenvalues(v), [0.5, 0.5], atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 4))
def test_random_symplectic_preserves_form(seed, n):
    s = random_symplectic(np.random.default_rng(seed), n)
    assert is_symplectic(s)


def test_random_cm_is_reproducible_and_physical():
    spec = RandomStateSpec(seed=42, n_modes=3)
    a, b = random_physical_cm(spec), random_physical_cm(spec)
    np.testing.assert_array_equal(a, b)
    assert validate(a).physical
    assert not np.array_equal(a, random_physical_cm(RandomStateSpec(seed=43, n_modes=3)))


def test_random_cm_thermal_range_sets_spectrum():
    cm = random_physical_cm(RandomStateSpec(seed=5, thermal_range=(1.0, 1.0)))
    np.testing.assert_allclose(symplectic_eigenvalues(cm), [1.5, 1.5], rtol=1e-10)


@pytest.mark.parametrize("r", [0.2, 0.8])
def test_highprec_discord_tmsv(r):
    assert highprec_discord(make_tmsv(r)) == pytest.approx(entropy_f(math.cosh(2 * r)), abs=1e-13)


def test_highprec_discord_product_state():
    assert highprec_discord(np.diag([1.0, 1.0, 2.0, 2.0])) == pytest.approx(0.0, abs=1e-15)
