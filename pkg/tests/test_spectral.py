import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sjmd import HalfSpectrum, forward_half_spectrum, inverse_real, update_center_frequency, \
    update_mode, update_residual
from sjmd.spectral import ZeroSpectrumError, frequency_grid


def _spec(values, m):
    return HalfSpectrum(np.asarray(values, dtype=complex), m)


def test_grid():
    np.testing.assert_allclose(frequency_grid(8), [0, 0.125, 0.25, 0.375, 0.5])


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(2, 300), elements=st.floats(-1e3, 1e3)))
def test_round_trip(x):
    back = inverse_real(forward_half_spectrum(x))
    assert np.max(np.abs(back - x)) <= 1e-12 * max(1.0, np.max(np.abs(x)))


def test_parseval(rng):
    x = rng.standard_normal(64)
    c = forward_half_spectrum(x).coefficients
    # interior bins stand for a conjugate pair
    power = np.abs(c[0]) ** 2 + 2 * np.sum(np.abs(c[1:-1]) ** 2) + np.abs(c[-1]) ** 2
    assert power / 64 == pytest.approx(np.sum(x ** 2), rel=1e-12)


def test_single_bin_is_cosine():
    m, k = 32, 3
    coef = np.zeros(m // 2 + 1, complex)
    coef[k] = m / 2
    t = np.arange(m)
    np.testing.assert_allclose(inverse_real(_spec(coef, m)), np.cos(2 * np.pi * k * t / m),
                               atol=1e-12)


def test_update_mode_weights():
    m = 8
    s = _spec(np.ones(5), m)
    z = _spec(np.zeros(5), m)
    u = update_mode(s, z, z, 0.25, alpha=8.0)
    # 1 / (1 + 2 alpha (nu - omega)^2), at nu = 0.25 and 0.375
    assert u.coefficients[2] == pytest.approx(1.0)
    assert u.coefficients[3] == pytest.approx(1 / 1.25)
    u = update_mode(s, z, z, 0.25, alpha=16.0)
    assert u.coefficients[3] == pytest.approx(1 / 1.5)


def test_update_mode_subtracts_residual_and_jump():
    s, r, v = _spec([3, 3, 3], 4), _spec([1, 1, 1], 4), _spec([0.5, 0.5, 0.5], 4)
    u = update_mode(s, r, v, 0.25, alpha=0.0)
    np.testing.assert_allclose(u.coefficients, 1.5)


def test_update_residual_weights():
    m = 8
    s, z = _spec(np.ones(5), m), _spec(np.zeros(5), m)
    r = update_residual(s, z, z, 0.25, alpha=64.0)
    # alpha^2 (nu - omega)^4 = 1 at one bin away gives 1/2
    assert r.coefficients[2] == 0
    assert r.coefficients[3] == pytest.approx(0.5)
    assert r.coefficients[1] == pytest.approx(0.5)


def test_centroid_of_pure_tone():
    n = 1000
    t = np.arange(n) / n
    x = np.cos(2 * np.pi * 2 * t)
    from sjmd import mirror_extend
    omega = update_center_frequency(forward_half_spectrum(mirror_extend(x)))
    assert abs(omega - 0.002) <= 5e-4


def test_centroid_pools_channels():
    m = 8
    a = np.zeros((2, 5), complex)
    a[0, 1] = 1.0
    a[1, 3] = 1.0
    assert update_center_frequency(_spec(a, m)) == pytest.approx(0.25)


def test_centroid_zero_spectrum():
    with pytest.raises(ZeroSpectrumError):
        update_center_frequency(_spec(np.zeros(5), 8))


def test_bin_count_checked():
    with pytest.raises(ValueError):
        HalfSpectrum(np.zeros(4), 8)
