import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sjmd import (
    ChannelMismatchError,
    ConfigError,
    LengthMismatchError,
    MultichannelSignal,
    NonFiniteError,
    Signal,
    SolverConfig,
    TooShortError,
    crop,
    mirror_extend,
    validate,
)


def test_mirror_even():
    assert mirror_extend([1, 2, 3, 4]).tolist() == [2, 1, 1, 2, 3, 4, 4, 3]


def test_mirror_odd_puts_extra_sample_left():
    assert mirror_extend([1, 2, 3]).tolist() == [2, 1, 1, 2, 3, 3]


def test_mirror_keeps_signal_type():
    out = mirror_extend(Signal(np.arange(10.0), 250.0))
    assert isinstance(out, Signal) and len(out) == 20 and out.sample_rate == 250.0


def test_mirror_multichannel_last_axis():
    x = np.arange(12.0).reshape(2, 6)
    ext = mirror_extend(x)
    assert ext.shape == (2, 12)
    np.testing.assert_array_equal(ext[1], mirror_extend(x[1]))


def test_crop_wrong_length():
    with pytest.raises(LengthMismatchError):
        crop(np.zeros(10), 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=200))
def test_crop_inverts_mirror(values):
    x = np.array(values)
    ext = mirror_extend(x)
    assert ext.shape[0] == 2 * x.shape[0]
    np.testing.assert_array_equal(crop(ext, x.shape[0]), x)


def test_validate_errors():
    with pytest.raises(TooShortError):
        validate(Signal(np.ones(7)))
    with pytest.raises(NonFiniteError):
        validate(Signal(np.r_[np.ones(9), np.nan]))
    with pytest.raises(NonFiniteError):
        validate(MultichannelSignal(np.r_[np.ones(9), np.inf]))
    with pytest.raises(ChannelMismatchError):
        validate([Signal(np.ones(10)), Signal(np.ones(11))])


def test_validate_returns_input():
    sig = Signal(np.ones(8))
    assert validate(sig) is sig


def test_signal_is_read_only():
    sig = Signal(np.ones(8))
    with pytest.raises(ValueError):
        sig.samples[0] = 2.0


def test_channels_share_rate():
    a, b = Signal(np.ones(8), 100.0), Signal(np.ones(8), 200.0)
    with pytest.raises(ChannelMismatchError):
        MultichannelSignal.from_channels([a, b])
    mc = MultichannelSignal.from_channels([a, a])
    assert mc.n_channels == 2 and mc.sample_rate == 100.0


def test_schedule_doubles():
    cfg = SolverConfig(alpha_init=10, alpha_max=80)
    assert cfg.alpha_schedule() == [10, 20, 40, 80]
    assert SolverConfig(alpha_init=10, alpha_max=5).alpha_schedule() == [10]
    assert SolverConfig(alpha_init=10, alpha_max=79).alpha_schedule() == [10, 20, 40]


def test_config_derived_constants():
    cfg = SolverConfig(b_bar=0.9, beta=0.05, tau=50)
    assert cfg.b == pytest.approx(2 / 0.81)
    assert cfg.gamma == pytest.approx(50 * cfg.b * 0.05)
    assert cfg.mu * cfg.b == pytest.approx(1 / 50)


@pytest.mark.parametrize("kw", [dict(tau=1.0), dict(tau=0.5), dict(beta=0.0), dict(b_bar=-1),
                                dict(alpha_max=float("inf")), dict(stop_rule="nope"),
                                dict(max_modes=0)])
def test_config_rejects(kw):
    with pytest.raises(ConfigError):
        SolverConfig(**kw)
