import warnings

import numpy as np
import pytest

from sjmd import (
    MultichannelSignal,
    SolverConfig,
    correlation_coefficient,
    decompose,
    decompose_channelwise,
    decompose_multivariate,
    mirror_extend,
    run_admm_stage,
    run_alpha_schedule,
    three_channel_benchmark,
)
from sjmd.decompose import MaxItersExceeded

N = 1000
T = np.arange(N) / N
STEP = (T >= 0.5).astype(float)


def _one(x):
    return MultichannelSignal(x, float(N))


def test_stage_zero_input():
    state = run_admm_stage(np.zeros((1, 64)), 0.0, 100.0, SolverConfig())
    assert state.converged and state.iteration == 1
    assert not np.any(state.u) and not np.any(state.v)


def test_stage_rejects_bad_omega():
    with pytest.raises(ValueError):
        run_admm_stage(np.zeros((1, 64)), 0.7, 100.0, SolverConfig())


def test_stage_pure_tone():
    work = mirror_extend(np.cos(2 * np.pi * 2 * T))[None, :]
    _, omega, v, _, diag = run_alpha_schedule(work, SolverConfig(alpha_max=1e4))
    assert diag.alpha_stages[-1][0] <= 1e4
    # one bin of the extended grid is 1 / (2N)
    assert abs(omega - 0.002) <= 1 / (2 * N)
    assert np.max(np.abs(v)) <= 0.05


def test_cold_stage_split_settles_with_tighter_eps():
    # From omega = 0 the first mode update misses part of the tone and v takes
    # it; u + v barely moves while rho flattens v, so the default eps stops early.
    work = mirror_extend(np.cos(2 * np.pi * 2 * T))[None, :]
    loose = run_admm_stage(work, 0.0, 1e4, SolverConfig())
    tight = run_admm_stage(work, 0.0, 1e4, SolverConfig(eps=1e-9, max_inner_iters=2000))
    assert abs(tight.omega - 0.002) <= 1 / (2 * N)
    assert np.max(np.abs(tight.v)) <= 0.05 < np.max(np.abs(loose.v))
    warm = run_admm_stage(work, 0.002, 1e4, SolverConfig())
    assert np.max(np.abs(warm.v)) <= 0.05


def test_stage_step():
    cfg = SolverConfig(beta=0.5, b_bar=0.3)
    work = mirror_extend(STEP)[None, :]
    state = run_admm_stage(work, 0.0, 8e4, cfg)
    assert correlation_coefficient(state.v[0], work[0]) >= 0.99
    assert np.sum(state.u ** 2) / work.shape[1] <= 1e-3


@pytest.mark.parametrize("eps, bound", [(1e-7, 1e-2), (1e-9, 1e-3)])
def test_constraint_residual_after_convergence(eps, bound):
    # the stopping test watches u + v, so x = Dv is only met to about sqrt(eps) scale
    sig, _ = three_channel_benchmark(N, 0.1, seed=0)
    work = mirror_extend(sig.data)
    cfg = SolverConfig(alpha_max=8e4, beta=0.05, b_bar=0.9, tau=50, eps=eps,
                       max_inner_iters=2000)
    *_, state, diag = run_alpha_schedule(work, cfg)
    assert diag.converged
    dv = np.diff(state.v, axis=-1)
    assert np.linalg.norm(state.x - dv) / np.linalg.norm(dv) <= bound


def test_schedule_stage_count():
    work = mirror_extend(np.cos(2 * np.pi * 2 * T))[None, :]
    *_, diag = run_alpha_schedule(work, SolverConfig(alpha_init=10, alpha_max=80))
    assert [a for a, _, _ in diag.alpha_stages] == [10, 20, 40, 80]
    *_, diag = run_alpha_schedule(work, SolverConfig(alpha_init=10, alpha_max=5))
    assert len(diag.alpha_stages) == 1


def test_schedule_two_tones():
    lo, hi = np.cos(2 * np.pi * 2 * T), np.cos(2 * np.pi * 40 * T)
    u, *_ = run_alpha_schedule(mirror_extend(lo + hi)[None, :], SolverConfig(alpha_max=1e4))
    u = u[0, N // 2:N // 2 + N]
    assert max(abs(correlation_coefficient(u, lo)), abs(correlation_coefficient(u, hi))) >= 0.99


def test_zero_signal():
    res = decompose(_one(np.zeros(N)))
    assert res.n_modes == 0 and not np.any(res.jump) and not np.any(res.residual)


def test_single_channel_two_tones():
    sig, truth = three_channel_benchmark(N, 0.1, seed=3)
    res = decompose(_one(sig.data[1]), SolverConfig(alpha_max=8e4, b_bar=0.9))
    assert res.n_modes >= 2
    for ref in truth.oscillations[:, 1]:
        assert max(correlation_coefficient(m[0], ref) for m in res.modes) >= 0.95
    assert np.max(np.abs(res.jump)) <= 0.1


def test_step_with_and_without_jump():
    on = decompose(_one(STEP), SolverConfig(beta=0.5, b_bar=0.3))
    assert correlation_coefficient(on.jump[0], STEP) >= 0.99
    off = decompose(_one(STEP), SolverConfig(beta=0.5, b_bar=0.3, jump_enabled=False))
    assert not np.any(off.jump)
    leaked = np.sum(off.residual ** 2) + np.sum(off.modes ** 2)
    assert leaked / N >= 0.1


def test_reconstruction_exact():
    sig, _ = three_channel_benchmark(N, 0.3, seed=1)
    res = decompose_multivariate(sig, SolverConfig(alpha_max=8e4, b_bar=0.9))
    err = np.max(np.abs(sig.data - res.reconstruction()))
    assert err <= 1e-12 * np.max(np.abs(sig.data))


def test_identical_channels_identical_output():
    x = np.cos(2 * np.pi * 2 * T) + 0.5 * STEP
    res = decompose_multivariate(MultichannelSignal(np.vstack([x, x]), N))
    np.testing.assert_array_equal(res.modes[:, 0], res.modes[:, 1])
    np.testing.assert_array_equal(res.jump[0], res.jump[1])


def test_scaled_channels_share_frequency():
    x = np.cos(2 * np.pi * 2 * T)
    res = decompose_multivariate(MultichannelSignal(np.vstack([x, 3 * x]), N))
    assert abs(res.center_frequencies[0] / N - 0.002) <= 1 / (2 * N)


def test_deterministic():
    sig, _ = three_channel_benchmark(N, 0.1, seed=5)
    cfg = SolverConfig(alpha_max=8e4, b_bar=0.9)
    a, b = decompose_multivariate(sig, cfg), decompose_multivariate(sig, cfg)
    np.testing.assert_array_equal(a.modes, b.modes)
    np.testing.assert_array_equal(a.jump, b.jump)
    assert a.center_frequencies == b.center_frequencies


def test_channelwise_matches_single():
    sig, _ = three_channel_benchmark(N, 0.1, seed=0)
    cfg = SolverConfig(alpha_max=1e4, b_bar=0.9)
    parts = decompose_channelwise(sig, cfg)
    np.testing.assert_array_equal(parts[2].modes, decompose(_one(sig.data[2]), cfg).modes)


def test_single_channel_rejects_multichannel():
    with pytest.raises(ValueError):
        decompose(MultichannelSignal(np.ones((2, 16))))


def test_max_iters_warns():
    sig, _ = three_channel_benchmark(N, 0.1, seed=0)
    with pytest.warns(MaxItersExceeded):
        res = decompose_multivariate(sig, SolverConfig(max_inner_iters=3, max_modes=2))
    assert not res.converged


def test_noise_goes_to_residual():
    cfg = SolverConfig(alpha_max=8e4, beta=0.05, b_bar=0.9, tau=50)
    sig3, truth3 = three_channel_benchmark(N, 0.3, seed=0)
    sig1, truth1 = three_channel_benchmark(N, 0.1, seed=0)
    r3, r1 = decompose_multivariate(sig3, cfg), decompose_multivariate(sig1, cfg)
    assert np.sum(r3.residual ** 2) >= 0.5 * np.sum(truth3.noise ** 2)
    for c in (0, 2):
        drop = (correlation_coefficient(r1.jump[c], truth1.jump[c])
                - correlation_coefficient(r3.jump[c], truth3.jump[c]))
        assert drop < 0.05


def test_stabilization(bench_config):
    sig, _ = three_channel_benchmark(N, 0.1, seed=0)
    res = decompose_multivariate(sig, bench_config)
    for diag in res.diagnostics:
        for trace in diag.traces:
            assert trace[-1] <= bench_config.eps
            tail = trace[-max(1, len(trace) // 10):]
            assert tail.max() <= 10 * bench_config.eps


def test_abs_rule_runs_to_cap():
    sig, _ = three_channel_benchmark(N, 0.1, seed=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MaxItersExceeded)
        res = decompose(_one(sig.data[1]), SolverConfig(alpha_max=1e4, b_bar=0.9,
                                                        stop_rule="abs", max_modes=4))
    assert res.n_modes == 4
    assert len(res.energies) == 4
