"""
Pulling a breathing rhythm out from under a baseline jump
=========================================================

A 10 Hz carrier is amplitude modulated by a 0.3 Hz respiratory wave that also
shows up as baseline wander, much like an ECG. Two electrode-style level
shifts are added on top. The lowest-frequency mode should follow the
respiratory wave and the jump should follow the level shifts.
"""

import numpy as np

import sjmd

sig, truth = sjmd.edr_surrogate(duration=20, sample_rate=100, sigma=0.1, seed=0)
config = sjmd.SolverConfig(alpha_max=1e5, beta=0.9, b_bar=0.3, tau=50)
res = sjmd.decompose(sig, config)

print("centre frequencies (Hz):", np.round(res.center_frequencies, 3))
k = int(np.argmin(res.center_frequencies))
resp = truth.oscillations[0, 0]
print("respiration CC:", round(sjmd.correlation_coefficient(res.modes[k, 0], resp), 4))
print("respiration MSE:", round(sjmd.mse(res.modes[k, 0], resp), 5))
print("jump CC:", round(sjmd.correlation_coefficient(res.jump[0], truth.jump[0]), 4))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = np.arange(sig.n_samples) / sig.sample_rate
    fig, ax = plt.subplots(3, 1, sharex=True, figsize=(8, 6))
    ax[0].plot(t, sig.data[0], lw=0.6)
    ax[1].plot(t, res.modes[k, 0])
    ax[1].plot(t, resp, "k--", lw=0.8)
    ax[2].plot(t, res.jump[0])
    ax[2].plot(t, truth.jump[0], "k--", lw=0.8)
    ax[2].set_xlabel("time (s)")
    fig.savefig("respiration_surrogate.svg")
    print("figure written to respiration_surrogate.svg")
except ImportError:
    pass
