"""
Collapse and revival of the atomic inversion
============================================
"""

# %%
import matplotlib.pyplot as plt

import squeezejc as sq

fig, axes = plt.subplots(5, 1, sharex=True, figsize=(7, 9))
for ax, n_s in zip(axes, (0, 1, 2, 5, 10)):
    amps = sq.amplitudes(sq.params_from_means(49, n_s))
    w = sq.inversion(sq.photon_distribution(amps), stop=120.0)
    ax.plot(w.grid, w.values, lw=0.5)
    ax.set_ylabel(f"W, N_S={n_s}")

# %%
# Locate the revivals of the coherent case from the envelope of |W|.
w = sq.inversion(sq.photon_distribution(sq.amplitudes(sq.params_from_means(49, 0))), stop=120.0)
env = sq.inversion_envelope(w, 2.0)
for lo, hi in ((25, 65), (65, 110)):
    mask = (env.grid >= lo) & (env.grid <= hi)
    print(f"revival in [{lo}, {hi}] peaks at lambda t = {env.grid[mask][env.values[mask].argmax()]:.2f}")

axes[-1].set_xlabel("lambda t")
fig.savefig("inversion.png", dpi=120)
