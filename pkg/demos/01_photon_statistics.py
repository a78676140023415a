"""
Photon statistics of squeezed coherent light
============================================

Start from a coherent state with 49 mean photons and add a handful of
squeezed photons. The distribution first sharpens, then starts to ripple.
"""

# %%
import numpy as np
import matplotlib.pyplot as plt

import squeezejc as sq

N_C = 49
fig, ax = plt.subplots()
for n_s in (0, 1, 2, 5, 10):
    amps = sq.amplitudes(sq.params_from_means(N_C, n_s))
    P = sq.photon_distribution(amps)
    m = sq.moments(amps.params)
    print(f"N_S={n_s:>2}: cutoff {amps.n_max:>3}, peak {P.max():.4f} at n={P.argmax()}, "
          f"variance {m.variance:7.3f}, Q {m.mandel_q:+.4f}")
    ax.plot(np.arange(P.size), P, label=f"N_S={n_s}")

# %%
# The peak for a single squeezed photon roughly doubles relative to Poisson.
ax.set_xlim(0, 120)
ax.set_xlabel("n")
ax.set_ylabel("P(n)")
ax.legend()
fig.savefig("photon_statistics.png", dpi=120)
