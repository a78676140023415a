"""
How many squeezed photons minimize the variance and Mandel Q?
=============================================================
"""

# %%
import matplotlib.pyplot as plt

import squeezejc as sq

rows = sq.scan_optimal(1, 100)
n_c = [r.n_c for r in rows]
plt.plot(n_c, [r.ns_min_variance for r in rows], "+", label="minimum variance")
plt.plot(n_c, [r.ns_min_q_direct for r in rows], "*", label="minimum Q (direct)")
plt.plot(n_c, [r.ns_eq13_root for r in rows], ".", label="printed Q condition root")
plt.xlabel("N_C")
plt.ylabel("optimal N_S")
plt.legend()
plt.savefig("optimal_squeezing.png", dpi=120)

# %%
for r in rows:
    if r.n_c in (1, 10, 49, 100):
        print(f"N_C={r.n_c:>5g}: min-var N_S={r.ns_min_variance:.5f}, "
              f"min-Q N_S={r.ns_min_q_direct:.5f} (Q={r.q_min:+.4f}), "
              f"printed-condition root={r.ns_eq13_root:.5f}")
