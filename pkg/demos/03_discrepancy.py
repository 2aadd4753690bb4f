"""Bound the star discrepancy of small point sets and compare with brute force."""
# %%
import numpy as np

from bracketing.discrepancy import disc_sandwich
from bracketing.verify import exact_star_discrepancy

rng = np.random.default_rng(7)

# %% [markdown]
# A random set of 8 points in the square.  The sandwich always contains the
# exact value, and the upper end is within eps of it.

# %%
P = rng.random((8, 2))
exact = exact_star_discrepancy(P)
print(f"exact D* = {exact:.5f}")
for eps in (0.5, 0.2, 0.1, 0.05, 0.02):
    b = disc_sandwich(P, eps)
    print(f"eps={eps:<5} [{b.lower:.5f}, {b.upper:.5f}] width={b.upper - b.lower:.5f} leaves={b.cover_size}")

# %% [markdown]
# A Halton-like lattice does better than random points of the same size.

# %%
def van_der_corput(n, base):
    out = np.zeros(n)
    for i in range(n):
        k, f, x = i + 1, 1.0, 0.0
        while k:
            f /= base
            x += f * (k % base)
            k //= base
        out[i] = x
    return out


H = np.column_stack([van_der_corput(32, 2), van_der_corput(32, 3)])
R = rng.random((32, 2))
for name, pts in (("halton", H), ("random", R)):
    b = disc_sandwich(pts, 0.02)
    print(f"{name:>7}: D* in [{b.lower:.4f}, {b.upper:.4f}]")
