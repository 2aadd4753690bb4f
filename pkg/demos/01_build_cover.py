"""Walk through the recursive decomposition of the unit square and cube."""
# %%
from collections import Counter

from bracketing.decomposer import build_cover, decompose_step, delta_of, fast_cover_stats, height, iter_cover
from bracketing.geometry import unit_cube

# %% [markdown]
# One decomposition step on [0,1)^2 with eps = 0.5.  The shrink factor
# delta makes the corner [0, delta*beta) exactly eps lighter than the box,
# and the box splits into one child per type plus a terminal child.

# %%
root = unit_cube(2)
delta = delta_of(root, 1, 0.5)
print(f"delta = {delta:.6f}")
for child in decompose_step(root, 1, 0.5):
    print(f"  type {child.type_index}: alpha={child.alpha} beta={child.beta} weight={child.weight:.6f}")

# %% [markdown]
# The full cover for eps = 0.5 has six leaves, emitted depth-first.

# %%
for leaf in iter_cover(2, 0.5):
    print(f"  t={leaf.type_index} weight={leaf.weight:.4f} alpha={tuple(round(a, 4) for a in leaf.alpha)}")

# %% [markdown]
# Leaf counts and heights grow quickly as eps shrinks.  The compiled
# kernel gives the same statistics as the Python walker.

# %%
for d in (2, 3, 4):
    for eps in (0.2, 0.1, 0.05):
        s = build_cover(d, eps) if d < 4 or eps > 0.05 else fast_cover_stats(d, eps)
        print(f"d={d} eps={eps:<5} leaves={s.leaf_count:>8} height={s.height:>3} (recursion {height(d, eps)})")

# %%
types = Counter(b.type_index for b in iter_cover(3, 0.1))
print("leaf types for d=3, eps=0.1:", dict(sorted(types.items())))
