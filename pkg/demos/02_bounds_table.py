"""Compare the closed-form cardinality bounds with measured cover sizes."""
# %%
import math

from bracketing.bounds import (
    prior_explicit_bound,
    improved_card_bound,
    new_bound,
    packing_bounds,
    thiemard_bound,
    tree_cardinality_bound,
)
from bracketing.decomposer import build_cover

# %% [markdown]
# Measured size against the tree bound, the d^d/d! envelope and the
# series-refined bound.

# %%
print(f"{'d':>2} {'eps':>5} {'leaves':>8} {'tree':>10} {'improved':>10} {'new':>10} {'old':>12}")
for d in (2, 3, 4):
    for eps in (0.2, 0.1):
        s = build_cover(d, eps)
        old = thiemard_bound(d, eps) if d >= 3 else math.nan
        print(
            f"{d:>2} {eps:>5} {s.leaf_count:>8} {tree_cardinality_bound(d, s.height):>10} "
            f"{improved_card_bound(d, eps):>10.0f} {new_bound(d, eps):>10.0f} {old:>12.0f}"
        )

# %% [markdown]
# The ratio of the older bound to the new one grows like (ln 1/eps)^d.

# %%
for d in (3, 5, 10):
    ratios = [thiemard_bound(d, e) / new_bound(d, e) for e in (0.3, 0.1, 0.01)]
    print(f"d={d:>2}", "  ".join(f"{r:10.3g}" for r in ratios))

# %% [markdown]
# Against the previous explicit bound and the packing route.

# %%
for d in (3, 10, 20):
    haus, via = packing_bounds(d, 0.1)
    print(f"d={d:>2} new/prior={new_bound(d, 0.1) / prior_explicit_bound(d, 0.1):.3g} packing/bracketing={haus / via:.3g}")
