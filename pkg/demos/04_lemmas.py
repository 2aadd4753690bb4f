"""Check the structural identities of the decomposition tree numerically."""
# %%
from bracketing.verify import (
    check_delta_recursion,
    check_monotonicity,
    check_partition,
    check_sibling_weights,
    realized_paths,
    uncorrected_delta,
)
from bracketing.decomposer import iter_cover

# %% [markdown]
# Typed siblings share the weight delta*W and the terminal child weighs eps.

# %%
print(check_sibling_weights(3, 0.1))

# %% [markdown]
# The shrink factor of a child can be predicted from its parent alone.

# %%
print(check_delta_recursion(3, 0.1))

# %% [markdown]
# Along dominated paths weights and deltas are ordered.  Path (1,1) and
# (1,2) differ only in the last step, so the weights tie while the deltas
# do not.

# %%
table = realized_paths(2, 0.1)
for path in ((1, 1), (1, 2), (2, 2)):
    w, dl = table[path]
    print(f"path {path}: weight={w:.12f} delta={dl:.12f}")
print(check_monotonicity(2, 0.1, 1000, seed=0))

# %% [markdown]
# Replacing the exponent 1/(d-j+1) by 1/d keeps sibling weights equal but
# breaks the terminal child, and the check catches it.

# %%
print(check_sibling_weights(3, 0.1, delta_fn=uncorrected_delta))

# %%
print(check_partition(iter_cover(3, 0.1), 3, 0.1, n_samples=50_000))
