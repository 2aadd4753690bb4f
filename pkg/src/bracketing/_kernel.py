# Compiled twin of decomposer.iter_nodes for summary statistics only.
# Arithmetic mirrors the Python path operation for operation (left-to-right
# products, same pow exponent) so both produce bit-identical stats.
import numpy as np
from numba import njit


@njit(cache=True)
def cover_stats_kernel(d, eps, max_depth, gate_tol):
    cap = (max_depth + 2) * (d + 1) + 1
    alphas = np.zeros((cap, d))
    betas = np.ones((cap, d))
    types = np.empty(cap, np.int64)
    depths = np.empty(cap, np.int64)
    types[0] = 1
    depths[0] = 0
    top = 1

    count = 0
    h = 0
    wmax = -np.inf
    wmin = np.inf
    a = np.empty(d)
    b = np.empty(d)
    g = np.empty(d)
    while top > 0:
        top -= 1
        for i in range(d):
            a[i] = alphas[top, i]
            b[i] = betas[top, i]
        j = types[top]
        depth = depths[top]
        if depth > max_depth:
            return -1, depth, wmax, wmin
        pb = 1.0
        pa = 1.0
        for i in range(d):
            pb *= b[i]
        for i in range(d):
            pa *= a[i]
        w = pb - pa
        if j > d or not w > eps + gate_tol:
            count += 1
            if depth > h:
                h = depth
            if w > wmax:
                wmax = w
            if w < wmin:
                wmin = w
            continue
        den = 1.0
        for i in range(d):
            den *= a[i] if i < j - 1 else b[i]
        delta = ((pb - eps) / den) ** (1.0 / (d - j + 1))
        for i in range(d):
            g[i] = a[i] if i < j - 1 else delta * b[i]
        # push in reverse type order so type j is popped first
        for i in range(d):
            alphas[top, i] = g[i]
            betas[top, i] = b[i]
        types[top] = d + 1
        depths[top] = depth + 1
        top += 1
        for k in range(d, j - 1, -1):
            for i in range(d):
                alphas[top, i] = g[i] if i < k - 1 else a[i]
                betas[top, i] = g[i] if i == k - 1 else b[i]
            types[top] = k
            depths[top] = depth + 1
            top += 1
    return count, h, wmax, wmin
