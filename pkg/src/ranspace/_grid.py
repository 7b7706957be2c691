"""Compiled exhaustive search over barycentric grids."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _powsum(x, mode, p):
    a = abs(x)
    if mode == 1:
        return a * a
    if mode == 2:
        return a * a * a
    if mode == 3:
        return a * math.sqrt(a)
    return a ** p


@njit(cache=True)
def _search(X, m, mode, p):
    n, d = X.shape
    r = np.zeros(n, dtype=np.int64)
    r[0] = m
    v = np.empty(d)
    best = np.inf
    best_r = r.copy()
    t = m
    h = 0
    while True:
        for j in range(d):
            acc = 0.0
            for i in range(n):
                acc += r[i] * X[i, j]
            v[j] = acc / m
        worst = 0.0
        for i in range(n):
            s = 0.0
            for j in range(d):
                if mode == 4:
                    s = max(s, abs(v[j] - X[i, j]))
                else:
                    s += _powsum(v[j] - X[i, j], mode, p)
            if s > worst:
                worst = s
                if worst >= best:
                    break
        if worst < best:
            best = worst
            best_r[:] = r
        if r[n - 1] == m:
            break
        # next weak composition of m into n parts
        if t > 1:
            h = 0
        h += 1
        t = r[h - 1]
        r[h - 1] = 0
        r[0] = t - 1
        r[h] += 1
    return best_r


def search_grid(X, m, p):
    """Integer weights ``r`` (summing to ``m``) minimizing the max powered
    p-distance from ``r @ X / m`` to the rows of ``X``; first minimum in
    enumeration order wins."""
    mode = {2.0: 1, 3.0: 2, 1.5: 3, math.inf: 4}.get(float(p), 0)
    return _search(np.ascontiguousarray(X, dtype=np.float64), int(m), mode, float(p))
