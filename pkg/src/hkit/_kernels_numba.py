"""Numba @njit twins of the reference kernels in `_kernels.py`.

Kept line-for-line parallel with the numpy versions so the two lanes can be
diffed and benchmarked; `tests/test_kernels.py` asserts bit-level agreement.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def reciprocal_forward(s, s0_pinv):
    m, q, _ = s.shape
    r = np.zeros((m, q, q), dtype=np.complex128)
    r[0] = s0_pinv
    for j in range(1, m):
        acc = np.zeros((q, q), dtype=np.complex128)
        for l in range(j):
            acc += np.dot(s[j - l], r[l])
        r[j] = -np.dot(s0_pinv, acc)
    return r


@njit(cache=True)
def reciprocal_dual(s, s0_pinv):
    m, q, _ = s.shape
    r = np.zeros((m, q, q), dtype=np.complex128)
    r[0] = s0_pinv
    for j in range(1, m):
        acc = np.zeros((q, q), dtype=np.complex128)
        for l in range(1, j + 1):
            acc += np.dot(r[j - l], s[l])
        r[j] = -np.dot(acc, s0_pinv)
    return r


@njit(cache=True)
def cauchy_product(s, t):
    m = min(s.shape[0], t.shape[0])
    w = np.zeros((m, s.shape[1], t.shape[2]), dtype=np.complex128)
    for j in range(m):
        acc = np.zeros((s.shape[1], t.shape[2]), dtype=np.complex128)
        for l in range(j + 1):
            acc += np.dot(s[l], t[j - l])
        w[j] = acc
    return w


@njit(cache=True)
def power_moments(nodes, weights, kappa):
    n_atoms = nodes.shape[0]
    q = weights.shape[1] if n_atoms else 1
    s = np.zeros((kappa + 1, q, q), dtype=np.complex128)
    for l in range(n_atoms):
        x = 1.0
        for j in range(kappa + 1):
            s[j] += x * weights[l]
            x *= nodes[l]
    return s
