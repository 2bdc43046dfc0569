"""Pure-numpy reference kernels for the sequence-algebra inner loops.

These are the hot paths of the package: every classification, transform, and
verification suite funnels through them thousands of times at small block
sizes. `_kernels_numba.py` carries @njit twins; `_backend.py` picks one set.

All kernels take/return stacked (n_terms, q, q) complex128 arrays and never
touch tolerance logic — pseudoinverses are computed by the caller.
"""

from __future__ import annotations

import numpy as np


def reciprocal_forward(s: np.ndarray, s0_pinv: np.ndarray) -> np.ndarray:
    """r_0 = s0_pinv; r_j = -s0_pinv @ sum_{l<j} s_{j-l} r_l."""
    m, q, _ = s.shape
    r = np.zeros((m, q, q), dtype=np.complex128)
    r[0] = s0_pinv
    for j in range(1, m):
        acc = np.zeros((q, q), dtype=np.complex128)
        for l in range(j):
            acc += s[j - l] @ r[l]
        r[j] = -(s0_pinv @ acc)
    return r


def reciprocal_dual(s: np.ndarray, s0_pinv: np.ndarray) -> np.ndarray:
    """r_0 = s0_pinv; r_j = -(sum_{l=1..j} r_{j-l} s_l) @ s0_pinv."""
    m, q, _ = s.shape
    r = np.zeros((m, q, q), dtype=np.complex128)
    r[0] = s0_pinv
    for j in range(1, m):
        acc = np.zeros((q, q), dtype=np.complex128)
        for l in range(1, j + 1):
            acc += r[j - l] @ s[l]
        r[j] = -(acc @ s0_pinv)
    return r


def cauchy_product(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Term-wise convolution w_j = sum_{l<=j} s_l t_{j-l} of stacked sequences."""
    m = min(s.shape[0], t.shape[0])
    w = np.zeros((m, s.shape[1], t.shape[2]), dtype=np.complex128)
    for j in range(m):
        acc = np.zeros((s.shape[1], t.shape[2]), dtype=np.complex128)
        for l in range(j + 1):
            acc += s[l] @ t[j - l]
        w[j] = acc
    return w


def power_moments(nodes: np.ndarray, weights: np.ndarray, kappa: int) -> np.ndarray:
    """s_j = sum_l nodes_l^j * weights_l for j = 0..kappa."""
    n_atoms = nodes.shape[0]
    q = weights.shape[1] if n_atoms else 1
    s = np.zeros((kappa + 1, q, q), dtype=np.complex128)
    for l in range(n_atoms):
        x = 1.0
        for j in range(kappa + 1):
            s[j] += x * weights[l]
            x *= nodes[l]
    return s
