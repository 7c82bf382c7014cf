"""Compiled numerical cores.

The butterfly transform and the batched samplers live here as numba
kernels; everything is plain IEEE float64 arithmetic (no fastmath), so
results are bit-reproducible across processes and worker counts.

Rademacher signs are passed around as packed 64-bit words: bit ``j % 64``
of word ``j // 64`` set means ``+1`` at position ``j``, clear means ``-1``.
One uint64 therefore carries 64 sign draws, which keeps generator traffic
negligible next to the transform work.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def fwht_1d(x):
    """In-place unnormalized Walsh-Hadamard transform, natural ordering.

    Iterative radix-2 butterflies: after the pass with half-block size h,
    positions (j, j+h) hold (a+b, a-b).  Length must be a power of two;
    callers guarantee it.
    """
    d = x.shape[0]
    h = 1
    while h < d:
        step = h * 2
        for i in range(0, d, step):
            for j in range(i, i + h):
                a = x[j]
                b = x[j + h]
                x[j] = a + b
                x[j + h] = a - b
        h = step


@numba.njit(cache=True)
def fwht_rows(mat):
    """Apply ``fwht_1d`` to every row of a C-contiguous matrix, in place."""
    for r in range(mat.shape[0]):
        fwht_1d(mat[r])


@numba.njit(inline="always")
def _bit_sign(words, row, j):
    w = words[row, j >> 6]
    if (w >> (j & 63)) & np.uint64(1):
        return 1.0
    return -1.0


@numba.njit(cache=True)
def two_block_rows(u, d1_words, d2_words, out):
    """Fill ``out[r] = (1/d) * H @ diag(s1) @ H @ diag(s2) @ u`` per row.

    s1, s2 are the Rademacher signs unpacked from the packed word rows.
    """
    m, d = out.shape
    inv = 1.0 / d
    for r in range(m):
        row = out[r]
        for j in range(d):
            row[j] = _bit_sign(d2_words, r, j) * u[j]
        fwht_1d(row)
        for j in range(d):
            row[j] *= _bit_sign(d1_words, r, j)
        fwht_1d(row)
        for j in range(d):
            row[j] *= inv


@numba.njit(cache=True)
def two_block_coordinate_rows(u, h_row_k, d1_words, d2_words, out, buf):
    """Coordinate k of the two-block transform for a batch of sign draws.

    Computes only ``[T(u)]_k = (1/d) * sum_j H[k,j] s1[j] (H diag(s2) u)[j]``,
    with the +-1 row ``H[k, :]`` precomputed by the caller.  Half the work of
    the full transform, which matters in the marginal experiments.
    """
    m = d1_words.shape[0]
    d = u.shape[0]
    inv = 1.0 / d
    for r in range(m):
        for j in range(d):
            buf[j] = _bit_sign(d2_words, r, j) * u[j]
        fwht_1d(buf)
        acc = 0.0
        for j in range(d):
            acc += _bit_sign(d1_words, r, j) * h_row_k[j] * buf[j]
        out[r] = acc * inv


@numba.njit(cache=True)
def b_fourth_moment_rows(u, d2_words, out, buf):
    """Per draw of s2: sum of fourth powers of b = (1/sqrt d) H diag(s2) u."""
    m = d2_words.shape[0]
    d = u.shape[0]
    inv_d = 1.0 / d
    for r in range(m):
        for j in range(d):
            buf[j] = _bit_sign(d2_words, r, j) * u[j]
        fwht_1d(buf)
        acc = 0.0
        for j in range(d):
            # b_j**2 = buf[j]**2 / d, so b_j**4 = buf[j]**4 / d**2
            q = buf[j] * buf[j]
            acc += q * q
        out[r] = acc * inv_d * inv_d


@numba.njit(cache=True)
def hadamard_sign_row(k, d):
    """Row k of the unnormalized Hadamard matrix as +-1 floats.

    Entry j is (-1)**popcount(k AND j), the closed form of the Sylvester
    recursion.
    """
    row = np.empty(d, dtype=np.float64)
    for j in range(d):
        v = k & j
        bits = 0
        while v:
            v &= v - 1
            bits += 1
        row[j] = -1.0 if bits & 1 else 1.0
    return row
