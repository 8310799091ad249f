"""Pure-python/numpy candidate-scan kernel.

This is the import-time fallback for (and the reference twin of) the
compiled kernel in ``uniflag._kernels``. Both spell out the same
arithmetic in the same order, so their outputs agree bit for bit; the
equivalence test in tests/test_backends.py holds them to that.
"""

from __future__ import annotations

import math

import numpy as np


def z_from_counts(n_iqr: int, pos_iqr: int, n_out: int, pos_out: int) -> float:
    """Two-sample proportion z-statistic of the outside region against the
    interquartile baseline, computed from raw counts.

    The pooled rate uses the combined positives over the combined total,
    and the numerator is formed from integer cross products, so swapping
    class labels negates the result exactly. When the pooled rate is 0 or
    1 both proportions are equal and the statistic is defined as 0.
    """
    total = n_iqr + n_out
    pos = pos_iqr + pos_out
    if pos == 0 or pos == total:
        return 0.0
    p_wa = pos / total
    q_wa = (total - pos) / total
    num = (pos_out * n_iqr - pos_iqr * n_out) / (n_out * n_iqr)
    return num / math.sqrt((p_wa * q_wa) * (1.0 / n_iqr + 1.0 / n_out))


def scan_best(values, pos_prefix, cuts, below, n_iqr, pos_iqr, min_support):
    """Evaluate every candidate cut and return the winning one.

    values     sorted (ascending) present values, float64
    pos_prefix int64 array of length n+1; pos_prefix[i] = positives among
               the first i sorted values
    cuts       candidate cuts, ascending float64
    below      True for the region ``value < cut``; False for ``value > cut``
    Returns (cut_index, n_out, pos_out, z) for the candidate with the
    largest |z| among those with support >= min_support, or None when no
    candidate qualifies. Ties prefer larger support, then the smallest cut.
    """
    n = len(values)
    if below:
        idx = np.searchsorted(values, cuts, side="left")
        n_out = idx
        pos_out = pos_prefix[idx]
    else:
        idx = np.searchsorted(values, cuts, side="right")
        n_out = n - idx
        pos_out = pos_prefix[n] - pos_prefix[idx]

    best_i = -1
    best_z = 0.0
    best_abs = -1.0
    best_n = -1
    best_pos = 0
    for i in range(len(cuts)):
        no = int(n_out[i])
        if no < min_support:
            continue
        po = int(pos_out[i])
        z = z_from_counts(n_iqr, pos_iqr, no, po)
        az = abs(z)
        if az > best_abs or (az == best_abs and no > best_n):
            best_i, best_z, best_abs, best_n, best_pos = i, z, az, no, po
    if best_i < 0:
        return None
    return best_i, best_n, best_pos, best_z
