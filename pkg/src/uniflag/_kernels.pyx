# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled candidate-scan kernel; twin of ``uniflag._kernels_py``.

Keep the arithmetic here and in the python twin structurally identical:
the test suite asserts bit-for-bit equal results. The extension is built
with -ffp-contract=off so the compiler cannot fuse the float expressions
into something the python twin would not compute.
"""

from libc.math cimport fabs, sqrt


cdef double _z(long long n_iqr, long long pos_iqr,
               long long n_out, long long pos_out) noexcept nogil:
    cdef long long total = n_iqr + n_out
    cdef long long pos = pos_iqr + pos_out
    cdef double p_wa, q_wa, num
    if pos == 0 or pos == total:
        return 0.0
    p_wa = <double> pos / <double> total
    q_wa = <double> (total - pos) / <double> total
    num = <double> (pos_out * n_iqr - pos_iqr * n_out) / <double> (n_out * n_iqr)
    return num / sqrt((p_wa * q_wa) * (1.0 / <double> n_iqr + 1.0 / <double> n_out))


cdef Py_ssize_t _lower_bound(const double[::1] a, double x) noexcept nogil:
    # first index with a[idx] >= x
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef Py_ssize_t _upper_bound(const double[::1] a, double x) noexcept nogil:
    # first index with a[idx] > x
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def z_from_counts(n_iqr, pos_iqr, n_out, pos_out):
    """Scalar z-statistic from raw counts (see the python twin)."""
    return _z(n_iqr, pos_iqr, n_out, pos_out)


def scan_best(const double[::1] values, const long long[::1] pos_prefix,
              const double[::1] cuts, bint below,
              long long n_iqr, long long pos_iqr, long long min_support):
    """Evaluate every candidate cut and return the winning one.

    Same contract as the python twin: (cut_index, n_out, pos_out, z) for
    the candidate maximizing |z| subject to support >= min_support, ties
    preferring larger support then the smallest cut; None if no candidate
    qualifies.
    """
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t k = cuts.shape[0]
    cdef Py_ssize_t i, idx
    cdef long long no, po
    cdef double z, az
    cdef Py_ssize_t best_i = -1
    cdef double best_z = 0.0
    cdef double best_abs = -1.0
    cdef long long best_n = -1
    cdef long long best_pos = 0

    with nogil:
        for i in range(k):
            if below:
                idx = _lower_bound(values, cuts[i])
                no = idx
                po = pos_prefix[idx]
            else:
                idx = _upper_bound(values, cuts[i])
                no = n - idx
                po = pos_prefix[n] - pos_prefix[idx]
            if no < min_support:
                continue
            z = _z(n_iqr, pos_iqr, no, po)
            az = fabs(z)
            if az > best_abs or (az == best_abs and no > best_n):
                best_i = i
                best_z = z
                best_abs = az
                best_n = no
                best_pos = po
    if best_i < 0:
        return None
    return int(best_i), int(best_n), int(best_pos), float(best_z)
