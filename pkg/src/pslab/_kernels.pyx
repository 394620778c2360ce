# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled relaxation kernels.

Expression ordering matches the numpy fallback exactly (see
_kernels_py.py) so the two backends produce bit-identical iterates; the
build disables floating point contraction for the same reason.
"""

BACKEND = "compiled"


def relax_2d(double[:, ::1] a, double[:, ::1] b, double beta, double h2,
             double omega):
    cdef Py_ssize_t n0 = a.shape[0], n1 = a.shape[1]
    cdef Py_ssize_t i, j, j0, c
    cdef double cb = h2 * beta
    cdef double s, denom, new
    for c in range(2):
        for i in range(1, n0 - 1):
            j0 = 1 if (i + 1) % 2 == c else 2
            for j in range(j0, n1 - 1, 2):
                s = (a[i - 1, j] + a[i + 1, j]) + (a[i, j - 1] + a[i, j + 1])
                denom = 4.0 + cb * (b[i, j] * b[i, j])
                new = a[i, j] + omega * (s / denom - a[i, j])
                if new < 0.0:
                    new = 0.0
                a[i, j] = new


def relax_3d(double[:, :, ::1] a, double[:, :, ::1] b, double beta, double h2,
             double omega):
    cdef Py_ssize_t n0 = a.shape[0], n1 = a.shape[1], n2 = a.shape[2]
    cdef Py_ssize_t i, j, k, k0, c
    cdef double cb = h2 * beta
    cdef double s, denom, new
    for c in range(2):
        for i in range(1, n0 - 1):
            for j in range(1, n1 - 1):
                k0 = 1 if (i + j + 1) % 2 == c else 2
                for k in range(k0, n2 - 1, 2):
                    s = ((a[i - 1, j, k] + a[i + 1, j, k])
                         + (a[i, j - 1, k] + a[i, j + 1, k])) \
                        + (a[i, j, k - 1] + a[i, j, k + 1])
                    denom = 6.0 + cb * (b[i, j, k] * b[i, j, k])
                    new = a[i, j, k] + omega * (s / denom - a[i, j, k])
                    if new < 0.0:
                        new = 0.0
                    a[i, j, k] = new


def residual_2d(double[:, ::1] a, double[:, ::1] b, double beta, double h2):
    cdef Py_ssize_t n0 = a.shape[0], n1 = a.shape[1]
    cdef Py_ssize_t i, j
    cdef double s, r, best = 0.0
    for i in range(1, n0 - 1):
        for j in range(1, n1 - 1):
            s = (a[i - 1, j] + a[i + 1, j]) + (a[i, j - 1] + a[i, j + 1])
            r = (s - 4.0 * a[i, j]) / h2 - beta * (a[i, j] * (b[i, j] * b[i, j]))
            if r < 0.0:
                r = -r
            if r > best:
                best = r
    return best


def residual_3d(double[:, :, ::1] a, double[:, :, ::1] b, double beta,
                double h2):
    cdef Py_ssize_t n0 = a.shape[0], n1 = a.shape[1], n2 = a.shape[2]
    cdef Py_ssize_t i, j, k
    cdef double s, r, best = 0.0
    for i in range(1, n0 - 1):
        for j in range(1, n1 - 1):
            for k in range(1, n2 - 1):
                s = ((a[i - 1, j, k] + a[i + 1, j, k])
                     + (a[i, j - 1, k] + a[i, j + 1, k])) \
                    + (a[i, j, k - 1] + a[i, j, k + 1])
                r = (s - 6.0 * a[i, j, k]) / h2 \
                    - beta * (a[i, j, k] * (b[i, j, k] * b[i, j, k]))
                if r < 0.0:
                    r = -r
                if r > best:
                    best = r
    return best
