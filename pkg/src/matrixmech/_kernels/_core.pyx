# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kick-drift-kick leapfrog kernel (the hot loop of the package).

Compiled without -ffast-math so floating-point semantics match the pure
backend exactly.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sin

cnp.import_array()


cdef inline double _dV(int family, const double* c, Py_ssize_t nc, double mass, double q) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t k
    if family == 0:      # harmonic: V' = mass * omega0^2 * q
        return mass * c[0] * c[0] * q
    elif family == 1:    # quartic: V' = lam * q^3
        return c[0] * q * q * q
    elif family == 2:    # pendulum: V' = (g/L) sin q
        return (c[0] / c[1]) * sin(q)
    else:                # polynomial: V' = sum_k k c_k q^(k-1), Horner
        for k in range(nc - 1, 0, -1):
            acc = acc * q + k * c[k]
        return acc


def leapfrog(int family, double[::1] params, double mass, double q0, double p0,
             double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    cdef Py_ssize_t n_out = n_steps // stride + 1
    q_arr = np.empty(n_out, dtype=np.float64)
    p_arr = np.empty(n_out, dtype=np.float64)
    cdef double[::1] qv = q_arr
    cdef double[::1] pv = p_arr
    cdef const double* c = NULL
    cdef Py_ssize_t nc = params.shape[0]
    if nc > 0:
        c = &params[0]
    cdef double q = q0
    cdef double p = p0
    cdef double half = 0.5 * dt
    cdef double dtm = dt / mass
    cdef double f
    cdef Py_ssize_t i, j = 0
    qv[0] = q
    pv[0] = p
    f = -_dV(family, c, nc, mass, q)
    with nogil:
        for i in range(1, n_steps + 1):
            p = p + half * f
            q = q + dtm * p
            f = -_dV(family, c, nc, mass, q)
            p = p + half * f
            if i % stride == 0:
                j += 1
                qv[j] = q
                pv[j] = p
    return q_arr, p_arr
