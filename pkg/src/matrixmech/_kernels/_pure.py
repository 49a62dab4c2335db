"""Pure-Python leapfrog backend.

Mirrors ``_core.pyx`` operation for operation (same expressions, same
evaluation order) so the two backends produce bit-compatible trajectories.
Plain floats and per-family closures keep the interpreter loop as cheap as
Python allows; expect roughly two orders of magnitude slower than the
compiled kernel.
"""

import math

import numpy as np


def _force(family, params, mass):
    if family == 0:  # harmonic: V' = mass * omega0^2 * q
        k = mass * params[0] * params[0]
        return lambda q: -(k * q)
    if family == 1:  # quartic: V' = lam * q^3
        lam = params[0]
        return lambda q: -(lam * q * q * q)
    if family == 2:  # pendulum: V' = (g/L) sin q
        gl = params[0] / params[1]
        sin = math.sin
        return lambda q: -(gl * sin(q))
    # polynomial: V' = sum_k k c_k q^(k-1), Horner from the top power
    dcoef = [k * c for k, c in enumerate(params)][1:]

    def poly_force(q, _d=tuple(reversed(dcoef))):
        acc = 0.0
        for c in _d:
            acc = acc * q + c
        return -acc

    return poly_force


def leapfrog(family, params, mass, q0, p0, dt, n_steps, stride):
    params = [float(x) for x in params]
    force = _force(family, params, mass)
    n_out = n_steps // stride + 1
    q_arr = np.empty(n_out)
    p_arr = np.empty(n_out)
    q = q0
    p = p0
    q_arr[0] = q
    p_arr[0] = p
    half = 0.5 * dt
    dtm = dt / mass
    f = force(q)
    j = 0
    for i in range(1, n_steps + 1):
        p = p + half * f
        q = q + dtm * p
        f = force(q)
        p = p + half * f
        if i % stride == 0:
            j += 1
            q_arr[j] = q
            p_arr[j] = p
    return q_arr, p_arr
