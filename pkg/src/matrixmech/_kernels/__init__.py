"""Leapfrog integration kernels.

The inner time-stepping loop dominates the runtime of everything built on
orbits (period detection, action-map inversion, matrix quantization), so it
lives in a compiled Cython extension (``_core``) with a pure-Python twin
(``_pure``) selected automatically when the extension is unavailable.

Both backends implement the same function with identical floating-point
operation order, so results agree to the last bits. Set the environment
variable ``MATRIXMECH_BACKEND=pure`` (or ``compiled``) to force a choice at
import time; ``select_backend`` switches at runtime (used by the benchmark
and tests).
"""

import os

import numpy as np

from . import _pure

# Potential family codes shared with the kernels and HamiltonianSystem.
HARMONIC = 0
QUARTIC = 1
PENDULUM = 2
POLYNOMIAL = 3

_PARAM_COUNTS = {HARMONIC: 1, QUARTIC: 1, PENDULUM: 2}

try:
    from . import _core
except ImportError:
    _core = None

_BACKENDS = {"pure": _pure}
if _core is not None:
    _BACKENDS["compiled"] = _core


def _initial_backend():
    forced = os.environ.get("MATRIXMECH_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(
                f"MATRIXMECH_BACKEND={forced!r} requested but only "
                f"{sorted(_BACKENDS)} are available"
            )
        return forced
    return "compiled" if _core is not None else "pure"


_active = _initial_backend()


def backend_name():
    return _active


def available_backends():
    return sorted(_BACKENDS)


def select_backend(name):
    """Switch the active kernel backend ('pure' or 'compiled')."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_BACKENDS)}")
    _active = name


def leapfrog(family, params, mass, q0, p0, dt, n_steps, stride=1, backend=None):
    """Integrate Hamilton's equations with the kick-drift-kick scheme.

    Records the state every ``stride`` steps, including the initial one, so
    the returned arrays have ``n_steps // stride + 1`` entries. ``n_steps``
    must be a multiple of ``stride``.
    """
    params = np.ascontiguousarray(params, dtype=np.float64)
    expected = _PARAM_COUNTS.get(family)
    if expected is not None and params.shape[0] != expected:
        raise ValueError(f"family {family} takes {expected} parameter(s), got {params.shape[0]}")
    if family not in (HARMONIC, QUARTIC, PENDULUM, POLYNOMIAL):
        raise ValueError(f"unknown potential family code {family}")
    if n_steps <= 0 or stride <= 0 or n_steps % stride:
        raise ValueError("n_steps must be a positive multiple of stride")
    impl = _BACKENDS[backend or _active]
    return impl.leapfrog(
        int(family), params, float(mass), float(q0), float(p0), float(dt), int(n_steps), int(stride)
    )
