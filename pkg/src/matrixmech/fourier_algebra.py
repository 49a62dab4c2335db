"""Sparse finite Fourier series over one fundamental frequency.

The series with a fixed omega form a commutative *-algebra: pointwise
multiplication is coefficient convolution, and conjugation flips the index
sign. Everything here is exact sparse arithmetic; supports grow under
multiplication and are never truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FrequencyMismatchError

# Absolute tolerance for the conjugate-symmetry test behind `is_real`
# (covers double-precision roundoff from convolution sums).
REAL_FLAG_TOL = 1e-14


def _normalized(coeffs):
    out = {}
    for n, c in coeffs.items():
        c = complex(c)
        if c != 0:
            out[int(n)] = c
    return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """f(t) = sum_n c_n exp(i n omega t) with finitely many nonzero c_n.

    ``omega`` (rad/time) must be strictly positive. Series with different
    stored omega belong to different algebras: multiplication and addition
    require exact bit equality of omega, so series from distinct orbits are
    never silently mixed.
    """

    omega: float
    coeffs: dict[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        omega = float(self.omega)
        if not (math.isfinite(omega) and omega > 0):
            raise ValueError(f"omega must be positive and finite, got {self.omega!r}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "coeffs", _normalized(self.coeffs))

    # -- basic queries -------------------------------------------------

    @property
    def support(self):
        return tuple(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs.get(n, 0j)

    @property
    def is_real(self):
        """True iff c_{-n} == conj(c_n) for all n, within REAL_FLAG_TOL."""
        return all(
            abs(self.coeffs.get(-n, 0j) - self.coeffs.get(n, 0j).conjugate()) <= REAL_FLAG_TOL
            for n in self.coeffs
        )

    # -- evaluation ----------------------------------------------------

    def __call__(self, t):
        """Evaluate sum_n c_n exp(i n omega t); t may be a scalar or array."""
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros(t_arr.shape, dtype=complex)
        for n, c in self.coeffs.items():
            out += c * np.exp(1j * (n * self.omega) * t_arr)
        return complex(out) if t_arr.ndim == 0 else out

    # -- algebra -------------------------------------------------------

    def _check_same_algebra(self, other):
        if self.omega != other.omega:
            raise FrequencyMismatchError(
                f"series have different fundamental frequencies "
                f"({self.omega!r} vs {other.omega!r})"
            )

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            self._check_same_algebra(other)
            out = {}
            for n, c in self.coeffs.items():
                for m, d in other.coeffs.items():
                    k = n + m
                    out[k] = out.get(k, 0j) + c * d
            return FourierSeries(self.omega, out)
        return FourierSeries(self.omega, {n: other * c for n, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __add__(self, other):
        self._check_same_algebra(other)
        out = dict(self.coeffs)
        for n, d in other.coeffs.items():
            out[n] = out.get(n, 0j) + d
        return FourierSeries(self.omega, out)

    def __neg__(self):
        return FourierSeries(self.omega, {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def conjugate(self):
        """The involution: coefficients c*_n = conj(c_{-n})."""
        return FourierSeries(self.omega, {-n: c.conjugate() for n, c in self.coeffs.items()})

    # -- serialization ---------------------------------------------------

    def to_json_obj(self):
        return {
            "omega": self.omega,
            "coeffs": [[n, c.real, c.imag] for n, c in self.coeffs.items()],
        }

    @classmethod
    def from_json_obj(cls, obj):
        return cls(obj["omega"], {int(n): complex(re, im) for n, re, im in obj["coeffs"]})


def evaluate(series, t):
    return series(t)


def multiply(f, g):
    """Pointwise product; coefficients are the convolution of the factors'."""
    return f * g


def involution(f):
    return f.conjugate()


def coefficient_distance(f, g):
    """Max coefficient-wise |f_n - g_n| over the union of supports."""
    keys = set(f.coeffs) | set(g.coeffs)
    if not keys:
        return 0.0
    return max(abs(f[n] - g[n]) for n in keys)
