"""From classical Fourier data to transition matrices.

The action is discretized as I_m = m hbar; each matrix entry (m, n) inside
a band |m - n| <= W is the (m - n)-th orbit Fourier coefficient of the
observable, evaluated at an action selected by a convention. Frequencies
come from the energy ladder, omega[m, n] = (E_m - E_n) / hbar, so the
tables close under composition exactly and matrix products respect the
time-dependent phase factors. Commutators of the quantized momentum and
position reduce to (hbar/i) times the classical bracket, exactly for the
oscillator and asymptotically (small jumps, large level) in general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classical_dynamics import (
    DEFAULT_DT_HINT,
    DEFAULT_OVERSAMPLE,
    DEFAULT_SAMPLES,
    bracket_observable,
    energy_at_action,
    observable_label,
    orbit_fourier_coefficients,
    resolve_observable,
)
from .errors import BandError, GridMismatchError
from .spectral_algebra import FrequencyTable

CONVENTIONS = ("upper", "row", "midpoint")


@dataclass(eq=False)
class ActionGrid:
    """Ladder of actions I_m = m hbar with energies E_m = H(I_m).

    Level 0 is the degenerate orbit at the potential minimum (I = 0,
    E_0 = min V). Orbits are cached per half-level (the midpoint convention
    needs actions (m + n) hbar / 2) and shared across observables.
    """

    system: object
    hbar: float
    n_levels: int
    energies: np.ndarray
    _orbits: dict = field(default_factory=dict, repr=False)
    _solver: dict = field(default_factory=dict, repr=False)
    _freqs: object = field(default=None, repr=False)

    def __post_init__(self):
        e = np.array(self.energies, dtype=float)
        e.setflags(write=False)
        self.energies = e
        if len(e) != self.n_levels:
            raise ValueError("energies length must equal n_levels")

    @property
    def actions(self):
        return self.hbar * np.arange(self.n_levels)

    @property
    def quantum_actions(self):
        """J_m = 2 pi I_m = m h: the loop-integral quantization bookkeeping."""
        return 2.0 * math.pi * self.actions

    @property
    def frequency_table(self):
        if self._freqs is None:
            self._freqs = FrequencyTable.from_term_values(self.energies / self.hbar)
        return self._freqs

    @classmethod
    def from_energies(cls, hbar, energies, system=None):
        """Grid with externally supplied energies (no orbit data: quantize
        needs a grid built from a system)."""
        energies = np.asarray(energies, dtype=float)
        return cls(system=system, hbar=float(hbar), n_levels=len(energies), energies=energies)

    def orbit_at(self, twice_level):
        """Orbit with action (twice_level / 2) * hbar, computed on demand
        and cached."""
        if self.system is None:
            raise GridMismatchError("this grid carries no system; orbits unavailable")
        if twice_level <= 0:
            raise ValueError("no orbit at or below the degenerate level")
        orb = self._orbits.get(twice_level)
        if orb is None:
            target = 0.5 * twice_level * self.hbar
            lower = None
            period_hint = None
            below = [k for k in self._orbits if k < twice_level]
            if below:
                k = max(below)
                lower = self._orbits[k].energy
                period_hint = self._orbits[k].period
            above = [k for k in self._orbits if k > twice_level]
            upper = self._orbits[min(above)].energy if above else None
            _, orb = energy_at_action(
                self.system,
                target,
                lower=lower,
                upper_guess=upper,
                period_hint=period_hint,
                **self._solver,
            )
            self._orbits[twice_level] = orb
        return orb

    def coefficients_at(self, observable, band, twice_level):
        """Orbit Fourier coefficients a_l, |l| <= band, at the half-level's
        action. Level 0 is the shrunken-orbit limit: a_0 is the observable
        at the minimum and every overtone vanishes."""
        if twice_level == 0:
            f = resolve_observable(observable, self.system)
            qmin, _ = self.system.minimum()
            base = complex(f(qmin, 0.0))
            return {ell: (base if ell == 0 else 0j) for ell in range(-band, band + 1)}
        series = orbit_fourier_coefficients(self.orbit_at(twice_level), observable, (-band, band))
        return {ell: series[ell] for ell in range(-band, band + 1)}


def build_action_grid(
    system,
    hbar,
    n_levels,
    *,
    dt_hint=DEFAULT_DT_HINT,
    n_samples=DEFAULT_SAMPLES,
    oversample=DEFAULT_OVERSAMPLE,
):
    """Quantize the action: solve I(E_m) = m hbar for each level.

    Root finding walks up the ladder, warm-starting each bracket from the
    previous level's energy and period.
    """
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar!r}")
    if n_levels < 1:
        raise ValueError(f"need at least one level, got {n_levels}")
    _, vmin = system.minimum()
    solver = {"dt_hint": dt_hint, "n_samples": n_samples, "oversample": oversample}
    energies = np.empty(n_levels)
    energies[0] = vmin
    orbits = {}
    prev_energy = None
    prev_orbit = None
    for m in range(1, n_levels):
        upper = None
        if prev_orbit is not None:
            upper = prev_energy + 1.25 * prev_orbit.omega * hbar
        e_m, orb = energy_at_action(
            system,
            m * hbar,
            lower=prev_energy,
            upper_guess=upper,
            period_hint=prev_orbit.period if prev_orbit else None,
            **solver,
        )
        energies[m] = e_m
        orbits[2 * m] = orb
        prev_energy, prev_orbit = e_m, orb
    grid = ActionGrid(system=system, hbar=float(hbar), n_levels=n_levels, energies=energies)
    grid._orbits.update(orbits)
    grid._solver.update(solver)
    return grid


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True, eq=False)
class HeisenbergMatrix:
    """Banded transition-amplitude matrix A(m, n) over an action grid.

    The physical, time-dependent object is A(m, n) e^{i omega[m,n] t};
    amplitudes are stored at t = 0 and the phase factors are applied by
    ``at_time``. |A(m, n)|^2 is the intensity (jump probability weight) of
    the (m, n) line.
    """

    grid: ActionGrid
    label: str
    convention: str
    band: int
    amp: np.ndarray

    def __post_init__(self):
        a = np.array(self.amp, dtype=complex)
        a.setflags(write=False)
        object.__setattr__(self, "amp", a)

    @property
    def n(self):
        return self.amp.shape[0]

    @property
    def freqs(self):
        return self.grid.frequency_table

    def is_hermitian(self, tol=1e-10):
        scale = max(1.0, float(np.max(np.abs(self.amp))))
        return float(np.max(np.abs(self.amp - self.amp.conj().T))) <= tol * scale

    def at_time(self, t):
        return self.amp * np.exp(1j * self.freqs.omega * t)

    def to_json_obj(self):
        return {
            "N": int(self.n),
            "hbar": float(self.grid.hbar),
            "label": self.label,
            "convention": self.convention,
            "band": int(self.band),
            "energies": [float(e) for e in self.grid.energies],
            "amp": [[[z.real, z.imag] for z in row] for row in self.amp],
        }

    @classmethod
    def from_json_obj(cls, obj, system=None):
        grid = ActionGrid.from_energies(obj["hbar"], obj["energies"], system=system)
        amp = np.array(
            [[complex(re, im) for re, im in row] for row in obj["amp"]], dtype=complex
        )
        return cls(
            grid=grid,
            label=obj["label"],
            convention=obj["convention"],
            band=int(obj["band"]),
            amp=amp,
        )


def quantize(grid, observable, convention="upper", band=2):
    """Build the banded matrix of an observable on the action grid.

    Entry (m, n) with |m - n| <= band is a_{m-n}(I*), the classical orbit
    Fourier coefficient at the action picked by ``convention``:

    - upper:    I* = max(m, n) hbar  (reproduces the exact oscillator ladder)
    - row:      I* = m hbar
    - midpoint: I* = (m + n) hbar / 2

    Entries beyond the band are zero: they correspond to high classical
    harmonics, whose amplitudes decay fast for smooth observables, and the
    explicit cutoff keeps the truncation visible. Real observables give
    Hermitian matrices under upper and midpoint.
    """
    n = grid.n_levels
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    if not 0 <= band < n:
        raise BandError(f"band {band} does not fit a {n}-level matrix")
    windows = [(m, k) for m in range(n) for k in range(max(0, m - band), min(n, m + band + 1))]
    if convention == "upper":
        twice = {(m, k): 2 * max(m, k) for m, k in windows}
    elif convention == "row":
        twice = {(m, k): 2 * m for m, k in windows}
    else:
        twice = {(m, k): m + k for m, k in windows}
    coeffs = {tl: grid.coefficients_at(observable, band, tl) for tl in sorted(set(twice.values()))}
    amp = np.zeros((n, n), dtype=complex)
    for (m, k), tl in twice.items():
        amp[m, k] = coeffs[tl][m - k]
    return HeisenbergMatrix(
        grid=grid,
        label=observable_label(observable),
        convention=convention,
        band=band,
        amp=amp,
    )


def evaluate_at_time(matrix, t):
    """Entrywise amp(m, n) e^{i omega[m,n] t}."""
    return matrix.at_time(t)


def matrix_difference(matrix, k):
    """(Delta_k A)(m, n) = A(m, n) - A(m - k, n - k).

    Entries whose shifted index falls off the matrix are masked (invalid),
    not zero-filled: the discrete action derivative simply does not exist
    there.
    """
    amp = matrix.amp
    n = amp.shape[0]
    out = np.ma.masked_all((n, n), dtype=complex)
    if abs(k) >= n:
        return out
    if k >= 0:
        out[k:, k:] = amp[k:, k:] - amp[: n - k, : n - k]
    else:
        j = -k
        out[: n - j, : n - j] = amp[: n - j, : n - j] - amp[j:, j:]
    return out


def _require_same_grid(a, b):
    if a.grid is b.grid:
        return
    if (
        a.grid.hbar == b.grid.hbar
        and a.grid.n_levels == b.grid.n_levels
        and np.array_equal(a.grid.energies, b.grid.energies)
    ):
        return
    raise GridMismatchError(
        f"matrices live on different grids ({a.label!r} vs {b.label!r})"
    )


def commutator(a, b):
    """amp(A) amp(B) - amp(B) amp(A).

    Computed on the t = 0 amplitudes; the shared frequency table closes
    under composition, so the phase factors cancel identically and the
    result is again a matrix over the same grid.
    """
    _require_same_grid(a, b)
    return a.amp @ b.amp - b.amp @ a.amp


@dataclass(frozen=True, eq=False)
class CcrReport:
    """[P, Q] against (hbar/i) * identity on the interior block."""

    max_diag_dev: float
    max_offdiag: float
    interior: range
    hbar: float
    commutator: np.ndarray

    def rows(self):
        """CSV rows (m, re_dev, im_dev, max_offdiag_row) over the interior."""
        target = self.hbar / 1j
        lo, hi = self.interior.start, self.interior.stop
        for m in self.interior:
            dev = self.commutator[m, m] - target
            row = np.abs(self.commutator[m, lo:hi])
            row[m - lo] = 0.0
            yield m, dev.real, dev.imag, float(np.max(row)) if len(row) > 1 else 0.0


def ccr_residual(grid, band=2, convention="upper"):
    """Quantize p and q, commute them, and compare against (hbar/i) I on
    the interior rows/columns band <= m <= N-1-band (edge rows feel the
    band truncation and are excluded by construction)."""
    n = grid.n_levels
    needed = max(band + 3, 2 * band + 1)
    if n < needed:
        raise BandError(f"need at least {needed} levels for band {band}, got {n}")
    p_mat = quantize(grid, "p", convention=convention, band=band)
    q_mat = quantize(grid, "q", convention=convention, band=band)
    comm = commutator(p_mat, q_mat)
    target = grid.hbar / 1j
    interior = range(band, n - band)
    sub = comm[np.ix_(interior, interior)]
    diag = np.diagonal(sub)
    off = sub - np.diag(diag)
    return CcrReport(
        max_diag_dev=float(np.max(np.abs(diag - target))),
        max_offdiag=float(np.max(np.abs(off))) if sub.shape[0] > 1 else 0.0,
        interior=interior,
        hbar=grid.hbar,
        commutator=comm,
    )


@dataclass(frozen=True)
class CorrespondenceReport:
    matrix_value: complex
    bracket_value: complex
    bracket_convolution: complex
    rel_error: float


def correspondence_check(grid, a, b, ell, m, band):
    """Compare (AB - BA)(m, m - ell) against (hbar/i) {a, b}(ell) on the
    orbit at I = m hbar.

    The bracket coefficient is computed two independent ways and both are
    reported:

    (i)  pointwise central differences of {a, b} in phase space, projected
         onto the orbit's ell-th harmonic (``bracket_value``);
    (ii) the coefficient convolution sum over j + k = ell of
         D_I a(j) * (i k b_k) - (i j a_j) * D_I b(k), where D_I is the
         backward difference quotient (X(m hbar) - X((m-1) hbar)) / hbar
         and i k b_k is the k-th coefficient of db/dtheta (vanishing at
         k = 0, so the j = ell term enters through the D_I factor)
         (``bracket_convolution``).

    Their mutual agreement guards the sign convention. ``rel_error`` is
    |matrix - bracket| / max(|bracket|, hbar): flooring the denominator at
    hbar (the natural commutator scale) keeps vanishing brackets from
    blowing up the ratio.
    """
    n = grid.n_levels
    if band < abs(ell) + 2:
        raise BandError(f"band must be at least |ell| + 2 = {abs(ell) + 2}, got {band}")
    if not band <= m <= n - 1 - band:
        raise BandError(f"row {m} outside the interior [{band}, {n - 1 - band}]")
    a_mat = quantize(grid, a, convention="upper", band=band)
    b_mat = quantize(grid, b, convention="upper", band=band)
    matrix_value = complex(commutator(a_mat, b_mat)[m, m - ell])

    hbar = grid.hbar
    # (i) pointwise bracket pushed through the orbit projection
    pointwise = bracket_observable(a, b, grid.system)
    series = orbit_fourier_coefficients(grid.orbit_at(2 * m), pointwise, (ell, ell))
    bracket_value = complex(-1j * hbar * series[ell])

    # (ii) convolution of coefficient data with difference quotients in I
    ca = grid.coefficients_at(a, band, 2 * m)
    cb = grid.coefficients_at(b, band, 2 * m)
    ca_prev = grid.coefficients_at(a, band, 2 * (m - 1))
    cb_prev = grid.coefficients_at(b, band, 2 * (m - 1))
    total = 0j
    for j in range(-band, band + 1):
        k = ell - j
        if abs(k) > band:
            continue
        da_j = (ca[j] - ca_prev[j]) / hbar
        db_k = (cb[k] - cb_prev[k]) / hbar
        total += da_j * (1j * k * cb[k]) - (1j * j * ca[j]) * db_k
    bracket_convolution = complex(-1j * hbar * total)

    rel_error = abs(matrix_value - bracket_value) / max(abs(bracket_value), hbar)
    return CorrespondenceReport(
        matrix_value=matrix_value,
        bracket_value=bracket_value,
        bracket_convolution=bracket_convolution,
        rel_error=float(rel_error),
    )
