"""Transition-frequency tables and their term-value generators.

A consistent table of transition frequencies closes under composition,
omega[m,n] + omega[n,p] = omega[m,p], which forces omega[m,n] = C_m - C_n
for single-indexed term values C. This module checks closure exhaustively,
fits term values to observed lines by least squares (gauge C_0 = 0), and
provides the hydrogen-like model with term values 2*pi*R*c/m^2 together
with its large-level overtone limit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraphError, InvalidLevelError, JumpRangeError

# Default closure tolerance, relative to the largest table entry.
RITZ_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class FrequencyTable:
    """N x N table of angular transition frequencies omega[m, n] (rad/time).

    A valid table is antisymmetric with zero diagonal and closes under
    composition. Construction checks only shape and finiteness so that the
    checker operations can inspect deliberately corrupted tables.
    """

    omega: np.ndarray

    def __post_init__(self):
        w = np.array(self.omega, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("table entries must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "omega", w)

    @property
    def size(self):
        return self.omega.shape[0]

    @classmethod
    def from_term_values(cls, terms):
        terms = np.asarray(terms, dtype=float)
        return cls(terms[:, None] - terms[None, :])

    def max_diagonal(self):
        return float(np.max(np.abs(np.diagonal(self.omega))))

    def max_antisymmetry_violation(self):
        return float(np.max(np.abs(self.omega + self.omega.T)))


@dataclass(frozen=True, eq=False)
class TermValues:
    """Single-indexed generators C_m of a frequency table, with one entry
    pinned to zero (the gauge: tables only determine C up to a constant)."""

    terms: np.ndarray
    gauge: int = 0
    residual: float = 0.0

    def __post_init__(self):
        t = np.array(self.terms, dtype=float)
        t.setflags(write=False)
        object.__setattr__(self, "terms", t)

    def table(self):
        return FrequencyTable.from_term_values(self.terms)

    def to_json_obj(self):
        return {
            "gauge_index": self.gauge,
            "terms": [float(x) for x in self.terms],
            "residual": float(self.residual),
        }


@dataclass(frozen=True)
class RitzReport:
    ok: bool
    worst_violation: float
    worst_triple: tuple[int, int, int]
    tol: float


def check_ritz(table, tol=None):
    """Exhaustively scan |omega[m,n] + omega[n,p] - omega[m,p]| over all N^3
    triples.

    ``tol`` defaults to RITZ_RTOL * max|omega|. The reported triple is the
    lexicographically smallest maximizer, so the output is deterministic.
    """
    w = table.omega
    n = table.size
    if tol is None:
        tol = RITZ_RTOL * float(np.max(np.abs(w)))
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    worst = -1.0
    triple = (0, 0, 0)
    # One m-slice at a time keeps memory at N^2 instead of N^3.
    for m in range(n):
        dev = np.abs(w[m][:, None] + w - w[m][None, :])
        k = int(np.argmax(dev))
        val = float(dev.flat[k])
        if val > worst:
            worst = val
            triple = (m, *np.unravel_index(k, dev.shape))
    return RitzReport(worst <= tol, worst, (int(triple[0]), int(triple[1]), int(triple[2])), float(tol))


def _connected(n, edges):
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    while stack:
        for nb in adj[stack.pop()]:
            if not seen[nb]:
                seen[nb] = True
                stack.append(nb)
    return all(seen)


def fit_term_values(table, mask=None):
    """Least-squares term values for the observed entries.

    Minimizes sum over (m, n) in ``mask`` of (omega[m,n] - (C_m - C_n))^2
    with the gauge C_0 = 0 imposed exactly. ``mask`` defaults to every
    off-diagonal pair; diagonal pairs carry no information and are ignored.
    The reported residual is the rms misfit over the used pairs.
    """
    w = table.omega
    n = table.size
    if mask is None:
        mask = [(m, k) for m in range(n) for k in range(n) if m != k]
    pairs = sorted({(int(m), int(k)) for m, k in mask if int(m) != int(k)})
    for m, k in pairs:
        if not (0 <= m < n and 0 <= k < n):
            raise ValueError(f"pair {(m, k)} outside table of size {n}")
    if not pairs:
        raise DisconnectedGraphError("no observed off-diagonal lines")
    if not _connected(n, pairs):
        raise DisconnectedGraphError(
            "observed lines do not connect all levels; term values are "
            "determined only per connected component"
        )
    if n == 1:
        return TermValues(np.zeros(1), gauge=0, residual=0.0)
    a = np.zeros((len(pairs), n - 1))
    b = np.empty(len(pairs))
    for r, (m, k) in enumerate(pairs):
        if m > 0:
            a[r, m - 1] += 1.0
        if k > 0:
            a[r, k - 1] -= 1.0
        b[r] = w[m, k]
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    terms = np.concatenate(([0.0], sol))
    misfit = b - (terms[[m for m, _ in pairs]] - terms[[k for _, k in pairs]])
    rms = float(np.sqrt(np.mean(misfit**2)))
    return TermValues(terms, gauge=0, residual=rms)


# -- hydrogen-like model -----------------------------------------------

RYDBERG_CONSTANT = 1.0973731568e7  # 1/m
SPEED_OF_LIGHT = 2.99792458e8  # m/s


@dataclass(frozen=True)
class RydbergModel:
    """Hydrogen-like spectrum: term values C_m = 2 pi R c / m^2, m >= 1."""

    rydberg: float = RYDBERG_CONSTANT
    light_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not (self.rydberg > 0 and self.light_speed > 0):
            raise ValueError("rydberg and light_speed must be positive")

    def term_value(self, m):
        m = _check_level(m)
        return 2.0 * math.pi * self.rydberg * self.light_speed / (m * m)

    def orbital_frequency(self, m):
        """Classical orbit frequency of level m: |dC/dm| = 4 pi R c / m^3.

        This is the fundamental whose overtones the large-level transition
        frequencies approach.
        """
        m = _check_level(m)
        return 4.0 * math.pi * self.rydberg * self.light_speed / (m * m * m)


def _check_level(m):
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise InvalidLevelError(f"level must be a positive integer, got {m!r}")
    return int(m)


def balmer_frequency(model, m, n):
    """Transition angular frequency 2 pi R c (1/m^2 - 1/n^2)."""
    return model.term_value(m) - model.term_value(n)


def balmer_table(model, n_levels):
    """Frequency table over principal levels 1..n_levels.

    Matrix index i corresponds to level i + 1 (the JSON emitted by the CLI
    records this mapping).
    """
    if n_levels < 1:
        raise InvalidLevelError(f"need at least one level, got {n_levels}")
    terms = [model.term_value(i + 1) for i in range(n_levels)]
    return FrequencyTable.from_term_values(terms)


def overtone_ratio(model, m, k):
    """Transition frequency of the jump m -> m-k over k times the classical
    orbit frequency at level m.

    The jump frequency is oriented so that downward drops (k > 0) are
    positive: C_{m-k} - C_m with C_m = 2 pi R c / m^2. Dividing by
    k * (4 pi R c / m^3) gives exactly (1 - k/2m) / (1 - k/m)^2, which tends
    to 1 for |k| << m from either side.
    """
    m = _check_level(m)
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise JumpRangeError(f"jump must be an integer, got {k!r}")
    k = int(k)
    if k == 0 or abs(k) >= m:
        raise JumpRangeError(f"jump k must satisfy 1 <= |k| < m, got k={k}, m={m}")
    line = model.term_value(m - k) - model.term_value(m)
    return line / (k * model.orbital_frequency(m))


# -- line-list CSV ------------------------------------------------------


def read_line_list(path):
    """Read a `m,n,omega` CSV of observed transitions (0-based table
    indices). Returns (FrequencyTable, mask); unobserved entries are zero
    and excluded from the mask."""
    entries = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["m", "n", "omega"]:
            raise ValueError(f"{path}: expected header 'm,n,omega', got {header!r}")
        for row in reader:
            if not row:
                continue
            m, n, w = int(row[0]), int(row[1]), float(row[2])
            if m < 0 or n < 0:
                raise ValueError(f"{path}: negative index in row {row!r}")
            entries.append((m, n, w))
    if not entries:
        raise ValueError(f"{path}: no observed lines")
    size = 1 + max(max(m, n) for m, n, _ in entries)
    w = np.zeros((size, size))
    mask = set()
    for m, n, val in entries:
        w[m, n] = val
        mask.add((m, n))
    return FrequencyTable(w), mask
