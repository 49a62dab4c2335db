"""One-dimensional oscillatory Hamiltonian systems.

Fixed-step kick-drift-kick integration (exactly area-preserving), closed
orbit extraction with period detection and uniform resampling, the loop
action integral, per-orbit Fourier coefficients of phase-space observables,
Poisson brackets and canonical-map Jacobian checks by central differences.

Sign convention used throughout: {a, b} = (da/dp)(db/dq) - (da/dq)(db/dp),
so {p, q} = +1. This is the opposite of the convention in most modern
texts; the quantization layer depends on it, so it is applied consistently
and deliberately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

from . import _kernels
from .errors import (
    InvalidStepError,
    NonOscillatoryError,
    PotentialSpecError,
    UnknownObservableError,
)
from .fourier_algebra import FourierSeries

DEFAULT_DT_HINT = 1e-2
DEFAULT_SAMPLES = 4096
DEFAULT_OVERSAMPLE = 16
_MAX_ROUGH_STEPS = 1 << 24
_ROUGH_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class HamiltonianSystem:
    """A particle of mass ``mass`` in a potential from a named family.

    H(q, p) = p^2 / (2 mass) + V(q), with V' available analytically per
    family so forces are exact. Families:

    - harmonic   params (omega0,):  V = mass omega0^2 q^2 / 2
    - quartic    params (lam,):     V = lam q^4 / 4
    - pendulum   params (g, L):     V = (g/L)(1 - cos q), librations only
    - poly       params (c0, c1, ...): V = sum_k c_k q^k
    """

    family: str
    params: tuple
    mass: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILY_CODES:
            raise ValueError(f"unknown potential family {self.family!r}")
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        params = tuple(float(x) for x in self.params)
        if not all(math.isfinite(x) for x in params):
            raise ValueError("potential parameters must be finite")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "mass", float(self.mass))

    # -- constructors ----------------------------------------------------

    @classmethod
    def harmonic(cls, mass=1.0, omega0=1.0):
        if omega0 < 0:
            raise ValueError("omega0 must be nonnegative")
        return cls("harmonic", (omega0,), mass)

    @classmethod
    def quartic(cls, lam, mass=1.0):
        if lam <= 0:
            raise ValueError("quartic strength must be positive")
        return cls("quartic", (lam,), mass)

    @classmethod
    def pendulum(cls, g=1.0, length=1.0, mass=1.0):
        if g <= 0 or length <= 0:
            raise ValueError("g and L must be positive")
        return cls("pendulum", (g, length), mass)

    @classmethod
    def polynomial(cls, coeffs, mass=1.0):
        return cls("poly", tuple(coeffs), mass)

    # -- potential and derived quantities ---------------------------------

    def potential(self, q):
        q = np.asarray(q, dtype=float)
        if self.family == "harmonic":
            (w0,) = self.params
            return 0.5 * self.mass * w0 * w0 * q * q
        if self.family == "quartic":
            (lam,) = self.params
            return 0.25 * lam * q**4
        if self.family == "pendulum":
            g, length = self.params
            return (g / length) * (1.0 - np.cos(q))
        return npoly.polyval(q, self.params) if self.params else np.zeros_like(q)

    def potential_derivative(self, q):
        q = np.asarray(q, dtype=float)
        if self.family == "harmonic":
            (w0,) = self.params
            return self.mass * w0 * w0 * q
        if self.family == "quartic":
            (lam,) = self.params
            return lam * q**3
        if self.family == "pendulum":
            g, length = self.params
            return (g / length) * np.sin(q)
        dcoef = [k * c for k, c in enumerate(self.params)][1:]
        return npoly.polyval(q, dcoef) if dcoef else np.zeros_like(q)

    def force(self, q):
        return -self.potential_derivative(q)

    def hamiltonian(self, q, p):
        p = np.asarray(p, dtype=float)
        return p * p / (2.0 * self.mass) + self.potential(q)

    def minimum(self):
        """(q, V) at the bottom of the well."""
        if self.family in ("harmonic", "quartic", "pendulum"):
            return 0.0, 0.0
        from scipy.optimize import minimize_scalar

        res = minimize_scalar(lambda q: float(self.potential(q)))
        if not res.success:
            raise ValueError("could not locate the potential minimum")
        return float(res.x), float(res.fun)

    def min_frequency(self):
        """Small-oscillation angular frequency at the minimum (0 if the
        well bottom is flat)."""
        qmin, _ = self.minimum()
        h = 1e-4 * (1.0 + abs(qmin))
        vpp = float(
            self.potential(qmin + h) - 2.0 * self.potential(qmin) + self.potential(qmin - h)
        ) / (h * h)
        return math.sqrt(max(vpp, 0.0) / self.mass)

    def separatrix_energy(self):
        """Upper energy bound for closed orbits, or None if unbounded."""
        if self.family == "pendulum":
            g, length = self.params
            return 2.0 * g / length
        return None

    def kernel_args(self):
        return _FAMILY_CODES[self.family], np.asarray(self.params, dtype=float)

    def spec_string(self):
        """Normalized ``family:key=value,...`` form (round-trips through
        parse_potential)."""
        if self.family == "harmonic":
            items = [("M", self.mass), ("omega0", self.params[0])]
        elif self.family == "quartic":
            items = [("M", self.mass), ("lambda", self.params[0])]
        elif self.family == "pendulum":
            items = [("M", self.mass), ("g", self.params[0]), ("L", self.params[1])]
        else:
            items = [("M", self.mass)] + [(f"c{k}", c) for k, c in enumerate(self.params)]
        body = ",".join(f"{k}={format(v, '.17g')}" for k, v in items)
        return f"{self.family}:{body}"


_FAMILY_CODES = {
    "harmonic": _kernels.HARMONIC,
    "quartic": _kernels.QUARTIC,
    "pendulum": _kernels.PENDULUM,
    "poly": _kernels.POLYNOMIAL,
}


def parse_potential(text):
    """Parse ``family:key=value[,key=value]*``, e.g. ``quartic:lambda=0.25``.

    Keys per family (M = mass, optional everywhere, default 1):
    harmonic: omega0; quartic: lambda; pendulum: g, L; poly: c0, c1, ...
    """
    head, sep, body = text.partition(":")
    family = head.strip()
    kv = {}
    if sep and body.strip():
        for item in body.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise PotentialSpecError(f"expected key=value, got {item!r} in {text!r}")
            key = key.strip()
            if key in kv:
                raise PotentialSpecError(f"duplicate key {key!r} in {text!r}")
            try:
                kv[key] = float(val)
            except ValueError:
                raise PotentialSpecError(f"bad numeric value {val!r} for {key!r}") from None
    try:
        mass = kv.pop("M", 1.0)
        if family == "harmonic":
            sys_ = HamiltonianSystem.harmonic(mass=mass, omega0=kv.pop("omega0", 1.0))
        elif family == "quartic":
            if "lambda" not in kv:
                raise PotentialSpecError("quartic requires lambda=<value>")
            sys_ = HamiltonianSystem.quartic(kv.pop("lambda"), mass=mass)
        elif family == "pendulum":
            sys_ = HamiltonianSystem.pendulum(
                g=kv.pop("g", 1.0), length=kv.pop("L", 1.0), mass=mass
            )
        elif family == "poly":
            ckeys = sorted(kv)
            degrees = []
            for key in ckeys:
                if not key.startswith("c") or not key[1:].isdigit():
                    raise PotentialSpecError(f"unknown poly key {key!r}")
                degrees.append(int(key[1:]))
            coeffs = [0.0] * (max(degrees) + 1 if degrees else 0)
            for key, deg in zip(ckeys, degrees):
                coeffs[deg] = kv[key]
            kv.clear()
            sys_ = HamiltonianSystem.polynomial(coeffs, mass=mass)
        else:
            raise PotentialSpecError(f"unknown potential family {family!r}")
    except ValueError as err:
        raise PotentialSpecError(str(err)) from None
    if kv:
        raise PotentialSpecError(f"unknown keys {sorted(kv)} for family {family!r}")
    return sys_


# ---------------------------------------------------------------------------
# phase points and single steps


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise ValueError(f"phase point must be finite, got ({self.q}, {self.p})")

    def norm(self):
        return math.hypot(self.q, self.p)


def hamiltonian_flow_step(system, x, dt):
    """One kick-drift-kick step of Hamilton's equations.

    The step map is a composition of two momentum shears and one position
    shear, each with unit Jacobian, so phase-space area is preserved exactly
    (not just to the O(dt^2) accuracy of the trajectory).
    """
    if not dt > 0:
        raise InvalidStepError(f"dt must be positive, got {dt!r}")
    half = 0.5 * dt
    p = x.p + half * float(system.force(x.q))
    q = x.q + dt * p / system.mass
    p = p + half * float(system.force(q))
    return PhasePoint(q, p)


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True, eq=False)
class Orbit:
    """One closed trajectory sampled uniformly in time over exactly one
    period, launched from the right turning point (so the angle variable is
    zero at t = 0 for every orbit)."""

    system: HamiltonianSystem
    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    period: float
    energy: float
    action: float

    def __post_init__(self):
        for name in ("t", "q", "p"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def omega(self):
        return 2.0 * math.pi / self.period

    @property
    def restricted_action(self):
        """J = 2 pi I, the loop integral of p dq itself."""
        return 2.0 * math.pi * self.action

    @property
    def n_samples(self):
        return len(self.t) - 1

    def energy_drift(self):
        """Max |H(q_i, p_i) - E| relative to the energy scale of the orbit."""
        h = self.system.hamiltonian(self.q, self.p)
        scale = max(abs(self.energy), 1e-300)
        return float(np.max(np.abs(h - self.energy)) / scale)

    def closure_error(self):
        """Phase-space distance between the first and last sample."""
        return math.hypot(self.q[-1] - self.q[0], self.p[-1] - self.p[0])

    def sidecar(self):
        return {
            "T": self.period,
            "E": self.energy,
            "I": self.action,
            "omega": self.omega,
            "samples": len(self.t),
        }

    @classmethod
    def degenerate(cls, system, n_samples=DEFAULT_SAMPLES):
        """The zero-area 'orbit' sitting at the potential minimum."""
        qmin, vmin = system.minimum()
        n = n_samples + 1
        return cls(
            system=system,
            t=np.zeros(n),
            q=np.full(n, qmin),
            p=np.zeros(n),
            period=math.inf,
            energy=vmin,
            action=0.0,
        )


def action(orbit):
    """(1/2pi) times the loop integral of p dq over the sampled orbit.

    Evaluated through the time parametrization, p dq = (p^2/M) dt, so the
    trapezoid rule on the uniform closed grid is spectrally accurate. Equals
    the enclosed phase-space area / 2 pi.
    """
    if len(orbit.t) < 2:
        return 0.0
    dt = orbit.t[1] - orbit.t[0]
    return float(np.trapezoid(orbit.p * orbit.p, dx=dt) / (2.0 * math.pi * orbit.system.mass))


def _first_downward_crossing(p):
    """Index i with p[i] > 0 >= p[i+1], or None. The launch value p[0] = 0
    never counts, so the first hit is one full period after launch."""
    hits = np.nonzero((p[:-1] > 0.0) & (p[1:] <= 0.0))[0]
    return int(hits[0]) if hits.size else None


def _refine_crossing(dt, p, i):
    """Crossing time by a cubic through samples i-1..i+2 (linear at edges)."""
    denom = p[i] - p[i + 1]
    s_lin = p[i] / denom if denom != 0 else 0.5
    if 1 <= i <= len(p) - 3:
        coeffs = npoly.polyfit(np.array([-1.0, 0.0, 1.0, 2.0]), p[i - 1 : i + 3], 3)
        roots = npoly.polyroots(coeffs)
        real = roots[np.abs(roots.imag) < 1e-9].real
        inside = real[(real >= -1e-9) & (real <= 1.0 + 1e-9)]
        if inside.size:
            s_lin = float(inside[np.argmin(np.abs(inside - s_lin))])
    return (i + s_lin) * dt


def _right_turning_point(system, energy, qmin):
    """Solve V(q) = E on the right branch; fails => no closed orbit."""
    if system.family == "pendulum":
        hi_limit = qmin + math.pi
    else:
        hi_limit = None
    step = max(1.0, abs(qmin))
    hi = qmin + step
    for _ in range(200):
        if hi_limit is not None and hi > hi_limit:
            hi = hi_limit
        if float(system.potential(hi)) >= energy:
            break
        if hi_limit is not None and hi == hi_limit:
            raise NonOscillatoryError(
                f"no right turning point: V never reaches E={energy!r} (above the separatrix)"
            )
        hi = qmin + (hi - qmin) * 2.0
    else:
        raise NonOscillatoryError(f"no right turning point below q={hi!r} for E={energy!r}")
    return brentq(
        lambda q: float(system.potential(q)) - energy, qmin, hi, xtol=1e-15 * (1.0 + abs(hi)), rtol=1e-15
    )


def _rough_period(system, energy, q_start, dt_hint, vmin):
    fam, params = system.kernel_args()
    scale = max(abs(energy), energy - vmin)
    dt = dt_hint
    for _attempt in range(26):
        q_cur, p_cur = q_start, 0.0
        steps_done = 0
        retry_dt = None
        while steps_done < _MAX_ROUGH_STEPS:
            q, p = _kernels.leapfrog(fam, params, system.mass, q_cur, p_cur, dt, _ROUGH_CHUNK, 1)
            drift_ok = math.isfinite(q[-1]) and math.isfinite(p[-1])
            if drift_ok:
                drift_ok = abs(float(system.hamiltonian(q[-1], p[-1])) - energy) <= 1e-2 * scale
            if not drift_ok:
                retry_dt = dt * 0.5  # unstable step: tighten and restart
                break
            idx = _first_downward_crossing(p)
            if idx is not None:
                t0 = steps_done * dt + _refine_crossing(dt, p, idx)
                if t0 < 64.0 * dt:
                    retry_dt = t0 / 256.0  # under-resolved period: rescan finer
                    break
                return t0
            q_cur, p_cur = q[-1], p[-1]
            steps_done += _ROUGH_CHUNK
        if retry_dt is None:
            raise NonOscillatoryError(
                f"no closed-orbit period found within {_MAX_ROUGH_STEPS} steps at E={energy!r}"
            )
        dt = retry_dt
    raise NonOscillatoryError(f"orbit integration unstable at E={energy!r}")


def find_orbit(
    system,
    energy,
    dt_hint=DEFAULT_DT_HINT,
    *,
    n_samples=DEFAULT_SAMPLES,
    oversample=DEFAULT_OVERSAMPLE,
    period_hint=None,
):
    """Locate the closed orbit at the given energy.

    The orbit is launched from the right turning point with p = 0. The
    period is the second same-direction zero crossing of p (the first being
    the launch itself), refined by cubic interpolation and iterated until
    the sampling grid is commensurate with the discrete trajectory's own
    period; the final pass records ``n_samples`` uniform samples over one
    period, integrating ``oversample`` substeps per sample.
    """
    if not dt_hint > 0:
        raise InvalidStepError(f"dt_hint must be positive, got {dt_hint!r}")
    qmin, vmin = system.minimum()
    if not energy > vmin:
        raise NonOscillatoryError(
            f"energy {energy!r} is not above the potential minimum {vmin!r}"
        )
    esep = system.separatrix_energy()
    if esep is not None and energy >= esep:
        raise NonOscillatoryError(
            f"energy {energy!r} at or above the separatrix energy {esep!r}"
        )
    q_start = _right_turning_point(system, energy, qmin)
    fam, params = system.kernel_args()
    mass = system.mass

    if period_hint is not None and math.isfinite(period_hint) and period_hint > 0:
        period = period_hint
    else:
        period = _rough_period(system, energy, q_start, dt_hint, vmin)

    n_int = n_samples * oversample
    last_delta = math.inf
    for _pass in range(8):
        dt = period / n_int
        steps = int(1.35 * n_int) + 2
        q, p = _kernels.leapfrog(fam, params, mass, q_start, 0.0, dt, steps, 1)
        idx = _first_downward_crossing(p)
        if idx is None:
            # the current estimate undershoots the true period; stretch it
            period *= 1.5
            last_delta = math.inf
            continue
        t_new = _refine_crossing(dt, p, idx)
        last_delta = abs(t_new - period)
        period = t_new
        if last_delta <= 1e-10 * period:
            break
    if not last_delta <= 1e-7 * period:
        raise NonOscillatoryError(f"period detection did not stabilize at E={energy!r}")

    dt = period / n_int
    q, p = _kernels.leapfrog(fam, params, mass, q_start, 0.0, dt, n_int, oversample)
    if not (math.isfinite(q[-1]) and math.isfinite(p[-1])):
        raise NonOscillatoryError(f"orbit integration diverged at E={energy!r}")
    t = np.arange(n_samples + 1) * (period / n_samples)
    act = float(np.trapezoid(p * p, dx=t[1] - t[0]) / (2.0 * math.pi * mass))
    return Orbit(
        system=system, t=t, q=q, p=p, period=period, energy=float(energy), action=act
    )


# ---------------------------------------------------------------------------
# the action map and its inverse


def energy_at_action(
    system,
    target,
    *,
    lower=None,
    upper_guess=None,
    period_hint=None,
    dt_hint=DEFAULT_DT_HINT,
    n_samples=DEFAULT_SAMPLES,
    oversample=DEFAULT_OVERSAMPLE,
):
    """Invert the action map: the energy E with I(E) = target.

    I(E) is strictly increasing for a confining well, so Brent root finding
    on I(E) - target converges once a bracket is found. Returns (E, orbit);
    the orbit is the one actually measured at the returned energy.
    """
    if not target > 0:
        raise InvalidStepError(f"target action must be positive, got {target!r}")
    qmin, vmin = system.minimum()
    cache = {}
    hint = {"T": period_hint}

    def misfit(e):
        orb = find_orbit(
            system,
            e,
            dt_hint,
            n_samples=n_samples,
            oversample=oversample,
            period_hint=hint["T"],
        )
        hint["T"] = orb.period
        cache[e] = orb
        return orb.action - target

    wmin = system.min_frequency()
    if lower is not None and lower > vmin:
        lo = lower
        f_lo = misfit(lo)
        if f_lo > 0:
            raise ValueError(f"lower bracket {lower!r} already exceeds the target action")
    else:
        # walk down from a scale guess until the action undershoots
        delta = max(wmin * target, 1e-3 * target, 1e-12)
        lo = vmin + delta
        f_lo = misfit(lo)
        for _ in range(80):
            if f_lo < 0:
                break
            delta *= 0.25
            lo = vmin + delta
            f_lo = misfit(lo)
        else:
            raise ValueError(f"could not bracket the action {target!r} from below")
    if f_lo == 0.0:
        return lo, cache[lo]

    if upper_guess is not None and upper_guess > lo:
        hi = upper_guess
    else:
        hi = vmin + 2.0 * max((lo - vmin), wmin * target, 1e-12)
    f_hi = misfit(hi)
    for _ in range(200):
        if f_hi >= 0:
            break
        hi = vmin + (hi - vmin) * 2.0
        f_hi = misfit(hi)
    else:
        raise NonOscillatoryError(f"action {target!r} not reachable below the separatrix")

    e_root = brentq(misfit, lo, hi, xtol=1e-14 * (1.0 + abs(hi)), rtol=1e-15)
    orb = cache.get(e_root)
    if orb is None:
        orb = find_orbit(
            system,
            e_root,
            dt_hint,
            n_samples=n_samples,
            oversample=oversample,
            period_hint=hint["T"],
        )
    return float(e_root), orb


def frequency_from_action(system, action_value, d_action, **orbit_kwargs):
    """dE/dI at the given action, by central difference of the inverse
    action map (agrees with 2 pi / T of the orbit there)."""
    if not d_action > 0:
        raise InvalidStepError(f"d_action must be positive, got {d_action!r}")
    if action_value - d_action <= 0:
        raise InvalidStepError("need orbits on both sides: action - d_action must be positive")
    e_plus, _ = energy_at_action(system, action_value + d_action, **orbit_kwargs)
    e_minus, _ = energy_at_action(system, action_value - d_action, **orbit_kwargs)
    return (e_plus - e_minus) / (2.0 * d_action)


# ---------------------------------------------------------------------------
# observables


@dataclass(frozen=True)
class PolynomialObservable:
    """sum of c[(i, j)] q^i p^j terms; supports + and * for building test
    observables (products stay polynomial)."""

    terms: tuple

    def __post_init__(self):
        merged = {}
        for (i, j), c in self.terms:
            c = float(c)
            if c != 0.0:
                key = (int(i), int(j))
                merged[key] = merged.get(key, 0.0) + c
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))

    @classmethod
    def from_dict(cls, mapping):
        return cls(tuple(mapping.items()))

    def __call__(self, q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        out = np.zeros(np.broadcast(q, p).shape)
        for (i, j), c in self.terms:
            out = out + c * q**i * p**j
        return out if out.ndim else float(out)

    def __add__(self, other):
        return PolynomialObservable(self.terms + other.terms)

    def __mul__(self, other):
        if isinstance(other, PolynomialObservable):
            prod = []
            for (i1, j1), c1 in self.terms:
                for (i2, j2), c2 in other.terms:
                    prod.append(((i1 + i2, j1 + j2), c1 * c2))
            return PolynomialObservable(tuple(prod))
        return PolynomialObservable(tuple((ij, other * c) for ij, c in self.terms))

    __rmul__ = __mul__

    def spec_string(self):
        return "poly:" + ";".join(f"{i},{j}={format(c, '.17g')}" for (i, j), c in self.terms)

    @classmethod
    def parse(cls, body):
        """Parse ``i,j=c[;i,j=c]*`` (powers of q and p)."""
        terms = []
        for item in body.split(";"):
            powers, eq, val = item.partition("=")
            i, comma, j = powers.partition(",")
            if not (eq and comma):
                raise UnknownObservableError(f"bad polynomial term {item!r}")
            try:
                terms.append(((int(i), int(j)), float(val)))
            except ValueError:
                raise UnknownObservableError(f"bad polynomial term {item!r}") from None
        return cls(tuple(terms))


_NAMED_OBSERVABLES = {
    "q": PolynomialObservable.from_dict({(1, 0): 1.0}),
    "p": PolynomialObservable.from_dict({(0, 1): 1.0}),
    "q2": PolynomialObservable.from_dict({(2, 0): 1.0}),
    "p2": PolynomialObservable.from_dict({(0, 2): 1.0}),
}

OBSERVABLE_NAMES = ("q", "p", "q2", "p2", "H")


def resolve_observable(spec, system=None):
    """Turn an observable spec into a vectorized callable f(q, p).

    Accepts the registered names ("q", "p", "q2", "p2", "H"), a
    ``poly:i,j=c;...`` string, a PolynomialObservable, or any callable.
    "H" needs the system it belongs to.
    """
    if isinstance(spec, PolynomialObservable):
        return spec
    if callable(spec):
        return spec
    if isinstance(spec, str):
        if spec in _NAMED_OBSERVABLES:
            return _NAMED_OBSERVABLES[spec]
        if spec == "H":
            if system is None:
                raise UnknownObservableError("observable 'H' needs a system")
            return system.hamiltonian
        if spec.startswith("poly:"):
            return PolynomialObservable.parse(spec[len("poly:") :])
    raise UnknownObservableError(f"unknown observable {spec!r}; known: {OBSERVABLE_NAMES}")


def observable_label(spec):
    if isinstance(spec, str):
        return spec
    if isinstance(spec, PolynomialObservable):
        return spec.spec_string()
    return getattr(spec, "__name__", "custom")


def orbit_fourier_coefficients(orbit, observable, n_range):
    """Harmonic content of an observable along the orbit.

    c_n = (1/T) integral of f(q(t), p(t)) exp(-i n omega t) dt over one
    period, by the trapezoid rule on the uniform closed grid (spectrally
    accurate). ``n_range`` is an (nmin, nmax) pair, or an int n for
    [-n, n]. Real observables give exactly conjugate-symmetric
    coefficients, so the series' real flag is robust.
    """
    if not math.isfinite(orbit.period):
        raise ValueError("degenerate orbit has no Fourier data; handle level 0 separately")
    if isinstance(n_range, (int, np.integer)):
        lo, hi = -int(n_range), int(n_range)
    else:
        lo, hi = int(n_range[0]), int(n_range[1])
    if lo > hi:
        raise ValueError(f"empty harmonic range ({lo}, {hi})")
    f = resolve_observable(observable, orbit.system)
    vals = np.asarray(f(orbit.q, orbit.p), dtype=float)
    weights = np.full(len(orbit.t), orbit.t[1] - orbit.t[0])
    weights[0] *= 0.5
    weights[-1] *= 0.5
    weights /= orbit.period
    harmonics = np.arange(lo, hi + 1)
    phases = np.exp(np.outer(-1j * harmonics * orbit.omega, orbit.t))
    coeffs = phases @ (weights * vals)
    return FourierSeries(orbit.omega, {int(n): complex(c) for n, c in zip(harmonics, coeffs)})


# ---------------------------------------------------------------------------
# brackets and canonical-map checks


def _default_h(q, p):
    return 1e-5 * (1.0 + np.hypot(q, p))


def poisson_bracket(a, b, x, h=None):
    """{a, b} = (da/dp)(db/dq) - (da/dq)(db/dp) at x, by central
    differences with step h (default 1e-5 * (1 + |x|))."""
    fa = resolve_observable(a)
    fb = resolve_observable(b)
    if h is None:
        h = _default_h(x.q, x.p)
    if not h > 0:
        raise InvalidStepError(f"h must be positive, got {h!r}")
    aq = (fa(x.q + h, x.p) - fa(x.q - h, x.p)) / (2.0 * h)
    ap = (fa(x.q, x.p + h) - fa(x.q, x.p - h)) / (2.0 * h)
    bq = (fb(x.q + h, x.p) - fb(x.q - h, x.p)) / (2.0 * h)
    bp = (fb(x.q, x.p + h) - fb(x.q, x.p - h)) / (2.0 * h)
    return float(ap * bq - aq * bp)


def bracket_observable(a, b, system=None, h_scale=1e-5):
    """The pointwise function (q, p) -> {a, b}(q, p), vectorized, for use
    as an orbit observable."""
    fa = resolve_observable(a, system)
    fb = resolve_observable(b, system)

    def bracket(q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        h = h_scale * (1.0 + np.hypot(q, p))
        aq = (fa(q + h, p) - fa(q - h, p)) / (2.0 * h)
        ap = (fa(q, p + h) - fa(q, p - h)) / (2.0 * h)
        bq = (fb(q + h, p) - fb(q - h, p)) / (2.0 * h)
        bp = (fb(q, p + h) - fb(q, p - h)) / (2.0 * h)
        return ap * bq - aq * bp

    return bracket


def identity_map():
    return lambda pt: pt


def scale_map(cq, cp=1.0):
    """(q, p) -> (cq q, cp p); canonical only when cq * cp = 1."""
    return lambda pt: PhasePoint(cq * pt.q, cp * pt.p)


def harmonic_action_angle_map(mass=1.0, omega0=1.0):
    """(theta, I) packed as PhasePoint(q=theta, p=I) -> (q, p) on the
    oscillator orbit of action I. Canonical: unit Jacobian for I > 0."""

    def to_phase(pt):
        theta, act = pt.q, pt.p
        return PhasePoint(
            math.sqrt(2.0 * act / (mass * omega0)) * math.cos(theta),
            -math.sqrt(2.0 * act * mass * omega0) * math.sin(theta),
        )

    return to_phase


NAMED_MAPS = {"identity": identity_map}


def jacobian_check(transform, x, h=None):
    """Finite-difference Jacobian determinant d(Q,P)/d(q,p) of a phase-space
    map at x; canonical maps give 1."""
    if isinstance(transform, str):
        try:
            transform = NAMED_MAPS[transform]()
        except KeyError:
            raise UnknownObservableError(f"unknown map {transform!r}") from None
    if h is None:
        h = _default_h(x.q, x.p)
    if not h > 0:
        raise InvalidStepError(f"h must be positive, got {h!r}")
    fqp = transform(PhasePoint(x.q + h, x.p))
    fqm = transform(PhasePoint(x.q - h, x.p))
    fpp = transform(PhasePoint(x.q, x.p + h))
    fpm = transform(PhasePoint(x.q, x.p - h))
    dq_q = (fqp.q - fqm.q) / (2.0 * h)
    dp_q = (fqp.p - fqm.p) / (2.0 * h)
    dq_p = (fpp.q - fpm.q) / (2.0 * h)
    dp_p = (fpp.p - fpm.p) / (2.0 * h)
    return dq_q * dp_p - dq_p * dp_q
