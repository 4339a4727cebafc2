"""Fractional-order Bessel J evaluation, positive zeros, reference spectra.

On a ball or sector the radial eigenfunctions are r^{1-d/2} J_b(sqrt(lam) r)
with mode-dependent order b, so the exact Dirichlet eigenvalues are squared
Bessel zeros.  Zeros are located by asymptotic first guesses, verified sign
brackets, and a safeguarded Newton iteration using J_b' = (J_{b-1} - J_{b+1})/2.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import jv

from .ball import harmonic_dim
from .eiglin import Spectrum

__all__ = [
    "NU_MAX",
    "X_MAX",
    "K_MAX",
    "BesselZeroTable",
    "bessel_j",
    "bessel_j_derivative",
    "bessel_zero",
    "reference_spectrum",
    "count_reference_below",
]

NU_MAX = 200.0
X_MAX = 1e6
K_MAX = 10000

# consecutive zeros of J_nu are separated by at least ~2.9 for nu >= 0,
# so a unit scan step can never hop over two of them
_SCAN_STEP = 1.0


def _validate(nu, x):
    if not 0.0 <= nu <= NU_MAX:
        raise ValueError(f"order must lie in [0, {NU_MAX}], got {nu}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > X_MAX):
        raise ValueError(f"argument must lie in [0, {X_MAX}]")
    return x


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x), nu >= 0, x >= 0."""
    xv = _validate(nu, x)
    out = jv(nu, xv)
    if np.ndim(x) == 0:
        return float(out)
    return out


def bessel_j_derivative(nu, x):
    """J_nu'(x) = (J_{nu-1}(x) - J_{nu+1}(x)) / 2."""
    xv = _validate(nu, x)
    out = 0.5 * (jv(nu - 1.0, xv) - jv(nu + 1.0, xv))
    if np.ndim(x) == 0:
        return float(out)
    return out


def _mcmahon(nu, k):
    """Large-index asymptotic estimate of the k-th positive zero."""
    b = (k + 0.5 * nu - 0.25) * math.pi
    mu = 4.0 * nu * nu
    e = 8.0 * b
    return (
        b
        - (mu - 1) / e
        - 4 * (mu - 1) * (7 * mu - 31) / (3 * e ** 3)
        - 32 * (mu - 1) * (83 * mu * mu - 982 * mu + 3779) / (15 * e ** 5)
    )


def _first_zero_estimate(nu):
    if nu < 2.0:
        return _mcmahon(nu, 1)
    t = nu ** (1.0 / 3.0)
    return nu + 1.8557571 * t + 1.033150 / t - 0.00397 / nu


def _refine(nu, lo, hi):
    """Safeguarded Newton inside a verified sign-change bracket."""
    flo = bessel_j(nu, lo)
    fhi = bessel_j(nu, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise RuntimeError(f"lost bracket for J_{nu} zero in [{lo}, {hi}]")
    x = 0.5 * (lo + hi)
    for _ in range(100):
        f = bessel_j(nu, x)
        if f == 0.0:
            return x
        if f * flo > 0:
            lo, flo = x, f
        else:
            hi = x
        fp = bessel_j_derivative(nu, x)
        step = f / fp if fp != 0.0 else hi - lo
        xn = x - step
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1e-15 * abs(x):
            return xn
        x = xn
    return x


def _check_residual(nu, z):
    slope = abs(bessel_j_derivative(nu, z))
    if abs(bessel_j(nu, z)) > 1e-12 * max(1.0, slope * z):
        raise RuntimeError(f"zero of J_{nu} near {z} failed the residual check")


def _scan_bracket(nu, start, ref_sign):
    """March right from `start` until the sign of J_nu flips."""
    lo = start
    steps = int((X_MAX - start) / _SCAN_STEP) + 1
    for _ in range(steps):
        hi = lo + _SCAN_STEP
        if bessel_j(nu, hi) * ref_sign < 0:
            return lo, hi
        lo = hi
    raise RuntimeError(f"bracketing failed for the next zero of J_{nu} after {start}")


class BesselZeroTable:
    """Lazily grown table of the positive zeros of one order."""

    def __init__(self, nu):
        if not 0.0 <= nu <= NU_MAX:
            raise ValueError(f"order must lie in [0, {NU_MAX}], got {nu}")
        self.nu = float(nu)
        self._zeros = []

    @property
    def zeros(self):
        return tuple(self._zeros)

    def zero(self, k):
        if not 1 <= k <= K_MAX:
            raise ValueError(f"zero index must lie in 1..{K_MAX}, got {k}")
        while len(self._zeros) < k:
            self._append_next()
        return self._zeros[k - 1]

    def _append_next(self):
        nu = self.nu
        k = len(self._zeros) + 1
        if k == 1:
            # J_nu > 0 on (0, j_1), so any point at or left of nu brackets from below
            lo = max(nu, 1e-8)
            est = _first_zero_estimate(nu)
            probe = max(lo, est - 1.0)
            if bessel_j(nu, probe) > 0:
                lo = probe
            lo, hi = _scan_bracket(nu, lo, ref_sign=1.0)
        else:
            prev = self._zeros[-1]
            start = prev + 0.3
            sign = math.copysign(1.0, bessel_j(nu, start))
            est = _mcmahon(nu, k)
            lo = hi = None
            if est - 1.0 > start:
                a, b = est - 1.0, est + 1.0
                fa, fb = bessel_j(nu, a), bessel_j(nu, b)
                if fa * sign > 0 and fb * sign < 0:
                    lo, hi = a, b
            if lo is None:
                lo, hi = _scan_bracket(nu, start, ref_sign=sign)
        z = _refine(nu, lo, hi)
        _check_residual(nu, z)
        if self._zeros and z - self._zeros[-1] < 2.0:
            raise RuntimeError(f"zeros of J_{nu} violated the minimum spacing")
        self._zeros.append(z)


_TABLES = {}


def bessel_zero(nu, k):
    """k-th positive zero of J_nu (cached per order)."""
    key = float(nu)
    table = _TABLES.get(key)
    if table is None:
        table = _TABLES[key] = BesselZeroTable(key)
    return table.zero(k)


def _mode_iter(geometry, c):
    """Yield (n, beta_n, multiplicity) in increasing beta order."""
    kind = geometry[0]
    if kind == "ball":
        d = geometry[1]
        if d < 2 or int(d) != d:
            raise ValueError("ball dimension must be an integer >= 2")
        n = 0
        while True:
            yield n, math.sqrt(c * c + (n + d / 2 - 1) ** 2), harmonic_dim(n, int(d))
            n += 1
    elif kind == "sector":
        gamma = geometry[1]
        if gamma < 0.5:
            raise ValueError("sector gamma must be >= 1/2")
        n = 1
        while True:
            yield n, math.sqrt(c * c + gamma * gamma * n * n), 1
            n += 1
    else:
        raise ValueError(f"unknown geometry {geometry!r}")


def reference_spectrum(geometry, c, count):
    """The `count` smallest exact eigenvalues j_{beta_n,k}^2, ties repeated.

    geometry is ("ball", d) or ("sector", gamma).  Modes are scanned until
    the first zero of the next unscanned mode already exceeds the running
    count-th smallest value; since first zeros increase with the order, the
    returned prefix is complete.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if c < 0:
        raise ValueError("potential strength must be >= 0")
    entries = []

    def cutoff():
        if len(entries) < count:
            return math.inf
        return sorted(e[0] for e in entries)[count - 1]

    for n, b, mult in _mode_iter(geometry, c):
        lam = bessel_zero(b, 1) ** 2
        if lam > cutoff():
            break
        k = 1
        while lam <= cutoff():
            entries.extend([(lam, n, k)] * mult)
            k += 1
            lam = bessel_zero(b, k) ** 2
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    entries = entries[:count]
    return Spectrum(
        np.array([e[0] for e in entries]),
        tags=tuple((e[1], e[2]) for e in entries),
    )


def count_reference_below(geometry, c, lam_max):
    """Number of exact eigenvalues (with multiplicity) not exceeding lam_max."""
    total = 0
    root_max = math.sqrt(lam_max)
    for _, b, mult in _mode_iter(geometry, c):
        if bessel_zero(b, 1) > root_max:
            break
        k = 1
        while bessel_zero(b, k) <= root_max:
            total += mult
            k += 1
    return total
