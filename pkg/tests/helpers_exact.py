"""Exact-arithmetic assembly and high-precision eigenvalues for the classic
radial basis.

The classic basis J_k^{-1,d-3}(2r-1) has stiffness/mass integrals that reduce
to single-family Jacobi brackets <q(z) J_m, J_l> with small rational
multiplier polynomials q, so every matrix entry is an exact Fraction.  The
pencil eigenvalues are then located by banded LDL inertia bisection in
multiprecision arithmetic (gmpy2), far below the double-precision rounding
floor.  This provides an independent route for measuring the baseline
convergence rates where they are invisible in double precision.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
import mpmath as mp


def _recurrence(a, b, m):
    """Rational coefficients of z J_m = A J_{m+1} + B J_m + C J_{m-1}."""
    a = Fraction(a)
    b = Fraction(b)
    if m == 0:
        return (
            Fraction(2, 1) / (a + b + 2),
            Fraction(b - a, 1) / (a + b + 2),
            Fraction(0),
        )
    n = m + 1
    s = a + b
    c1 = 2 * n * (n + s) * (2 * n + s - 2)
    c2 = (2 * n + s - 1) * (a * a - b * b)
    c3 = (2 * n + s - 2) * (2 * n + s - 1) * (2 * n + s)
    c4 = 2 * (n + a - 1) * (n + b - 1) * (2 * n + s)
    return c1 / c3, -c2 / c3, c4 / c3


def _mul_z(coeffs, a, b):
    """Multiply a {degree: Fraction} expansion in family (a, b) by z."""
    out = {}
    for m, c in coeffs.items():
        A, B, C = _recurrence(a, b, m)
        out[m + 1] = out.get(m + 1, Fraction(0)) + c * A
        out[m] = out.get(m, Fraction(0)) + c * B
        if m >= 1:
            out[m - 1] = out.get(m - 1, Fraction(0)) + c * C
    return out


def _apply_poly(qcoeffs, m, a, b):
    """Expansion of q(z) J_m in family (a, b); q in ascending monomials."""
    result = {}
    power = {m: Fraction(1)}
    for c in qcoeffs:
        if c != 0:
            for deg, v in power.items():
                result[deg] = result.get(deg, Fraction(0)) + Fraction(c) * v
        power = _mul_z(power, a, b)
    return result


def _gamma_frac(a, b, m):
    """Rational squared norm of J_m^{a,b} for integer a, b >= 0."""
    return Fraction(2 ** (a + b + 1), 2 * m + a + b + 1) * Fraction(
        math.factorial(m + a) * math.factorial(m + b),
        math.factorial(m) * math.factorial(m + a + b),
    )


def _bracket(q, m, l, a, b):
    """<q(z) J_m, J_l> under the (a, b) weight, exact."""
    c = _apply_poly(q, m, a, b).get(l)
    return Fraction(0) if c is None else c * _gamma_frac(a, b, l)


def classic_matrices_exact(n, c_sq, d, K):
    """Exact band entries of the classic pencil; c_sq = c^2 as a Fraction.

    Returns (S, M, kmin): dicts {(k, j): Fraction}, upper triangle.
    """
    c_sq = Fraction(c_sq)
    coef = c_sq + n * (n + d - 2)
    kmin = 2 if d == 2 else 1
    one = Fraction(1)
    q_mass = [one, one, -one, -one]  # (1-z)(1+z)^2 = (1-z^2)(1+z)
    S = {}
    M = {}
    for k in range(kmin, K + 1):
        for j in range(k, min(k + 3, K) + 1):
            if d == 2:
                M[(k, j)] = Fraction(1, 64) * _bracket(q_mass, k - 2, j - 2, 1, 1)
            else:
                M[(k, j)] = Fraction(1, 32) * _bracket(q_mass, k - 1, j - 1, 1, 0)
        for j in range(k, min(k + 1, K) + 1):
            if d == 2:
                val = Fraction((k - 1) * (j - 1), 4) * _bracket([one, one], k - 1, j - 1, 0, 0)
                val += coef * Fraction(1, 16) * _bracket([one, -one], k - 2, j - 2, 1, 1)
            else:
                val = Fraction(k * j, 8) * _bracket([one, one], k - 1, j - 1, 0, 1)
                val += coef * Fraction(1, 8) * _bracket([one, -one], k - 1, j - 1, 1, 0)
            S[(k, j)] = val
    return S, M, kmin


def _band_mpfr(entries, kmin, K, bw):
    size = K - kmin + 1
    rows = [[gmpy2.mpfr(0)] * (bw + 1) for _ in range(size)]
    for (k, j), v in entries.items():
        rows[k - kmin][j - k] = gmpy2.mpfr(gmpy2.mpq(v.numerator, v.denominator))
    return rows, size


def _inertia(S, M, size, bw, lam):
    """Number of pencil eigenvalues below lam, via banded LDL inertia."""
    zero = gmpy2.mpfr(0)
    d = [zero] * size
    L = [[zero] * (bw + 1) for _ in range(size)]
    tiny = gmpy2.mpfr(2) ** (-2 * gmpy2.get_context().precision)
    neg = 0
    for i in range(size):
        acc = S[i][0] - lam * M[i][0]
        for t in range(1, bw + 1):
            if i - t >= 0:
                acc -= L[i - t][t] ** 2 * d[i - t]
        if acc == 0:
            acc = tiny
        d[i] = acc
        if acc < 0:
            neg += 1
        for t in range(1, bw + 1):
            if i + t < size:
                val = S[i][t] - lam * M[i][t]
                for s in range(1, bw + 1):
                    u = t + s
                    if i - s >= 0 and u <= bw:
                        val -= L[i - s][s] * L[i - s][u] * d[i - s]
                L[i][t] = val / acc
    return neg


def classic_eigenvalue_hp(n, c_sq, d, K, index, guess, prec_bits=150):
    """index-th smallest eigenvalue of the exact classic pencil.

    Bisection on the LDL inertia, started from a double-precision guess and
    carried to ~L relative precision 2^-(prec_bits - 20).
    """
    ctx = gmpy2.get_context()
    old_prec = ctx.precision
    ctx.precision = prec_bits
    try:
        S_ex, M_ex, kmin = classic_matrices_exact(n, c_sq, d, K)
        bw = 3
        S, size = _band_mpfr(S_ex, kmin, K, bw)
        M, _ = _band_mpfr(M_ex, kmin, K, bw)
        lo = gmpy2.mpfr(guess) * gmpy2.mpfr("0.999")
        hi = gmpy2.mpfr(guess) * gmpy2.mpfr("1.001")
        while _inertia(S, M, size, bw, lo) >= index:
            lo *= gmpy2.mpfr("0.5")
        while _inertia(S, M, size, bw, hi) < index:
            hi *= gmpy2.mpfr(2)
        tol = gmpy2.mpfr(2) ** (-(prec_bits - 20))
        for _ in range(prec_bits + 40):
            mid = (lo + hi) / 2
            if _inertia(S, M, size, bw, mid) >= index:
                hi = mid
            else:
                lo = mid
            if hi - lo <= tol * hi:
                break
        return (lo + hi) / 2
    finally:
        ctx.precision = old_prec


def bessel_lambda_hp(nu_sq, k, prec_bits=150):
    """High-precision squared Bessel zero j_{nu,k}^2 with nu = sqrt(nu_sq).

    The order and the square are both formed in working precision, so the
    reference eigenvalue carries no double-precision rounding at all.
    """
    nu_sq = Fraction(nu_sq)
    dps = int(prec_bits * 0.302) + 5
    with mp.workdps(dps):
        nu = mp.sqrt(mp.mpf(nu_sq.numerator) / nu_sq.denominator)
        lam = mp.besseljzero(nu, k) ** 2
        text = mp.nstr(lam, dps, strip_zeros=False)
    ctx = gmpy2.get_context()
    old_prec = ctx.precision
    ctx.precision = prec_bits
    try:
        return gmpy2.mpfr(text)
    finally:
        ctx.precision = old_prec


def hp_error(lam, ref, prec_bits=150):
    """|lam - ref| evaluated at full precision, returned as float."""
    ctx = gmpy2.get_context()
    old_prec = ctx.precision
    ctx.precision = prec_bits
    try:
        return float(abs(gmpy2.mpfr(lam) - gmpy2.mpfr(ref)))
    finally:
        ctx.precision = old_prec
