"""Spectral eigensolvers on the unit ball for -Lap u + (c^2/|x|^2) u.

Separation into spherical harmonics decouples the problem into one radial
generalized eigenproblem per harmonic degree n.  Two singularity-adapted
bases make the stiffness matrix diagonal:

* method I uses J_k^{-1,2b}(2r-1) r^{b+1-d/2} radial factors (penta-diagonal
  mass),
* method II uses J_k^{-1,b}(2r^2-1) r^{b+1-d/2} (tridiagonal mass),

where b is the mode's singularity exponent.  Two classical polynomial bases
("classic" in 2r-1 and "poly" in 2r^2-1, both without the r^b factor) are
kept as baselines; they converge only algebraically when b is fractional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eiglin import Spectrum, SymBandedMatrix, solve_gevp
from .orthopoly import JacobiParam, gauss_rule, jacobi_derivative_table, jacobi_table

__all__ = [
    "BallProblem",
    "RadialMode",
    "beta",
    "harmonic_dim",
    "surface_area",
    "assemble_method1",
    "assemble_method2",
    "assemble_classic",
    "assemble_poly",
    "assemble_mode",
    "solve_ball",
]

METHODS = ("I", "II", "classic", "poly")


def beta(n, c, d):
    """Radial singularity exponent sqrt(c^2 + (n + d/2 - 1)^2)."""
    if n < 0 or d < 2 or c < 0:
        raise ValueError("require n >= 0, d >= 2, c >= 0")
    return math.sqrt(c * c + (n + d / 2 - 1) ** 2)


def harmonic_dim(n, d):
    """Dimension of the degree-n spherical harmonics in d variables."""
    if n < 0 or d < 2:
        raise ValueError("require n >= 0, d >= 2")
    first = math.comb(n + d - 1, n)
    second = math.comb(n + d - 3, n - 2) if n >= 2 else 0
    return first - second


def surface_area(d):
    """Surface measure of the unit sphere in R^d."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class RadialMode:
    """One angular mode: its exponent, multiplicity, and radial pencil."""

    n: int
    beta: float
    multiplicity: int
    A: SymBandedMatrix
    B: SymBandedMatrix
    k_start: int = 1


@dataclass(frozen=True)
class BallProblem:
    d: int
    c: float
    K: int
    N: int
    method: str = "II"

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("dimension must be >= 2")
        if self.c < 0:
            raise ValueError("potential strength must be >= 0")
        if self.K < 1 or self.N < 0:
            raise ValueError("require K >= 1 and N >= 0")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")


def method1_stiffness_diag(b, K, omega, d=2, k_start=1):
    """Diagonal energy values of the normalized J^{-1,2b}(2r-1) basis."""
    k = np.arange(k_start, K + 1, dtype=float)
    return omega * np.where(k == 0, b - d / 2 + 1, 2 * k + 2 * b)


def method1_mass_bands(b, K, omega, k_start=1):
    """Penta-diagonal mass bands of the normalized J^{-1,2b}(2r-1) basis.

    The k = 0 first off-diagonal and the k = 1 diagonal at b = 0 are the
    algebraic limits of the generic entries (their raw forms are 0/0 there).
    """
    k = np.arange(k_start, K + 1, dtype=float)
    diag = np.empty_like(k)
    for i, kk in enumerate(k):
        if kk == 0:
            diag[i] = 1.0 / (2 * (b + 1))
        elif kk == 1 and b == 0:
            diag[i] = 1.0 / 3.0
        else:
            diag[i] = (
                (kk + b)
                * (kk * kk + 2 * kk * b + 4 * b * b - 1)
                / ((kk + b - 1) * (kk + b + 1) * (2 * kk + 2 * b - 1) * (2 * kk + 2 * b + 1))
            )
    ku = k[:-1] if k.size > 1 else k[:0]
    off1 = np.empty_like(ku)
    pos = ku >= 1
    off1[~pos] = -1.0 / (2 * b + 3)  # k = 0 entry after cancelling (2b-1)(2b+1)
    off1[pos] = (
        -(2 * b - 1) * (2 * b + 1)
        / ((2 * ku[pos] + 2 * b - 1) * (2 * ku[pos] + 2 * b + 1) * (2 * ku[pos] + 2 * b + 3))
    )
    kv = k[:-2] if k.size > 2 else k[:0]
    off2 = (
        -(kv + 1) * (kv + 2 * b + 1)
        / (2 * (kv + b + 1) * (2 * kv + 2 * b + 1) * (2 * kv + 2 * b + 3))
    ) if kv.size else np.empty(0)
    return omega * diag, omega * off1, omega * off2


def method2_stiffness_diag(b, K, omega, d=2, k_start=1):
    """Diagonal energy values of the normalized J^{-1,b}(2r^2-1) basis."""
    k = np.arange(k_start, K + 1, dtype=float)
    return omega * np.where(k == 0, b - d / 2 + 1, 2 * (2 * k + b))


def method2_mass_bands(b, K, omega, k_start=1):
    """Tridiagonal mass bands of the normalized J^{-1,b}(2r^2-1) basis.

    The normalized radial factor equals J_k^{0,b} - J_{k-1}^{0,b}, so the
    Gram matrix under r^{2b+1} dr follows from plain Jacobi orthogonality:
    diagonal 1/(2(2k+b+1)) + 1/(2(2k+b-1)) (second term absent at k = 0),
    first off-diagonal -1/(2(2k+b+1)).
    """
    k = np.arange(k_start, K + 1, dtype=float)
    diag = 1.0 / (2 * (2 * k + b + 1))
    pos = k >= 1  # the k = 0 diagonal has no lower term (and 2k+b-1 may vanish)
    diag[pos] += 1.0 / (2 * (2 * k[pos] + b - 1))
    ku = k[:-1] if k.size > 1 else k[:0]
    off1 = -1.0 / (2 * (2 * ku + b + 1)) if ku.size else np.empty(0)
    return omega * diag, omega * off1


def assemble_method1(n, c, d, K):
    """Radial pencil of method I for mode n: diagonal A, penta-diagonal B."""
    if K < 1:
        raise ValueError("K must be >= 1")
    b = beta(n, c, d)
    om = surface_area(d)
    A = SymBandedMatrix(method1_stiffness_diag(b, K, om, d))
    diag, off1, off2 = method1_mass_bands(b, K, om)
    B = SymBandedMatrix(diag, (off1, off2))
    return RadialMode(n, b, harmonic_dim(n, d), A, B)


def assemble_method2(n, c, d, K):
    """Radial pencil of method II for mode n: diagonal A, tridiagonal B."""
    if K < 1:
        raise ValueError("K must be >= 1")
    b = beta(n, c, d)
    om = surface_area(d)
    A = SymBandedMatrix(method2_stiffness_diag(b, K, om, d))
    diag, off1 = method2_mass_bands(b, K, om)
    B = SymBandedMatrix(diag, (off1,))
    return RadialMode(n, b, harmonic_dim(n, d), A, B)


def _baseline_tables(alpha2, kmin, K, zeta):
    """Value and zeta-derivative tables, rows kmin..K, of J^{-1,alpha2}."""
    p = JacobiParam(-1.0, alpha2)
    vals = jacobi_table(p, K, zeta)[kmin:]
    if alpha2 == -1.0:
        # row k = 1 is the supplemented polynomial; excluded by kmin = 2
        derivs = np.zeros((K + 1,) + np.shape(zeta))
        k = np.arange(2.0, K + 1).reshape((-1,) + (1,) * np.ndim(zeta))
        derivs[2:] = 0.5 * (k - 1) * jacobi_table(JacobiParam(0.0, 0.0), K - 1, zeta)[1:]
        derivs = derivs[kmin:]
    else:
        derivs = jacobi_derivative_table(p, K, zeta)[kmin:]
    return vals, derivs


def _classic_kmin(d):
    # In 2-D every admissible J^{-1,-1} member needs k >= 2 (k = 1 fails the
    # outer Dirichlet condition); in higher dimensions k >= 1 works.
    return 2 if d == 2 else 1


def assemble_classic(n, c, d, K):
    """Baseline basis J_k^{-1,d-3}(2r-1), assembled by exact Gauss quadrature.

    Stiffness is tridiagonal and the mass septa-diagonal (half bandwidth 3).
    """
    kmin = _classic_kmin(d)
    if K < kmin:
        raise ValueError(f"K must be >= {kmin} for d = {d}")
    rule = gauss_rule("legendre", K + 8)
    r, w = rule.mapped_to(0.0, 1.0)
    vals, derivs = _baseline_tables(float(d - 3), kmin, K, 2 * r - 1)
    derivs = 2.0 * derivs
    coef = c * c + n * (n + d - 2)
    S = (derivs * (w * r ** (d - 1))) @ derivs.T
    if coef != 0.0:
        # integrand is a polynomial: the basis factors absorb r^{3-d}
        S = S + coef * ((vals * (w * r ** float(d - 3))) @ vals.T)
    M = (vals * (w * r ** (d - 1))) @ vals.T
    A = SymBandedMatrix.from_dense(0.5 * (S + S.T), 1)
    B = SymBandedMatrix.from_dense(0.5 * (M + M.T), 3)
    return RadialMode(n, beta(n, c, d), harmonic_dim(n, d), A, B, k_start=kmin)


def assemble_poly(n, c, d, K):
    """Baseline ball-polynomial basis J_k^{-1,n+d/2-2}(2r^2-1) r^n.

    Assembled by exact Gauss quadrature; tridiagonal stiffness,
    penta-diagonal mass.
    """
    alpha2 = n + d / 2 - 2
    kmin = 2 if alpha2 == -1.0 else 1
    if K < kmin:
        raise ValueError(f"K must be >= {kmin} for n = {n}, d = {d}")
    rule = gauss_rule("legendre", 2 * K + n + 8)
    r, w = rule.mapped_to(0.0, 1.0)
    jv, jd = _baseline_tables(alpha2, kmin, K, 2 * r * r - 1)
    vals = jv * r ** n
    derivs = 4.0 * r ** (n + 1) * jd
    if n > 0:
        derivs = derivs + n * r ** (n - 1) * jv
    coef = c * c + n * (n + d - 2)
    S = (derivs * (w * r ** (d - 1))) @ derivs.T
    if coef != 0.0:
        S = S + coef * ((vals * (w * r ** float(d - 3))) @ vals.T)
    M = (vals * (w * r ** (d - 1))) @ vals.T
    A = SymBandedMatrix.from_dense(0.5 * (S + S.T), 1)
    B = SymBandedMatrix.from_dense(0.5 * (M + M.T), 2)
    return RadialMode(n, beta(n, c, d), harmonic_dim(n, d), A, B, k_start=kmin)


_ASSEMBLERS = {
    "I": assemble_method1,
    "II": assemble_method2,
    "classic": assemble_classic,
    "poly": assemble_poly,
}


def assemble_mode(method, n, c, d, K):
    """Dispatch to the per-method radial assembler."""
    try:
        fn = _ASSEMBLERS[method]
    except KeyError:
        raise ValueError(f"method must be one of {METHODS}") from None
    return fn(n, c, d, K)


def solve_ball(problem, want):
    """The `want` smallest eigenvalues on the unit ball, with mode provenance.

    Each harmonic degree n contributes its radial eigenvalues with
    multiplicity a_n^d; the merge is a stable sort keyed by (value, n).
    """
    if want < 1:
        raise ValueError("want must be >= 1")
    p = problem
    entries = []
    capacity = 0
    for n in range(p.N + 1):
        if p.method in ("classic", "poly") and p.d == 2 and p.c == 0.0 and n == 0:
            raise ValueError(
                "the d=2 baseline bases cannot represent the c=0, n=0 mode "
                "(no admissible function is nonzero at the origin); "
                "use method I or II for this mode"
            )
        mode = assemble_mode(p.method, n, p.c, p.d, p.K)
        size = mode.A.order
        per_mode = min(want, size)
        spec = solve_gevp(mode.A, mode.B, per_mode)
        capacity += size * mode.multiplicity
        for j, lam in enumerate(spec.values, start=1):
            entries.extend([(lam, n, j)] * mode.multiplicity)
    if want > capacity:
        raise ValueError(f"want={want} exceeds the {capacity} available eigenvalues")
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    entries = entries[:want]
    return Spectrum(
        np.array([e[0] for e in entries]),
        tags=tuple((e[1], e[2]) for e in entries),
    )
