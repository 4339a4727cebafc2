"""Spectral eigensolvers on planar circular sectors.

The sector of opening angle pi/gamma carries sine modes sin(n gamma theta),
n >= 1, and each mode reduces to the same radial pencils as the disk with
exponent sqrt(c^2 + gamma^2 n^2) and prefactor pi/(2 gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ball import (
    RadialMode,
    method1_mass_bands,
    method1_stiffness_diag,
    method2_mass_bands,
    method2_stiffness_diag,
)
from .eiglin import Spectrum, SymBandedMatrix, solve_gevp

__all__ = ["SectorProblem", "beta_sector", "assemble_sector", "solve_sector"]


def beta_sector(n, c, gamma):
    """Sector singularity exponent sqrt(c^2 + gamma^2 n^2), n >= 1."""
    if n < 1:
        raise ValueError("sector modes start at n = 1 (sine basis)")
    if c < 0 or gamma < 0.5:
        raise ValueError("require c >= 0 and gamma >= 1/2")
    return math.sqrt(c * c + gamma * gamma * n * n)


@dataclass(frozen=True)
class SectorProblem:
    gamma: float
    c: float
    K: int
    N: int
    method: str = "II"

    def __post_init__(self):
        if self.gamma < 0.5:
            raise ValueError("opening angle pi/gamma must not exceed 2 pi")
        if self.c < 0:
            raise ValueError("potential strength must be >= 0")
        if self.K < 1 or self.N < 1:
            raise ValueError("require K >= 1 and N >= 1")
        if self.method not in ("I", "II"):
            raise ValueError("sector methods are 'I' and 'II'")


def assemble_sector(method, n, c, gamma, K, k_start=1):
    """Radial pencil of one sector mode; prefactor pi/(2 gamma).

    The tables coincide with the disk tables (d = 2) evaluated at the sector
    exponent: the stated per-mode energies (k + b)(2 - delta_{k0}) for
    method I and (2k + b)(2 - delta_{k0}) for method II equal the disk
    diagonals 2k + 2b and 2(2k + b) for k >= 1, and both reduce to b at k = 0.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    b = beta_sector(n, c, gamma)
    om = math.pi / (2 * gamma)
    if method == "I":
        A = SymBandedMatrix(method1_stiffness_diag(b, K, om, d=2, k_start=k_start))
        diag, off1, off2 = method1_mass_bands(b, K, om, k_start=k_start)
        B = SymBandedMatrix(diag, (off1, off2))
    elif method == "II":
        A = SymBandedMatrix(method2_stiffness_diag(b, K, om, d=2, k_start=k_start))
        diag, off1 = method2_mass_bands(b, K, om, k_start=k_start)
        B = SymBandedMatrix(diag, (off1,))
    else:
        raise ValueError("sector methods are 'I' and 'II'")
    return RadialMode(n, b, 1, A, B, k_start=k_start)


def solve_sector(problem, want):
    """The `want` smallest sector eigenvalues, merged over modes n = 1..N."""
    p = problem
    if not 1 <= want <= p.K * p.N:
        raise ValueError(f"want must be in 1..{p.K * p.N}")
    entries = []
    for n in range(1, p.N + 1):
        mode = assemble_sector(p.method, n, p.c, p.gamma, p.K)
        spec = solve_gevp(mode.A, mode.B, min(want, mode.A.order))
        entries.extend((lam, n, j) for j, lam in enumerate(spec.values, start=1))
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    entries = entries[:want]
    return Spectrum(
        np.array([e[0] for e in entries]),
        tags=tuple((e[1], e[2]) for e in entries),
    )
