"""Generalized Jacobi polynomials and Gauss quadrature rules.

The family J_n^{a1,a2} extends the classical Jacobi polynomials to the
parameter value -1 (in either slot) through product factorizations, so that
polynomial bases vanishing at an endpoint can be built degree by degree.
Everything here works on the reference interval (-1, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "MAX_DEGREE",
    "JacobiParam",
    "QuadratureRule",
    "jacobi_eval",
    "jacobi_table",
    "jacobi_norm",
    "jacobi_derivative",
    "jacobi_derivative_table",
    "connection_split",
    "gauss_rule",
]

MAX_DEGREE = 512

# node symmetry tolerance for Legendre rules
_LEGENDRE_SYM_TOL = 1e-14


def _chi(a):
    """-a for negative integers, 0 otherwise."""
    if a < 0 and float(a).is_integer():
        return int(-a)
    return 0


@dataclass(frozen=True)
class JacobiParam:
    """Jacobi parameter pair; each entry is -1 exactly or lies in (-1, inf)."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        for a in (self.alpha1, self.alpha2):
            if not math.isfinite(a) or a < -1.0:
                raise ValueError(f"Jacobi parameter {a} outside {{-1}} | (-1, inf)")

    @property
    def min_degree(self):
        """Smallest admissible degree chi(alpha1) + chi(alpha2)."""
        return _chi(self.alpha1) + _chi(self.alpha2)


def _check_degree(n):
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds supported maximum {MAX_DEGREE}")


def _classical_table(a1, a2, nmax, z):
    """Rows 0..nmax of the classical (a1, a2 > -1) family at z, by recurrence."""
    out = np.empty((nmax + 1,) + z.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    s = a1 + a2
    out[1] = 0.5 * (a1 - a2) + 0.5 * (s + 2.0) * z
    for n in range(2, nmax + 1):
        c1 = 2.0 * n * (n + s) * (2 * n + s - 2)
        c2 = (2 * n + s - 1) * (a1 * a1 - a2 * a2)
        c3 = (2 * n + s - 2) * (2 * n + s - 1) * (2 * n + s)
        c4 = 2.0 * (n + a1 - 1) * (n + a2 - 1) * (2 * n + s)
        out[n] = ((c2 + c3 * z) * out[n - 1] - c4 * out[n - 2]) / c1
    return out


def jacobi_table(p, nmax, zeta):
    """Values of J_0 .. J_nmax at zeta; shape (nmax+1,) + shape(zeta).

    The a = -1 members are produced by their product forms, never by the
    classical recurrence (which would silently drop a degree there).
    """
    if not isinstance(p, JacobiParam):
        p = JacobiParam(*p)
    _check_degree(nmax)
    a1, a2 = p.alpha1, p.alpha2
    z = np.asarray(zeta, dtype=float)
    if a1 == -1.0 and a2 == -1.0:
        out = np.empty((nmax + 1,) + z.shape)
        out[0] = 1.0
        if nmax >= 1:
            out[1] = z
        if nmax >= 2:
            base = _classical_table(1.0, 1.0, nmax - 2, z)
            out[2:] = 0.25 * (z - 1.0) * (z + 1.0) * base
        return out
    if a1 == -1.0:
        out = np.empty((nmax + 1,) + z.shape)
        out[0] = 1.0
        if nmax >= 1:
            base = _classical_table(1.0, a2, nmax - 1, z)
            k = np.arange(1.0, nmax + 1).reshape((-1,) + (1,) * z.ndim)
            out[1:] = (k + a2) / k * 0.5 * (z - 1.0) * base
        return out
    if a2 == -1.0:
        # symmetry J_n^{a1,-1}(z) = (-1)^n J_n^{-1,a1}(-z)
        refl = jacobi_table(JacobiParam(-1.0, a1), nmax, -z)
        sign = np.where(np.arange(nmax + 1) % 2 == 0, 1.0, -1.0)
        return sign.reshape((-1,) + (1,) * z.ndim) * refl
    return _classical_table(a1, a2, nmax, z)


def jacobi_eval(p, n, zeta):
    """J_n^{alpha1,alpha2}(zeta); scalar in, scalar out."""
    vals = jacobi_table(p, n, zeta)[n]
    if np.ndim(zeta) == 0:
        return float(vals)
    return vals


def jacobi_norm(p, n):
    """Squared weighted L2 norm of J_n under w^{alpha1,alpha2} on (-1, 1)."""
    if not isinstance(p, JacobiParam):
        p = JacobiParam(*p)
    _check_degree(n)
    if n < p.min_degree:
        raise ValueError(
            f"degree {n} below admissible minimum {p.min_degree} "
            f"for parameters ({p.alpha1}, {p.alpha2})"
        )
    a1, a2 = p.alpha1, p.alpha2
    s = a1 + a2
    # written with Gamma(n+s+2) so every lgamma argument stays positive
    return (
        2.0 ** (s + 1)
        * (n + s + 1)
        / (2 * n + s + 1)
        * math.exp(
            math.lgamma(n + a1 + 1)
            + math.lgamma(n + a2 + 1)
            - math.lgamma(n + 1)
            - math.lgamma(n + s + 2)
        )
    )


def _derivative_excluded(p, n):
    t = -n - p.alpha1 - p.alpha2
    return float(t).is_integer() and 1 <= t <= n


def jacobi_derivative(p, n, zeta):
    """d/dzeta J_n^{alpha1,alpha2}(zeta) via the degree-lowering recurrence."""
    if not isinstance(p, JacobiParam):
        p = JacobiParam(*p)
    _check_degree(n)
    if _derivative_excluded(p, n):
        raise ValueError(
            f"derivative recurrence undefined for degree {n} at "
            f"parameters ({p.alpha1}, {p.alpha2})"
        )
    if n == 0:
        return 0.0 if np.ndim(zeta) == 0 else np.zeros(np.shape(zeta))
    fac = 0.5 * (n + p.alpha1 + p.alpha2 + 1)
    return fac * jacobi_eval(JacobiParam(p.alpha1 + 1, p.alpha2 + 1), n - 1, zeta)


def jacobi_derivative_table(p, nmax, zeta):
    """Rows 0..nmax of d/dzeta J_n at zeta (degree 0 row is zero)."""
    if not isinstance(p, JacobiParam):
        p = JacobiParam(*p)
    _check_degree(nmax)
    for n in range(1, nmax + 1):
        if _derivative_excluded(p, n):
            raise ValueError(
                f"derivative recurrence undefined for degree {n} at "
                f"parameters ({p.alpha1}, {p.alpha2})"
            )
    z = np.asarray(zeta, dtype=float)
    out = np.zeros((nmax + 1,) + z.shape)
    if nmax >= 1:
        base = jacobi_table(JacobiParam(p.alpha1 + 1, p.alpha2 + 1), nmax - 1, z)
        n = np.arange(1.0, nmax + 1).reshape((-1,) + (1,) * z.ndim)
        out[1:] = 0.5 * (n + p.alpha1 + p.alpha2 + 1) * base
    return out


def connection_split(p, n):
    """Coefficients (c0, c1, c2) of the endpoint-raising split.

    Expresses ((2n+b)/(n+b)) J_n^{-1,b} as
    c0 J_n^{0,b+1} + c1 J_{n-1}^{0,b+1} + c2 J_{n-2}^{0,b+1};
    coefficients of absent terms are zero.
    """
    if not isinstance(p, JacobiParam):
        p = JacobiParam(*p)
    _check_degree(n)
    if p.alpha1 != -1.0:
        raise ValueError("connection split requires alpha1 == -1")
    b = p.alpha2
    c0 = (n + b + 1) / (2 * n + b + 1)
    c1 = -(1 + b) * (2 * n + b) / ((2 * n + b - 1) * (2 * n + b + 1)) if n >= 1 else 0.0
    c2 = -(n - 1) / (2 * n + b - 1) if n >= 2 else 0.0
    return c0, c1, c2


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule on (-1, 1): nodes, positive weights, and its kind tag."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: object = "legendre"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if nodes.size == 0:
            raise ValueError("empty quadrature rule")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        if nodes[0] <= -1.0 or nodes[-1] >= 1.0:
            raise ValueError("nodes must lie inside (-1, 1)")
        nodes.flags.writeable = False
        weights.flags.writeable = False

    def __len__(self):
        return self.nodes.size

    def integrate(self, f):
        """Apply the rule to a callable or to an array of node values."""
        vals = f(self.nodes) if callable(f) else np.asarray(f)
        return float(self.weights @ vals)

    def mapped_to(self, a, b):
        """Nodes and weights transported to the interval (a, b)."""
        x = 0.5 * (b - a) * self.nodes + 0.5 * (a + b)
        return x, 0.5 * (b - a) * self.weights


def _recurrence_coeffs(a, b, m):
    """Diagonal and off-diagonal of the m-point symmetric Jacobi matrix."""
    s = a + b
    diag = np.empty(m)
    diag[0] = (b - a) / (s + 2.0)
    k = np.arange(1.0, m)
    diag[1:] = (b * b - a * a) / ((2 * k + s) * (2 * k + s + 2))
    off = np.empty(m - 1) if m > 1 else np.empty(0)
    if m > 1:
        off[0] = math.sqrt(4 * (a + 1) * (b + 1) / ((s + 2) ** 2 * (s + 3)))
        k = np.arange(2.0, m)
        off[1:] = np.sqrt(
            4 * k * (k + a) * (k + b) * (k + s)
            / ((2 * k + s) ** 2 * (2 * k + s + 1) * (2 * k + s - 1))
        )
    return diag, off


def gauss_rule(kind, m):
    """Golub-Welsch Gauss rule of m points for "legendre" or ("jacobi", a, b).

    Built from the eigen-decomposition of the symmetric recurrence matrix;
    exact for polynomials of degree 2m-1 against the rule's weight.
    """
    if m < 1:
        raise ValueError(f"point count must be >= 1, got {m}")
    if kind == "legendre":
        a = b = 0.0
    else:
        try:
            tag, a, b = kind
        except (TypeError, ValueError):
            raise ValueError(f"unknown quadrature kind {kind!r}") from None
        if tag != "jacobi":
            raise ValueError(f"unknown quadrature kind {kind!r}")
        if a <= -1.0 or b <= -1.0:
            raise ValueError("jacobi quadrature requires a, b > -1")
    mu0 = math.exp(
        (a + b + 1) * math.log(2.0)
        + math.lgamma(a + 1)
        + math.lgamma(b + 1)
        - math.lgamma(a + b + 2)
    )
    diag, off = _recurrence_coeffs(a, b, m)
    if m == 1:
        nodes = diag.copy()
        weights = np.array([mu0])
    else:
        nodes, vecs = eigh_tridiagonal(diag, off)
        weights = mu0 * vecs[0] ** 2
    if kind == "legendre":
        # enforce exact node antisymmetry / weight symmetry
        sym = 0.5 * (nodes - nodes[::-1])
        if np.max(np.abs(sym - nodes)) > _LEGENDRE_SYM_TOL * max(1.0, np.max(np.abs(nodes))):
            raise ValueError("legendre nodes failed the symmetry tolerance")
        nodes = sym
        weights = 0.5 * (weights + weights[::-1])
        if m % 2 == 1:
            nodes[m // 2] = 0.0
    return QuadratureRule(nodes, weights, kind)

