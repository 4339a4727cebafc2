"""Symmetric matrix containers, generalized eigensolvers, null-space reduction.

Dense solves are deliberate: every eigenproblem produced by the solvers in
this package has at most a few thousand unknowns, where LAPACK's reductions
are fast and give eigenvalues to near machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

__all__ = [
    "SymBandedMatrix",
    "DenseSymMatrix",
    "Spectrum",
    "NotPositiveDefiniteError",
    "solve_gevp",
    "nullspace",
    "reduce_constrained_gevp",
]

GROUP_TOL = 1e-9
NULLSPACE_TOL = 1e-11


class NotPositiveDefiniteError(ValueError):
    """Raised when a matrix required to be positive definite is not."""

    def __init__(self, pivot_index):
        self.pivot_index = pivot_index
        super().__init__(f"matrix not positive definite (pivot {pivot_index})")


@dataclass(frozen=True)
class SymBandedMatrix:
    """Symmetric banded matrix storing the diagonal and upper bands only.

    half_bandwidth 0 is diagonal, 1 tridiagonal, 2 penta-diagonal,
    3 septa-diagonal.
    """

    diag: np.ndarray
    upper: tuple = ()

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        upper = tuple(np.asarray(u, dtype=float) for u in self.upper)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)
        n = diag.size
        if diag.ndim != 1 or n == 0:
            raise ValueError("diagonal must be a nonempty 1-D array")
        if len(upper) > 3:
            raise ValueError("half bandwidth larger than 3 not supported")
        for off, band in enumerate(upper, start=1):
            if band.shape != (max(n - off, 0),):
                raise ValueError(f"band {off} must have length {n - off}")
        diag.flags.writeable = False
        for band in upper:
            band.flags.writeable = False

    @property
    def order(self):
        return self.diag.size

    @property
    def half_bandwidth(self):
        return len(self.upper)

    def to_dense(self):
        n = self.order
        out = np.diag(self.diag)
        for off, band in enumerate(self.upper, start=1):
            idx = np.arange(n - off)
            out[idx, idx + off] = band
            out[idx + off, idx] = band
        return out

    def band_form(self):
        """Upper band storage a[u + i - j, j] = M[i, j] for scipy.eig_banded."""
        n, b = self.order, self.half_bandwidth
        ab = np.zeros((b + 1, n))
        ab[b] = self.diag
        for off, band in enumerate(self.upper, start=1):
            ab[b - off, off:] = band
        return ab

    @staticmethod
    def from_dense(mat, half_bandwidth, tol=1e-11):
        """Extract bands, requiring out-of-band entries to be negligible."""
        mat = np.asarray(mat, dtype=float)
        n = mat.shape[0]
        scale = max(np.abs(mat).max(), 1e-300)
        for off in range(half_bandwidth + 1, n):
            stray = np.abs(np.diagonal(mat, off)).max(initial=0.0)
            if stray > tol * scale:
                raise ValueError(
                    f"entry at offset {off} (magnitude {stray:.3e}) violates "
                    f"claimed half bandwidth {half_bandwidth}"
                )
        upper = tuple(np.diagonal(mat, off).copy() for off in range(1, half_bandwidth + 1))
        return SymBandedMatrix(np.diagonal(mat).copy(), upper)


@dataclass(frozen=True)
class DenseSymMatrix:
    """Dense symmetric matrix; input is symmetrized on construction."""

    data: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.data, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        scale = max(np.abs(mat).max(), 1e-300)
        if np.abs(mat - mat.T).max() > 1e-10 * scale:
            raise ValueError("matrix is not symmetric")
        sym = 0.5 * (mat + mat.T)
        sym.flags.writeable = False
        object.__setattr__(self, "data", sym)

    @property
    def order(self):
        return self.data.shape[0]

    def to_dense(self):
        return self.data.copy()


def as_dense(mat):
    """Dense ndarray view of a matrix container or array."""
    if isinstance(mat, (SymBandedMatrix, DenseSymMatrix)):
        return mat.to_dense()
    return np.asarray(mat, dtype=float)


def _order(mat):
    if isinstance(mat, (SymBandedMatrix, DenseSymMatrix)):
        return mat.order
    return np.asarray(mat).shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with repeats kept, plus optional provenance tags."""

    values: np.ndarray
    tags: tuple = None
    group_tol: float = GROUP_TOL

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1:
            raise ValueError("eigenvalues must form a 1-D array")
        if np.any(np.diff(vals) < -1e-12 * (1.0 + np.abs(vals[:-1]))):
            raise ValueError("eigenvalues must be ascending")
        if self.tags is not None:
            tags = tuple(self.tags)
            if len(tags) != vals.size:
                raise ValueError("one tag per eigenvalue required")
            object.__setattr__(self, "tags", tags)
        vals.flags.writeable = False

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    def grouped(self):
        """List of (value, multiplicity, tags) with near-equal values merged."""
        out = []
        i = 0
        vals = self.values
        while i < len(vals):
            j = i + 1
            while j < len(vals) and vals[j] - vals[i] <= self.group_tol * (1.0 + abs(vals[i])):
                j += 1
            tags = self.tags[i:j] if self.tags is not None else None
            out.append((float(np.mean(vals[i:j])), j - i, tags))
            i = j
        return out

    @property
    def eigenvalues(self):
        """Distinct eigenvalue representatives (degeneracies merged)."""
        return np.array([g[0] for g in self.grouped()])

    @property
    def multiplicities(self):
        return np.array([g[1] for g in self.grouped()], dtype=int)


def _cholesky_with_pivot(mat):
    """Lower Cholesky factor, reporting the first non-positive pivot."""
    n = mat.shape[0]
    L = np.zeros_like(mat)
    for j in range(n):
        d = mat[j, j] - L[j, :j] @ L[j, :j]
        if d <= 0.0 or not np.isfinite(d):
            raise NotPositiveDefiniteError(j)
        L[j, j] = np.sqrt(d)
        if j + 1 < n:
            L[j + 1:, j] = (mat[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def _solve_banded_diagonal(A, B, want, with_vectors):
    """Fast path: A positive diagonal, B banded; congruence by A^{-1/2}."""
    d = 1.0 / np.sqrt(A.diag)
    scaled_diag = B.diag * d * d
    scaled_upper = tuple(
        band * d[:-off] * d[off:] for off, band in enumerate(B.upper, start=1)
    )
    C = SymBandedMatrix(scaled_diag, scaled_upper)
    if with_vectors:
        mu, vecs = sla.eig_banded(C.band_form(), lower=False)
    else:
        mu = sla.eig_banded(C.band_form(), lower=False, eigvals_only=True)
        vecs = None
    if mu[0] <= 0.0:
        raise NotPositiveDefiniteError(int(np.argmin(mu)))
    lam = 1.0 / mu[::-1]
    if vecs is None:
        return lam[:want], None
    # x = A^{-1/2} v satisfies x^T B x = mu; rescale to B-orthonormal columns
    X = (vecs * d[:, None])[:, ::-1][:, :want] / np.sqrt(mu[::-1][:want])
    return lam[:want], X


def solve_gevp(A, B, want=None, vectors=False):
    """Smallest eigenvalues of the symmetric-definite pencil A x = lambda B x.

    A must be symmetric (positive semi-definite in normal use), B symmetric
    positive definite.  Reduction is by Cholesky of B, or by congruence with
    A^{-1/2} when A is stored as a positive diagonal; the reduced standard
    problem goes to LAPACK's symmetric solvers.

    Returns a Spectrum, or (Spectrum, X) with B-orthonormal eigenvector
    columns when vectors=True.
    """
    n = _order(A)
    if _order(B) != n:
        raise ValueError(f"order mismatch: A is {n}, B is {_order(B)}")
    if want is None:
        want = n
    if not 1 <= want <= n:
        raise ValueError(f"want must be in 1..{n}, got {want}")

    if (
        isinstance(A, SymBandedMatrix)
        and A.half_bandwidth == 0
        and np.all(A.diag > 0)
        and isinstance(B, SymBandedMatrix)
    ):
        lam, X = _solve_banded_diagonal(A, B, want, vectors)
    else:
        Ad = as_dense(A)
        Bd = as_dense(B)
        # symmetric diagonal pre-scaling (unit B diagonal): the spectrum is
        # invariant and the Cholesky reduction loses far fewer digits on
        # badly scaled bases
        bdiag = np.diagonal(Bd)
        if np.all(bdiag > 0):
            s = 1.0 / np.sqrt(bdiag)
        else:
            s = np.ones(n)
        Ad = Ad * s[:, None] * s[None, :]
        Bd = Bd * s[:, None] * s[None, :]
        L = _cholesky_with_pivot(Bd)
        W = sla.solve_triangular(L, Ad, lower=True)
        M = sla.solve_triangular(L, W.T, lower=True)
        M = 0.5 * (M + M.T)
        if vectors:
            lam, Y = sla.eigh(M, subset_by_index=(0, want - 1))
            X = s[:, None] * sla.solve_triangular(L.T, Y, lower=False)
        else:
            lam = sla.eigh(M, eigvals_only=True, subset_by_index=(0, want - 1))
            X = None
    spectrum = Spectrum(np.sort(lam))
    return (spectrum, X) if vectors else spectrum


def nullspace(C, tol=NULLSPACE_TOL):
    """Orthonormal basis Z of the null space of C, by SVD thresholding."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    C = np.atleast_2d(np.asarray(C, dtype=float))
    ncols = C.shape[1]
    if C.shape[0] == 0 or not np.any(C):
        return np.eye(ncols)
    _, s, vh = np.linalg.svd(C, full_matrices=True)
    rank = int(np.sum(s > tol * s[0]))
    return vh[rank:].T


def reduce_constrained_gevp(A, B, C, want=None, tol=NULLSPACE_TOL, vectors=False):
    """Spectrum of A x = lambda B x restricted to the null space of C.

    Equivalent to the saddle-point problem that augments the pencil with the
    constraint rows C; the constraints are eliminated so the reduced pencil
    stays symmetric definite.
    """
    Ad = as_dense(A)
    Bd = as_dense(B)
    if C is None or np.size(C) == 0:
        return solve_gevp(Ad, Bd, want, vectors=vectors)
    Z = nullspace(C, tol)
    if Z.shape[1] == 0:
        raise ValueError("constraints eliminate every degree of freedom")
    Ar = Z.T @ Ad @ Z
    Br = Z.T @ Bd @ Z
    if vectors:
        spec, Y = solve_gevp(Ar, Br, want, vectors=True)
        return spec, Z @ Y
    return solve_gevp(Ar, Br, want)
