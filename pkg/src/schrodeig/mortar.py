"""Mortar spectral element method on the square and the L-shape domain.

The domain is split by a circle of radius R about the origin: inside,
a singularity-adapted disk (or 3/4-sector) block; outside, four curvilinear
quadrilaterals under Gordon-Hall maps carrying tensor polynomial bases.
The two sides are coupled weakly through trace-matching rows on the circle,
and the constrained pencil is reduced to a symmetric-definite one by
null-space elimination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ball import method2_mass_bands, method2_stiffness_diag
from .eiglin import Spectrum, nullspace, solve_gevp
from .orthopoly import JacobiParam, gauss_rule, jacobi_table

__all__ = [
    "LSHAPE_GAMMA",
    "GordonHallMap",
    "ElementMatrices",
    "MortarMesh",
    "MsemResult",
    "gh_map",
    "gh_jacobian",
    "hat_basis_tables",
    "assemble_interface_block",
    "assemble_quad_element",
    "assemble_mortar_constraints",
    "build_mesh",
    "solve_msem",
]

LSHAPE_GAMMA = 2.0 / 3.0

# quadrature stabilization: entries must settle to this tolerance on doubling
QUAD_STAB_TOL = 1e-11
ARC_QUAD_POINTS = 64

# sin(pi k / 2), cos(pi k / 2) for the four square quadrants, kept exact
_SINC = {1: (1.0, 0.0), 2: (0.0, -1.0), 3: (-1.0, 0.0), 4: (0.0, 1.0)}


@dataclass(frozen=True)
class GordonHallMap:
    """Transfinite map of [-1,1]^2 onto one curvilinear quadrilateral.

    The xi = -1 edge lies on the circular interface, xi = +1 on the outer
    boundary.  On the square all four maps are rotations of each other; on
    the L-shape the quadrants adjacent to the reentrant corner (kappa 1, 4)
    use their own half-angle maps.
    """

    kappa: int
    domain: str = "square"
    R: float = 0.3

    def __post_init__(self):
        if self.kappa not in (1, 2, 3, 4):
            raise ValueError("kappa must be 1..4")
        if self.domain not in ("square", "lshape"):
            raise ValueError("domain must be 'square' or 'lshape'")
        if not 0.0 < self.R < 1.0:
            raise ValueError("interface radius must lie in (0, 1)")


def _uses_corner_map(m):
    return m.domain == "lshape" and m.kappa in (1, 4)


def gh_map(m, xi, eta):
    """Physical coordinates (x, y) of reference points (xi, eta)."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    R = m.R
    if not _uses_corner_map(m):
        s, c = _SINC[m.kappa]
        ang = np.pi * (eta + 2 * m.kappa) / 4
        x = 0.5 * (1 + xi) * (s + eta * c) + 0.5 * (1 - xi) * R * np.sin(ang)
        y = 0.5 * (1 + xi) * (eta * s - c) - 0.5 * (1 - xi) * R * np.cos(ang)
        return x, y
    ang = np.pi * (eta + 1) / 8
    if m.kappa == 1:
        x = 0.5 * (1 + xi) + 0.5 * (1 - xi) * R * np.cos(ang)
        y = 0.25 * (1 + xi) * (1 + eta) + 0.5 * (1 - xi) * R * np.sin(ang)
    else:
        x = -0.25 * (1 + xi) * (1 + eta) - 0.5 * (1 - xi) * R * np.sin(ang)
        y = -0.5 * (1 + xi) - 0.5 * (1 - xi) * R * np.cos(ang)
    return x, y


def gh_jacobian(m, xi, eta):
    """Analytic Jacobian J = [[x_xi, y_xi], [x_eta, y_eta]] and det J.

    The determinant keeps its analytic sign (the kappa = 4 corner map of the
    L-shape is orientation-reversing); assembly uses |det|.
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    R = m.R
    if not _uses_corner_map(m):
        s, c = _SINC[m.kappa]
        ang = np.pi * (eta + 2 * m.kappa) / 4
        x_xi = 0.5 * (s + eta * c) - 0.5 * R * np.sin(ang)
        x_eta = 0.5 * (1 + xi) * c + 0.5 * (1 - xi) * R * np.cos(ang) * np.pi / 4
        y_xi = 0.5 * (eta * s - c) + 0.5 * R * np.cos(ang)
        y_eta = 0.5 * (1 + xi) * s + 0.5 * (1 - xi) * R * np.sin(ang) * np.pi / 4
    else:
        ang = np.pi * (eta + 1) / 8
        if m.kappa == 1:
            x_xi = 0.5 - 0.5 * R * np.cos(ang)
            x_eta = -0.5 * (1 - xi) * R * np.sin(ang) * np.pi / 8
            y_xi = 0.25 * (1 + eta) - 0.5 * R * np.sin(ang)
            y_eta = 0.25 * (1 + xi) + 0.5 * (1 - xi) * R * np.cos(ang) * np.pi / 8
        else:
            x_xi = -0.25 * (1 + eta) + 0.5 * R * np.sin(ang)
            x_eta = -0.25 * (1 + xi) - 0.5 * (1 - xi) * R * np.cos(ang) * np.pi / 8
            y_xi = -0.5 + 0.5 * R * np.cos(ang)
            y_eta = 0.5 * (1 - xi) * R * np.sin(ang) * np.pi / 8
    J = np.array([[x_xi, y_xi], [x_eta, y_eta]])
    det = x_xi * y_eta - y_xi * x_eta
    return J, det


def arc_parametrization(m):
    """theta(eta) along the xi = -1 edge and the constant |dtheta/deta|."""
    if not _uses_corner_map(m):
        shift = (m.kappa - 1) * np.pi / 2
        return (lambda e: np.pi * e / 4 + shift), np.pi / 4
    if m.kappa == 1:
        return (lambda e: np.pi * (e + 1) / 8), np.pi / 8
    return (lambda e: 1.5 * np.pi - np.pi * (e + 1) / 8), np.pi / 8


def hat_basis_tables(nmax, z):
    """Values and derivatives of the 1-D element basis at points z.

    Index 0 and 1 are the hats (1+z)/2 and (1-z)/2; indices k >= 2 are the
    interior bubbles J_k^{-1,-1}(z).
    """
    z = np.asarray(z, dtype=float)
    vals = np.empty((nmax + 1,) + z.shape)
    derivs = np.empty_like(vals)
    vals[0] = 0.5 * (1 + z)
    derivs[0] = 0.5
    if nmax >= 1:
        vals[1] = 0.5 * (1 - z)
        derivs[1] = -0.5
    if nmax >= 2:
        vals[2:] = jacobi_table(JacobiParam(-1.0, -1.0), nmax, z)[2:]
        legendre = jacobi_table(JacobiParam(0.0, 0.0), nmax - 1, z)
        k = np.arange(2.0, nmax + 1).reshape((-1,) + (1,) * z.ndim)
        derivs[2:] = 0.5 * (k - 1) * legendre[1:]
    return vals, derivs


@dataclass(frozen=True)
class ElementMatrices:
    """Local stiffness/mass with the local-to-global key list."""

    stiffness: np.ndarray
    mass: np.ndarray
    keys: tuple
    quad_points: int = 0
    stabilization_delta: float = 0.0


def _angular_modes(domain, disk_n):
    if domain == "square":
        modes = [(0, "one")]
        for n in range(1, disk_n + 1):
            modes.append((n, "cos"))
            modes.append((n, "sin"))
        return modes
    return [(n, "sin") for n in range(1, disk_n + 1)]


def _mode_beta(domain, c, n):
    if domain == "square":
        return math.sqrt(c * c + n * n)
    return math.sqrt(c * c + LSHAPE_GAMMA * LSHAPE_GAMMA * n * n)


def _angular_trace(domain, mode, theta):
    n, tag = mode
    if domain == "square":
        if tag == "one":
            return np.ones_like(theta)
        if tag == "cos":
            return math.sqrt(2.0) * np.cos(n * theta)
        return math.sqrt(2.0) * np.sin(n * theta)
    return np.sin(n * LSHAPE_GAMMA * theta)


def assemble_interface_block(domain, R, c, K0, N0):
    """Closed-form blocks of the inner disk/sector, radial index 0..K0.

    Index k = 0 carries the unit trace on the interface circle; all k >= 1
    members vanish there.  Under the dilation onto radius R the energy terms
    are scale invariant in two dimensions and the mass picks up R^2.
    Returns {mode: (A_diag, B_tridiag_dense)} over the angular modes.
    """
    if not 0.0 < R < 1.0:
        raise ValueError("interface radius must lie in (0, 1)")
    if K0 < 1 or N0 < 0 or (domain == "lshape" and N0 < 1):
        raise ValueError("invalid disk block degrees")
    omega = 2.0 * math.pi if domain == "square" else math.pi / (2 * LSHAPE_GAMMA)
    blocks = {}
    for mode in _angular_modes(domain, N0):
        b = _mode_beta(domain, c, mode[0])
        adiag = method2_stiffness_diag(b, K0, omega, d=2, k_start=0)
        mdiag, moff = method2_mass_bands(b, K0, omega, k_start=0)
        B = np.diag(mdiag) + np.diag(moff, 1) + np.diag(moff, -1)
        blocks[mode] = (adiag, R * R * B)
    return blocks


def _quad_block_raw(m, c, K, N, bset, q):
    """Tensor Gauss-Legendre assembly of one quadrilateral at order q."""
    rule = gauss_rule("legendre", q)
    z, w = rule.nodes, rule.weights
    XI, ETA = np.meshgrid(z, z, indexing="ij")
    W2 = np.outer(w, w).ravel()
    xi = XI.ravel()
    eta = ETA.ravel()
    J, det = gh_jacobian(m, xi, eta)
    adet = np.abs(det)
    (x_xi, y_xi), (x_eta, y_eta) = J
    g11 = (y_eta ** 2 + x_eta ** 2) / adet
    g12 = -(y_xi * y_eta + x_xi * x_eta) / adet
    g22 = (y_xi ** 2 + x_xi ** 2) / adet
    vx, dx = hat_basis_tables(K, z)
    ve, de = hat_basis_tables(N, z)
    ia = list(range(1, K + 1))
    base = np.einsum("ai,bj->abij", vx[ia], ve[bset]).reshape(len(ia) * len(bset), -1)
    dxi = np.einsum("ai,bj->abij", dx[ia], ve[bset]).reshape(base.shape)
    det_ = np.einsum("ai,bj->abij", vx[ia], de[bset]).reshape(base.shape)
    S = (
        (dxi * (W2 * g11)) @ dxi.T
        + (dxi * (W2 * g12)) @ det_.T
        + (det_ * (W2 * g12)) @ dxi.T
        + (det_ * (W2 * g22)) @ det_.T
    )
    if c != 0.0:
        x, y = gh_map(m, xi, eta)
        S = S + (base * (W2 * (c * c) / (x * x + y * y) * adet)) @ base.T
    M = (base * (W2 * adet)) @ base.T
    keys = tuple((m.kappa, a, b) for a in ia for b in bset)
    return 0.5 * (S + S.T), 0.5 * (M + M.T), keys


def assemble_quad_element(m, c, K, N, bset=None, q=None, max_doublings=2):
    """Local matrices of one mapped quadrilateral, with a stabilization check.

    The integrands carry trigonometric Jacobian factors, so no fixed order is
    exact; the order doubles until entries settle below QUAD_STAB_TOL (scaled)
    or the doubling limit is exhausted, which is reported as an error.
    """
    if bset is None:
        bset = list(range(0, N + 1))
    if q is None:
        q = max(K, N) + 16
    S, M, keys = _quad_block_raw(m, c, K, N, bset, q)
    for _ in range(max_doublings):
        q2 = 2 * q
        S2, M2, _ = _quad_block_raw(m, c, K, N, bset, q2)
        scale = max(np.abs(S2).max(), np.abs(M2).max(), 1.0)
        delta = max(np.abs(S - S2).max(), np.abs(M - M2).max())
        if delta <= QUAD_STAB_TOL * scale:
            return ElementMatrices(S2, M2, keys, q2, delta / scale)
        S, M, q = S2, M2, q2
    raise RuntimeError(
        f"quadrature for quad {m.kappa} did not stabilize below "
        f"{QUAD_STAB_TOL} by order {q}"
    )


def _eta_index_set(domain, kappa, N):
    # L-shape quads 1 and 4 have a straight Dirichlet edge at eta = -1,
    # which removes the (1-eta)/2 hat
    if domain == "lshape" and kappa in (1, 4):
        return [0] + list(range(2, N + 1))
    return list(range(0, N + 1))


def _interface_pairs(domain, quad_degrees):
    """Identified (later_key, earlier_key) pairs across interior edges."""
    if domain == "square":
        edges = [(1, 2, 0, 1), (2, 3, 0, 1), (3, 4, 0, 1), (4, 1, 0, 1)]
    else:
        edges = [(1, 2, 0, 1), (2, 3, 0, 1), (3, 4, 0, 0)]
    canon = {}
    dropped = set()
    for ka, kb, ba, bb in edges:
        Ka = quad_degrees[ka - 1][0]
        Kb = quad_degrees[kb - 1][0]
        for a in range(1, min(Ka, Kb) + 1):
            if (ka, a, ba) in canon:
                canon[(kb, a, bb)] = canon[(ka, a, ba)]
            else:
                canon[(kb, a, bb)] = (ka, a, ba)
        # trace-degree mismatch: the finer side's extra edge modes must vanish
        for a in range(min(Ka, Kb) + 1, Ka + 1):
            dropped.add((ka, a, ba))
        for a in range(min(Ka, Kb) + 1, Kb + 1):
            dropped.add((kb, a, bb))
    return canon, dropped


@dataclass
class MortarMesh:
    """Two-block mortar mesh: disk/sector data, quad data, and DOF tables."""

    domain: str
    R: float
    c: float
    disk_k: int
    disk_n: int
    quad_degrees: tuple
    quad_order: int = None
    modes: list = field(default_factory=list)
    maps: tuple = ()
    bsets: tuple = ()
    gid: dict = field(default_factory=dict)
    canon: dict = field(default_factory=dict)
    dropped: frozenset = frozenset()
    n_dofs: int = 0
    n_disk_dofs: int = 0

    def disk_key(self, mode, k):
        return ("disk", mode, k)

    def global_index(self, key):
        if key[0] != "disk":
            key = self.canon.get(key, key)
        return self.gid[key]

    def dof_table(self):
        """Deterministic (kind, key) rows: disk modes first, then quads."""
        inverse = [None] * self.n_dofs
        for key, idx in self.gid.items():
            if inverse[idx] is None:
                inverse[idx] = key
        return inverse


def build_mesh(domain, R, c, disk_k, disk_n, quad_degrees, quad_order=None):
    """Construct the mesh/DOF tables for the square or L-shape partition.

    quad_degrees is a sequence of four (K, N) pairs: K is the degree across
    the annular direction (xi, interface to outer boundary) and N along the
    interface (eta).
    """
    if domain not in ("square", "lshape"):
        raise ValueError("domain must be 'square' or 'lshape'")
    if c < 0:
        raise ValueError("potential strength must be >= 0")
    quad_degrees = tuple((int(K), int(N)) for K, N in quad_degrees)
    if len(quad_degrees) != 4:
        raise ValueError("need degrees for all four quadrilaterals")
    for K, N in quad_degrees:
        if K < 1 or N < 1:
            raise ValueError("quadrilateral degrees must be >= 1")
    mesh = MortarMesh(domain, float(R), float(c), int(disk_k), int(disk_n), quad_degrees)
    mesh.quad_order = quad_order
    mesh.modes = _angular_modes(domain, mesh.disk_n)
    mesh.maps = tuple(GordonHallMap(kappa, domain, float(R)) for kappa in range(1, 5))
    mesh.bsets = tuple(
        _eta_index_set(domain, kappa, quad_degrees[kappa - 1][1]) for kappa in range(1, 5)
    )
    canon, dropped = _interface_pairs(domain, quad_degrees)
    mesh.canon = canon
    mesh.dropped = frozenset(dropped)
    gid = {}
    count = 0
    for mode in mesh.modes:
        for k in range(mesh.disk_k + 1):
            gid[mesh.disk_key(mode, k)] = count
            count += 1
    mesh.n_disk_dofs = count
    for kappa in range(1, 5):
        K = quad_degrees[kappa - 1][0]
        for a in range(1, K + 1):
            for b in mesh.bsets[kappa - 1]:
                key = (kappa, a, b)
                if key in dropped:
                    continue
                key = canon.get(key, key)
                if key not in gid:
                    gid[key] = count
                    count += 1
    mesh.gid = gid
    mesh.n_dofs = count
    return mesh


def assemble_global(mesh):
    """Global stiffness and mass over the unconstrained product space."""
    n = mesh.n_dofs
    A = np.zeros((n, n))
    B = np.zeros((n, n))
    blocks = assemble_interface_block(mesh.domain, mesh.R, mesh.c, mesh.disk_k, mesh.disk_n)
    for mode, (adiag, Bblk) in blocks.items():
        idx = [mesh.gid[mesh.disk_key(mode, k)] for k in range(mesh.disk_k + 1)]
        A[idx, idx] += adiag
        B[np.ix_(idx, idx)] += Bblk
    elements = []
    for kappa in range(1, 5):
        K, N = mesh.quad_degrees[kappa - 1]
        bset = mesh.bsets[kappa - 1]
        elem = assemble_quad_element(
            mesh.maps[kappa - 1], mesh.c, K, N, bset=bset, q=mesh.quad_order
        )
        keep = [i for i, key in enumerate(elem.keys) if key not in mesh.dropped]
        idx = [mesh.global_index(elem.keys[i]) for i in keep]
        sel = np.ix_(keep, keep)
        A[np.ix_(idx, idx)] += elem.stiffness[sel]
        B[np.ix_(idx, idx)] += elem.mass[sel]
        elements.append(elem)
    return A, B, elements


def assemble_mortar_constraints(mesh):
    """Trace-matching rows on the interface circle, one per test function.

    Test functions are the disk-side angular traces (full trigonometric set
    on the square, sines on the L-shape).  Disk columns are analytic: only
    the k = 0 radial members have a nonzero trace and the angular functions
    are orthogonal on the circle.  Quad columns come from per-edge
    Gauss-Legendre quadrature against the eta profiles.
    """
    n = mesh.n_dofs
    rule = gauss_rule("legendre", ARC_QUAD_POINTS)
    zq, wq = rule.nodes, rule.weights
    disk_norm = {
        "square": 2.0 * math.pi * mesh.R,
        "lshape": math.pi / (2 * LSHAPE_GAMMA) * mesh.R,
    }[mesh.domain]
    rows = []
    for mode in mesh.modes:
        row = np.zeros(n)
        row[mesh.gid[mesh.disk_key(mode, 0)]] += disk_norm
        for kappa in range(1, 5):
            N = mesh.quad_degrees[kappa - 1][1]
            theta_of, dtheta = arc_parametrization(mesh.maps[kappa - 1])
            f = _angular_trace(mesh.domain, mode, theta_of(zq))
            ve, _ = hat_basis_tables(N, zq)
            for b in mesh.bsets[kappa - 1]:
                key = (kappa, 1, b)
                if key in mesh.dropped:
                    continue
                row[mesh.global_index(key)] += -mesh.R * dtheta * float(wq @ (ve[b] * f))
        rows.append(row)
    C = np.array(rows)
    s = np.linalg.svd(C, compute_uv=False)
    expected = len(rows)
    rank = int(np.sum(s > 1e-11 * s[0]))
    if rank != expected:
        weak = [i for i in range(len(rows)) if np.abs(C[i]).max() < 1e-11]
        raise RuntimeError(
            f"constraint matrix rank {rank} below the expected {expected}; "
            f"suspicious rows: {weak}"
        )
    return C


@dataclass(frozen=True)
class MsemResult:
    """Spectrum plus the degree-of-freedom bookkeeping of one mortar solve."""

    spectrum: Spectrum
    dof: int
    constraint_rank: int

    @property
    def dof_reduced(self):
        return self.dof - self.constraint_rank


def solve_msem(mesh, want):
    """The `want` smallest eigenvalues of the mortar discretization.

    Reported DoF counts the unconstrained product-space basis; the reduced
    pencil actually solved has dof - rank(C) unknowns.
    """
    if want < 1:
        raise ValueError("want must be >= 1")
    A, B, _ = assemble_global(mesh)
    C = assemble_mortar_constraints(mesh)
    Z = nullspace(C)
    rank = mesh.n_dofs - Z.shape[1]
    Ar = Z.T @ A @ Z
    Br = Z.T @ B @ Z
    spec = solve_gevp(Ar, Br, want)
    tagged = Spectrum(spec.values, tags=tuple(("msem", mesh.domain) for _ in spec.values))
    return MsemResult(tagged, mesh.n_dofs, rank)
