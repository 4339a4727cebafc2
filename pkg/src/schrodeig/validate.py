"""Runtime self-validation suites: closed forms vs independent oracles.

Each check returns (name, passed, detail).  The suites are deterministic for
a fixed seed and are deliberately cheap enough to run end to end in well
under a minute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ball, eiglin, mortar, oracles, orthopoly, sector, specfun

__all__ = ["CheckResult", "MODULE_SUITES", "run_suite", "run_all"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  ({self.detail})"


def _result(name, err, tol):
    return CheckResult(name, bool(err <= tol), f"err={err:.3e} tol={tol:.1e}")


# ---------------------------------------------------------------- orthopoly


def _orthopoly_checks(rng):
    checks = []

    err = abs(orthopoly.jacobi_eval((0.0, 0.0), 1, 0.3) - 0.3)
    err = max(err, abs(orthopoly.jacobi_eval((-1.0, -1.0), 1, 0.7) - 0.7))
    err = max(err, abs(orthopoly.jacobi_eval((-1.0, 1.0), 3, 1.0)))
    checks.append(_result("orthopoly.eval.special_points", err, 1e-14))

    # orthogonality and norms under the matching Gauss-Jacobi rule
    worst_off = 0.0
    worst_norm = 0.0
    for _ in range(6):
        a1, a2 = rng.uniform(-1.0, 3.0, size=2)
        rule = orthopoly.gauss_rule(("jacobi", a1, a2), 16)
        table = orthopoly.jacobi_table((a1, a2), 12, rule.nodes)
        gram = (table * rule.weights) @ table.T
        norms = np.array([orthopoly.jacobi_norm((a1, a2), k) for k in range(13)])
        worst_off = max(worst_off, np.abs(gram - np.diag(np.diag(gram))).max())
        worst_norm = max(worst_norm, np.abs(np.diag(gram) / norms - 1.0).max())
    checks.append(_result("orthopoly.orthogonality.offdiag", worst_off, 1e-11))
    checks.append(_result("orthopoly.orthogonality.norms", worst_norm, 1e-11))

    # symmetry J_n^{a1,a2}(z) = (-1)^n J_n^{a2,a1}(-z), including -1 slots
    z = rng.uniform(-1.0, 1.0, size=24)
    worst = 0.0
    for a1, a2 in [(-1.0, -1.0), (-1.0, 0.7), (1.3, -1.0), (0.25, 1.75)]:
        left = orthopoly.jacobi_table((a1, a2), 10, z)
        right = orthopoly.jacobi_table((a2, a1), 10, -z)
        sign = np.where(np.arange(11) % 2 == 0, 1.0, -1.0)[:, None]
        worst = max(worst, np.abs(left - sign * right).max())
    checks.append(_result("orthopoly.symmetry", worst, 1e-13))

    # derivative recurrence against central differences
    h = 1e-5
    worst = 0.0
    for a1, a2 in [(0.5, 0.5), (-1.0, 2.0), (0.0, 0.0)]:
        for n in (1, 4, 7, 10):
            for z0 in (-0.6, 0.1, 0.8):
                fd = (
                    orthopoly.jacobi_eval((a1, a2), n, z0 + h)
                    - orthopoly.jacobi_eval((a1, a2), n, z0 - h)
                ) / (2 * h)
                ex = orthopoly.jacobi_derivative((a1, a2), n, z0)
                worst = max(worst, abs(fd - ex) / max(1.0, abs(ex)))
    checks.append(_result("orthopoly.derivative_vs_fd", worst, 1e-6))

    # connection split, checked pointwise
    z = rng.uniform(-1.0, 1.0, size=20)
    worst = 0.0
    for b in (0.8, 1.0, 2.4):
        for n in (0, 1, 3, 6):
            c0, c1, c2 = orthopoly.connection_split((-1.0, b), n)
            lhs = (2 * n + b) / (n + b) * orthopoly.jacobi_table((-1.0, b), n, z)[n] \
                if n > 0 else orthopoly.jacobi_table((-1.0, b), 0, z)[0]
            hi = orthopoly.jacobi_table((0.0, b + 1), n, z)
            rhs = c0 * hi[n]
            if n >= 1:
                rhs = rhs + c1 * hi[n - 1]
            if n >= 2:
                rhs = rhs + c2 * hi[n - 2]
            worst = max(worst, np.abs(lhs - rhs).max())
    checks.append(_result("orthopoly.connection_split", worst, 1e-12))

    # quadrature exactness against an adaptive integration oracle
    from scipy.integrate import quad

    rule = orthopoly.gauss_rule(("jacobi", 0.0, 2.5), 12)
    approx = rule.integrate(rule.nodes ** 8)
    exact, _ = quad(lambda t: (1 + t) ** 2.5 * t ** 8, -1.0, 1.0, epsabs=1e-14, epsrel=1e-14)
    checks.append(_result("orthopoly.gauss_rule.exactness", abs(approx - exact), 1e-13))
    return checks


# ------------------------------------------------------------------ specfun


def _specfun_checks(rng):
    checks = []
    x = np.linspace(0.05, 50.0, 1000)
    err = np.abs(specfun.bessel_j(0.5, x) * np.sqrt(np.pi * x / 2) - np.sin(x)).max()
    checks.append(_result("specfun.halfinteger_sine", err, 1e-12))

    worst = 0.0
    for nu in (0.0, 0.5, 2.0 / 3.0, 3.2, 11.0, 40.0):
        for k in (1, 2, 5, 12):
            z = specfun.bessel_zero(nu, k)
            slope = abs(specfun.bessel_j_derivative(nu, z))
            worst = max(worst, abs(specfun.bessel_j(nu, z)) / max(1.0, slope * z))
    checks.append(_result("specfun.zero_residuals", worst, 1e-12))

    err = max(abs(specfun.bessel_zero(0.5, k) - k * math.pi) for k in (1, 2, 3, 7))
    checks.append(_result("specfun.sine_zeros", err, 1e-12))

    spec = specfun.reference_spectrum(("ball", 2), 0.5, 3)
    err = abs(spec.values[0] - math.pi ** 2)
    err = max(err, abs(spec.values[1] - spec.values[2]))
    checks.append(_result("specfun.disk_reference", err, 1e-10))

    n200 = specfun.count_reference_below(("ball", 2), 0.0, 200.0)
    n800 = specfun.count_reference_below(("ball", 2), 0.0, 800.0)
    ratio = n800 / n200
    checks.append(
        CheckResult(
            "specfun.weyl_growth",
            3.4 <= ratio <= 4.6,
            f"counts {n200}/{n800}, ratio {ratio:.3f}",
        )
    )
    return checks


# ------------------------------------------------------------------- eiglin


def _inverse_iteration_oracle(A, B, count, tol=1e-12):
    """Smallest pencil eigenvalues by Rayleigh-shifted inverse iteration.

    Each eigenpair is deflated in the B-inner product; iterations stop on the
    pencil residual, not on eigenvalue stagnation.
    """
    n = A.shape[0]
    found = []
    vecs = []
    rng = np.random.default_rng(12345)
    scale = np.linalg.norm(A)
    for _ in range(count):
        v = rng.standard_normal(n)
        lam = 0.0
        for it in range(300):
            for u in vecs:
                v -= (u @ (B @ v)) * u
            # long zero-shift phase locks onto the smallest remaining
            # eigenvalue before the (locally convergent) Rayleigh shifts
            shift = 0.0 if it < 25 else lam
            try:
                w = np.linalg.solve(A - shift * B, B @ v)
            except np.linalg.LinAlgError:
                w = np.linalg.solve(A - (shift + 1e-11 * scale) * B, B @ v)
            for u in vecs:
                w -= (u @ (B @ w)) * u
            w /= math.sqrt(w @ (B @ w))
            lam = w @ (A @ w)
            v = w
            if it >= 25 and np.linalg.norm(A @ w - lam * (B @ w)) <= tol * scale:
                break
        found.append(lam)
        vecs.append(v)
    return np.sort(found)


def _eiglin_checks(rng):
    checks = []
    spec = eiglin.solve_gevp(np.diag([2.0, 6.0]), np.eye(2))
    err = abs(spec.values[0] - 2.0) + abs(spec.values[1] - 6.0)
    spec = eiglin.solve_gevp(np.array([[2.0]]), np.array([[4.0]]))
    err = max(err, abs(spec.values[0] - 0.5))
    checks.append(_result("eiglin.trivial", err, 1e-14))

    # well-conditioned random pencil: B = L L^T with dominant diagonal
    n = 30
    Lrand = 0.2 * np.tril(rng.standard_normal((n, n)), -1) + np.diag(rng.uniform(1.0, 2.0, n))
    B = Lrand @ Lrand.T
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = Q @ np.diag(rng.uniform(0.5, 50.0, n)) @ Q.T
    A = 0.5 * (A + A.T)
    spec = eiglin.solve_gevp(A, B, 4)
    oracle = _inverse_iteration_oracle(A, B, 4)
    err = np.abs(spec.values - oracle).max() / np.abs(oracle).max()
    checks.append(_result("eiglin.random_vs_inverse_iteration", err, 1e-10))

    Z = eiglin.nullspace(np.array([[1.0, 1.0]]))
    err = abs(abs(Z[0, 0]) - 1 / math.sqrt(2))
    C = rng.standard_normal((8, 20))
    Z = eiglin.nullspace(C)
    err = max(err, np.abs(C @ Z).max())
    err = max(err, np.abs(Z.T @ Z - np.eye(Z.shape[1])).max())
    checks.append(_result("eiglin.nullspace", err, 1e-12))

    # broken two-element discretization with a mortar tie equals the
    # conforming assembly (unit interval, homogeneous ends, h = 1/2)
    A2 = np.diag([2.0, 2.0])
    M2 = np.diag([1.0 / 6.0, 1.0 / 6.0])
    C2 = np.array([[1.0, -1.0]])
    spec = eiglin.reduce_constrained_gevp(A2, M2, C2, 1)
    lam_conf = eiglin.solve_gevp(np.array([[4.0]]), np.array([[1.0 / 3.0]])).values[0]
    err = abs(spec.values[0] - lam_conf)
    checks.append(_result("eiglin.mortar_toy_vs_conforming", err, 1e-12))
    return checks


# ------------------------------------------------------- ball & sector forms


def _closed_ball_matrices(method, n, c, d, K, kmin):
    b = ball.beta(n, c, d)
    om = ball.surface_area(d)
    if method == "I":
        A = ball.method1_stiffness_diag(b, K, om, d, k_start=kmin)
        diag, off1, off2 = ball.method1_mass_bands(b, K, om, k_start=kmin)
        B = np.diag(diag) + np.diag(off1, 1) + np.diag(off1, -1)
        B += np.diag(off2, 2) + np.diag(off2, -2)
    else:
        A = ball.method2_stiffness_diag(b, K, om, d, k_start=kmin)
        diag, off1 = ball.method2_mass_bands(b, K, om, k_start=kmin)
        B = np.diag(diag) + np.diag(off1, 1) + np.diag(off1, -1)
    return np.diag(A), B


def _closed_sector_matrices(method, n, c, gamma, K, kmin):
    mode = sector.assemble_sector(method, n, c, gamma, K, k_start=kmin)
    return mode.A.to_dense(), mode.B.to_dense()


def _ball_checks(rng):
    checks = []
    worst = 0.0
    cases = [
        ("I", 0, 0.4, 2), ("I", 1, 0.5, 2), ("I", 0, 2.0 / 3, 3), ("I", 2, 1.7, 3),
        ("II", 0, 0.4, 2), ("II", 1, 0.5, 2), ("II", 0, 2.0 / 3, 3), ("II", 2, 1.7, 3),
        ("I", 0, 3.0, 2), ("II", 0, 3.0, 2), ("II", 1, 0.0, 2), ("I", 1, 0.0, 2),
    ]
    for method, n, c, d in cases:
        for kmin in (0, 1):
            S, M = oracles.ball_oracle_matrices(method, n, c, d, 20, kmin)
            A, B = _closed_ball_matrices(method, n, c, d, 20, kmin)
            scale = max(np.abs(S).max(), np.abs(M).max())
            worst = max(worst, np.abs(S - A).max() / scale, np.abs(M - B).max() / scale)
    checks.append(_result("ball.closed_vs_quadrature", worst, 1e-12))

    spec = ball.solve_ball(ball.BallProblem(2, 0.5, 16, 3, "II"), 5)
    ref = specfun.reference_spectrum(("ball", 2), 0.5, 5)
    err = np.abs(spec.values / ref.values - 1.0).max()
    checks.append(_result("ball.methodII_vs_reference", err, 1e-11))
    return checks


def _sector_checks(rng):
    checks = []
    worst = 0.0
    for method in ("I", "II"):
        for (n, c, g) in [(1, 0.5, 0.5), (2, 2.0 / 3, 0.5), (1, 0.4, 2.0 / 3), (3, 3.0, 1.0)]:
            for kmin in (0, 1):
                S, M = oracles.sector_oracle_matrices(method, n, c, g, 20, kmin)
                A, B = _closed_sector_matrices(method, n, c, g, 20, kmin)
                scale = max(np.abs(S).max(), np.abs(M).max())
                worst = max(worst, np.abs(S - A).max() / scale, np.abs(M - B).max() / scale)
    checks.append(_result("sector.closed_vs_quadrature", worst, 1e-12))

    spec = sector.solve_sector(sector.SectorProblem(0.5, 0.5, 16, 3, "II"), 3)
    ref = specfun.reference_spectrum(("sector", 0.5), 0.5, 3)
    err = np.abs(spec.values / ref.values - 1.0).max()
    checks.append(_result("sector.methodII_vs_reference", err, 1e-10))
    return checks


# ------------------------------------------------------------------- mortar


def _mortar_checks(rng):
    checks = []
    h = 1e-6
    worst = 0.0
    for domain in ("square", "lshape"):
        for kappa in range(1, 5):
            m = mortar.GordonHallMap(kappa, domain, 0.3 if domain == "square" else 0.5)
            pts = rng.uniform(-0.98, 0.98, size=(50, 2))
            for xi, eta in pts:
                J, det = mortar.gh_jacobian(m, xi, eta)
                xp, yp = mortar.gh_map(m, xi + h, eta)
                xm, ym = mortar.gh_map(m, xi - h, eta)
                fd = np.array([(xp - xm) / (2 * h), (yp - ym) / (2 * h)])
                worst = max(worst, np.abs(fd - J[0]).max())
                xp, yp = mortar.gh_map(m, xi, eta + h)
                xm, ym = mortar.gh_map(m, xi, eta - h)
                fd = np.array([(xp - xm) / (2 * h), (yp - ym) / (2 * h)])
                worst = max(worst, np.abs(fd - J[1]).max())
                if abs(det) <= 0:
                    worst = math.inf
    checks.append(_result("mortar.jacobian_vs_fd", worst, 1e-6))

    m1 = mortar.GordonHallMap(1, "square", 0.3)
    x, y = mortar.gh_map(m1, 1.0, 0.37)
    err = abs(x - 1.0) + abs(y - 0.37)
    x, y = mortar.gh_map(m1, -1.0, 0.0)
    err = max(err, abs(x - 0.3) + abs(y))
    _, det = mortar.gh_jacobian(m1, 1.0, 0.0)
    err = max(err, abs(det - 0.35))
    checks.append(_result("mortar.map_anchor_points", err, 1e-13))

    # a discrete function with equal traces on the circle is constraint-free
    mesh = mortar.build_mesh("square", 0.3, 0.5, disk_k=4, disk_n=3,
                             quad_degrees=[(5, 5)] * 4)
    C = mortar.assemble_mortar_constraints(mesh)
    u = np.zeros(mesh.n_dofs)
    u[mesh.gid[mesh.disk_key((0, "one"), 0)]] = 1.0
    for kappa in range(1, 5):
        u[mesh.global_index((kappa, 1, 0))] = 1.0
        u[mesh.global_index((kappa, 1, 1))] = 1.0
    err = np.abs(C @ u).max() / np.linalg.norm(u)
    checks.append(_result("mortar.matched_trace_in_kernel", err, 1e-10))

    # small end-to-end solve against the exact Laplacian eigenvalue
    mesh = mortar.build_mesh("square", 0.3, 0.0, disk_k=8, disk_n=6,
                             quad_degrees=[(9, 10)] * 4)
    res = mortar.solve_msem(mesh, 1)
    err = abs(res.spectrum.values[0] - math.pi ** 2 / 2)
    checks.append(_result("mortar.small_square_laplacian", err, 1e-9))
    return checks


MODULE_SUITES = {
    "orthopoly": _orthopoly_checks,
    "specfun": _specfun_checks,
    "eiglin": _eiglin_checks,
    "ball": _ball_checks,
    "sector": _sector_checks,
    "mortar": _mortar_checks,
}


def run_suite(module, seed=0):
    """Run one module's checks with a seeded generator."""
    rng = np.random.default_rng(seed)
    return MODULE_SUITES[module](rng)


def run_all(seed=0, modules=None):
    """Run the requested suites (all by default); returns a flat check list."""
    names = list(MODULE_SUITES) if modules is None else list(modules)
    results = []
    for name in names:
        if name not in MODULE_SUITES:
            raise ValueError(f"unknown module {name!r}; choose from {sorted(MODULE_SUITES)}")
        results.extend(run_suite(name, seed))
    return results
