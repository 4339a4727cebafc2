"""Independent quadrature oracles for the closed-form element matrices.

These assemble the radial stiffness/mass integrals directly from the basis
definitions, splitting each integrand into polynomial factors against
fractional endpoint weights r^p so that a Gauss-Jacobi rule of modest size
integrates every term exactly.  They share only the polynomial evaluator and
quadrature generator with the production code, never its closed-form tables.
"""

from __future__ import annotations

import math

import numpy as np

from .orthopoly import JacobiParam, gauss_rule, jacobi_derivative_table, jacobi_table

__all__ = [
    "gauss_jacobi_01",
    "radial_oracle_method1",
    "radial_oracle_method2",
    "ball_oracle_matrices",
    "sector_oracle_matrices",
]


def gauss_jacobi_01(m, p):
    """Nodes/weights integrating f(r) r^p dr over (0,1) exactly for poly f."""
    rule = gauss_rule(("jacobi", 0.0, p), m)
    r = 0.5 * (rule.nodes + 1.0)
    w = rule.weights * 0.5 ** (p + 1.0)
    return r, w


def _norm1(k, b):
    return 1.0 if k == 0 else (2 * k + 2 * b) / (k + 2 * b)


def _norm2(k, b):
    return 1.0 if k == 0 else (2 * k + b) / (k + b)


def radial_oracle_method1(b, e, coef, omega, K, kmin=1):
    """Quadrature stiffness/mass of the normalized J^{-1,2b}(2r-1) r^e basis.

    e is the power of the explicit radial factor and coef the zeroth-order
    coefficient of the reduced radial form; the three integrand groups carry
    weights r^{2b+1}, r^{2b}, r^{2b-1}.
    """
    ks = list(range(kmin, K + 1))
    norms = np.array([_norm1(k, b) for k in ks])[:, None]
    p = JacobiParam(-1.0, 2.0 * b)
    m = K + 8
    S = np.zeros((len(ks), len(ks)))
    M = np.zeros_like(S)

    r, w = gauss_jacobi_01(m, 2 * b + 1)
    vals = norms * jacobi_table(p, K, 2 * r - 1)[kmin:]
    ders = norms * 2.0 * jacobi_derivative_table(p, K, 2 * r - 1)[kmin:]
    S += (ders * w) @ ders.T
    M += (vals * w) @ vals.T

    if e != 0.0:
        r, w = gauss_jacobi_01(m, 2 * b)
        vals = norms * jacobi_table(p, K, 2 * r - 1)[kmin:]
        ders = norms * 2.0 * jacobi_derivative_table(p, K, 2 * r - 1)[kmin:]
        S += e * ((ders * w) @ vals.T + (vals * w) @ ders.T)

    if e * e + coef != 0.0:
        r, w = gauss_jacobi_01(m, 2 * b - 1)
        vals = norms * jacobi_table(p, K, 2 * r - 1)[kmin:]
        S += (e * e + coef) * ((vals * w) @ vals.T)
    return omega * 0.5 * (S + S.T), omega * 0.5 * (M + M.T)


def radial_oracle_method2(b, e, coef, omega, K, kmin=1):
    """Quadrature stiffness/mass of the normalized J^{-1,b}(2r^2-1) r^e basis.

    Substituting rho = r^2 makes every integrand a polynomial against
    rho^b or rho^{b-1}.
    """
    ks = list(range(kmin, K + 1))
    norms = np.array([_norm2(k, b) for k in ks])[:, None]
    p = JacobiParam(-1.0, b)
    m = 2 * K + 8
    S = np.zeros((len(ks), len(ks)))
    M = np.zeros_like(S)

    rho, w = gauss_jacobi_01(m, b)
    vals = norms * jacobi_table(p, K, 2 * rho - 1)[kmin:]
    ders = norms * jacobi_derivative_table(p, K, 2 * rho - 1)[kmin:]
    # d/dr of J(2r^2-1) = 4 r J'(zeta); the r factors fold into rho weights
    S += 0.5 * 16.0 * ((ders * (w * rho)) @ ders.T)
    S += 0.5 * 4.0 * e * ((ders * w) @ vals.T + (vals * w) @ ders.T)
    M += 0.5 * ((vals * w) @ vals.T)

    if e * e + coef != 0.0:
        rho, w = gauss_jacobi_01(m, b - 1.0)
        vals = norms * jacobi_table(p, K, 2 * rho - 1)[kmin:]
        S += 0.5 * (e * e + coef) * ((vals * w) @ vals.T)
    return omega * 0.5 * (S + S.T), omega * 0.5 * (M + M.T)


def ball_oracle_matrices(method, n, c, d, K, kmin=1):
    """Oracle stiffness/mass for one unit-ball mode of method I or II."""
    b = math.sqrt(c * c + (n + d / 2 - 1) ** 2)
    e = b + 1 - d / 2
    coef = c * c + n * (n + d - 2)
    omega = 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)
    fn = radial_oracle_method1 if method == "I" else radial_oracle_method2
    return fn(b, e, coef, omega, K, kmin)


def sector_oracle_matrices(method, n, c, gamma, K, kmin=1):
    """Oracle stiffness/mass for one sector mode of method I or II."""
    b = math.sqrt(c * c + gamma * gamma * n * n)
    coef = b * b
    omega = math.pi / (2 * gamma)
    fn = radial_oracle_method1 if method == "I" else radial_oracle_method2
    return fn(b, b, coef, omega, K, kmin)
