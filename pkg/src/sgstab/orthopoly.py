"""Orthonormal polynomial bases and Gauss quadrature on [-1, 1].

Supports the uniform density and the beta family
rho(p) = c (1-p)^alpha (1+p)^beta, both normalized to unit mass. Basis
functions are indexed 1..m (Phi_1 is the constant 1), built from the monic
three-term recurrence of the matching Legendre/Jacobi family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EigenConvergenceError

# Sweep budget per eigenvalue in the tridiagonal QL iteration.
QL_MAX_SWEEPS = 30

__all__ = [
    "Density",
    "uniform_density",
    "beta_density",
    "OrthonormalBasis",
    "QuadratureRule",
    "basis_new",
    "evaluate_basis",
    "basis_matrix",
    "quadrature_new",
    "inner_product",
    "project",
]


@dataclass(frozen=True)
class Density:
    """Probability density on [-1, 1]: uniform, or beta with exponents."""

    kind: str
    alpha: float = 0.0
    beta: float = 0.0

    @property
    def normalization(self) -> float:
        """Constant c making the density integrate to one."""
        if self.kind == "uniform":
            return 0.5
        # 1 / (2^(alpha+beta+1) * B(alpha+1, beta+1)) via the Beta identity.
        log_b = (
            math.lgamma(self.alpha + 1.0)
            + math.lgamma(self.beta + 1.0)
            - math.lgamma(self.alpha + self.beta + 2.0)
        )
        return math.exp(-(self.alpha + self.beta + 1.0) * math.log(2.0) - log_b)

    def pdf(self, p: float) -> float:
        if self.kind == "uniform":
            return 0.5
        return self.normalization * (1.0 - p) ** self.alpha * (1.0 + p) ** self.beta


def uniform_density() -> Density:
    return Density("uniform")


def beta_density(alpha: float, beta: float) -> Density:
    if alpha <= -1.0 or beta <= -1.0:
        raise ValueError(
            f"beta density requires alpha > -1 and beta > -1, got ({alpha}, {beta})"
        )
    return Density("beta", float(alpha), float(beta))


def recurrence_coefficients(density: Density, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Monic three-term recurrence coefficients (a_k, b_k), k = 0..count-1.

    pi_{k+1}(p) = (p - a_k) pi_k(p) - b_k pi_{k-1}(p), with b_0 = 1 because
    the density has unit mass. Uniform is the (0, 0) member of the Jacobi
    family; the closed forms below cover both.
    """
    if count < 1:
        raise ValueError("need at least one coefficient pair")
    alpha = density.alpha if density.kind == "beta" else 0.0
    beta = density.beta if density.kind == "beta" else 0.0
    ab = alpha + beta
    a = np.zeros(count)
    b = np.zeros(count)
    a[0] = (beta - alpha) / (ab + 2.0)
    b[0] = 1.0
    if count > 1:
        b[1] = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((ab + 2.0) ** 2 * (ab + 3.0))
    for k in range(1, count):
        two_k = 2.0 * k + ab
        a[k] = (beta**2 - alpha**2) / (two_k * (two_k + 2.0))
        if k >= 2:
            b[k] = (
                4.0 * k * (k + alpha) * (k + beta) * (k + ab)
                / (two_k**2 * (two_k + 1.0) * (two_k - 1.0))
            )
    return a, b


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal polynomials Phi_1..Phi_m, deg(Phi_i) = i - 1.

    rec_a/rec_b are the monic recurrence coefficients; norms[k] is the
    weighted L2 norm of the monic polynomial of degree k, converting monic
    to orthonormal.
    """

    density: Density
    size: int
    rec_a: np.ndarray = field(repr=False)
    rec_b: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        return self.size - 1


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss rule integrating against the density; weights sum to one."""

    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return self.nodes.size


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def basis_new(density: Density, m: int) -> OrthonormalBasis:
    """Orthonormal basis of size m (maximal degree m - 1) for the density."""
    if m < 1:
        raise ValueError(f"basis size must be positive, got {m}")
    a, b = recurrence_coefficients(density, m)
    norms = np.sqrt(np.cumprod(b))
    return OrthonormalBasis(density, m, _freeze(a), _freeze(b), _freeze(norms))


def evaluate_basis(basis: OrthonormalBasis, i: int, p):
    """Phi_i at p (scalar or array), via the normalized recurrence."""
    if not 1 <= i <= basis.size:
        raise ValueError(f"basis index {i} out of range 1..{basis.size}")
    p = np.asarray(p, dtype=float)
    prev = np.zeros_like(p)
    cur = np.ones_like(p)
    sqrt_b = np.sqrt(basis.rec_b)
    for k in range(i - 1):
        prev, cur = cur, ((p - basis.rec_a[k]) * cur - sqrt_b[k] * prev) / sqrt_b[k + 1]
    return cur if cur.ndim else float(cur)


def basis_matrix(basis: OrthonormalBasis, points) -> np.ndarray:
    """Table T with T[i-1, k] = Phi_i(points[k]), shape (m, len(points))."""
    points = np.asarray(points, dtype=float)
    m = basis.size
    table = np.empty((m, points.size))
    table[0] = 1.0
    sqrt_b = np.sqrt(basis.rec_b)
    for k in range(m - 1):
        below = table[k - 1] if k >= 1 else 0.0
        table[k + 1] = ((points - basis.rec_a[k]) * table[k] - sqrt_b[k] * below) / sqrt_b[k + 1]
    return table


def _tridiagonal_eigh_first_row(d: np.ndarray, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Implicit-shift QL iteration for a symmetric tridiagonal matrix.

    Returns the eigenvalues and the first components of the orthonormal
    eigenvectors (the only row Gauss weights need). `d` is the diagonal,
    `e` the subdiagonal (length len(d) - 1).
    """
    n = d.size
    d = d.astype(float).copy()
    ee = np.zeros(n)
    ee[: n - 1] = e
    z = np.zeros(n)
    z[0] = 1.0
    eps = float(np.finfo(float).eps)
    for l in range(n):
        iters = 0
        while True:
            for m in range(l, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= eps * dd:
                    break
            else:
                m = n - 1
            if m == l:
                break
            if iters >= QL_MAX_SWEEPS:
                raise EigenConvergenceError(
                    f"tridiagonal QL failed to deflate index {l} after {iters} "
                    f"sweeps (block {l}..{m})",
                    block_size=m - l + 1,
                    sweeps=iters,
                )
            iters += 1
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return d, z


def quadrature_new(density: Density, count: int) -> QuadratureRule:
    """Gauss rule with `count` nodes, exact to polynomial degree 2*count - 1.

    Nodes are the eigenvalues of the symmetric tridiagonal matrix built from
    the recurrence coefficients; weights are the squared first components of
    its eigenvectors (unit total mass, so no extra scaling).
    """
    if count < 1:
        raise ValueError(f"node count must be positive, got {count}")
    a, b = recurrence_coefficients(density, count)
    nodes, first_row = _tridiagonal_eigh_first_row(a, np.sqrt(b[1:]))
    weights = first_row**2
    order = np.argsort(nodes)
    return QuadratureRule(_freeze(nodes[order]), _freeze(weights[order]))


def inner_product(f: Callable[[float], float], g: Callable[[float], float], rule: QuadratureRule) -> float:
    """Density-weighted inner product of two scalar functions on [-1, 1]."""
    values = np.array([f(p) * g(p) for p in rule.nodes], dtype=float)
    return float(rule.weights @ values)


def project(f, basis: OrthonormalBasis, rule: QuadratureRule) -> np.ndarray:
    """Coefficient matrix of f against the basis; row i-1 holds E[f Phi_i].

    f maps a parameter to a scalar or a length-n vector; the result has
    shape (m, n). The quadrature rule must be accurate enough for the
    integrands at hand, which is the caller's responsibility.
    """
    table = basis_matrix(basis, rule.nodes)
    samples = np.array([np.atleast_1d(np.asarray(f(p), dtype=float)) for p in rule.nodes])
    return table @ (rule.weights[:, None] * samples)
