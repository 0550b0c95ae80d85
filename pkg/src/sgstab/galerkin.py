"""Stochastic Galerkin projection and the stability-preserving transform.

The projection replaces x' = A(p) x by the mn x mn coefficient system built
from the minors E[A Phi_i Phi_j]. Plain projection can destroy asymptotic
stability even when every A(p) is stable; the stabilized variants first
apply, node by node, the similarity B = L^T A L^{-T} with M = L L^T solving
A^T M + M A + Q = 0, whose symmetric part is negative definite. Summation
over quadrature nodes is in fixed node order, so assembly is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericsError, StabilizationError
from .matops import cholesky, lu_solve, lyapunov_solve, spectral_abscissa
from .model import ParametricLinearSystem, ParametricNonlinearSystem
from .orthopoly import OrthonormalBasis, QuadratureRule, basis_matrix

__all__ = [
    "GalerkinMatrix",
    "StabilizedPoint",
    "assemble_linear",
    "stabilize_point",
    "assemble_stabilized_linear",
    "stabilized_system",
    "nonlinear_galerkin_rhs",
    "nonlinear_galerkin_jacobian",
    "stabilized_nonlinear_rhs",
    "stabilized_nonlinear_jacobian",
    "reconstruct",
]


@dataclass(frozen=True, eq=False)
class GalerkinMatrix:
    """Projected system matrix with m x m blocks of size n x n."""

    blocks: int
    block_dim: int
    matrix: np.ndarray

    def minor(self, i: int, j: int) -> np.ndarray:
        """Block (i, j), 1-based."""
        if not (1 <= i <= self.blocks and 1 <= j <= self.blocks):
            raise ValueError(f"minor index ({i}, {j}) out of range 1..{self.blocks}")
        n = self.block_dim
        return self.matrix[(i - 1) * n : i * n, (j - 1) * n : j * n]


@dataclass(frozen=True, eq=False)
class StabilizedPoint:
    """Per-parameter data of the stabilizing transform.

    lyapunov_solution M solves A^T M + M A + Q = 0, cholesky_factor L is its
    lower-triangular factor, inv_transpose_factor is L^{-T}, and transformed
    is B = L^T A L^{-T}, similar to A with negative definite symmetric part.
    """

    parameter: Optional[float]
    lyapunov_solution: np.ndarray
    cholesky_factor: np.ndarray
    inv_transpose_factor: np.ndarray
    transformed: np.ndarray


def _check_rule(basis: OrthonormalBasis, rule: QuadratureRule) -> None:
    if rule.count < basis.size:
        raise ValueError(
            f"quadrature rule has {rule.count} nodes; projection onto "
            f"{basis.size} basis functions needs at least {basis.size}"
        )


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def assemble_linear(
    system: ParametricLinearSystem, basis: OrthonormalBasis, rule: QuadratureRule
) -> GalerkinMatrix:
    """Projection of A(p): block (i, j) is sum_k w_k A(p_k) Phi_i(p_k) Phi_j(p_k)."""
    _check_rule(basis, rule)
    table = basis_matrix(basis, rule.nodes)
    m, n = basis.size, system.dim
    out = np.zeros((m * n, m * n))
    for k in range(rule.count):
        phi = table[:, k]
        out += np.kron(rule.weights[k] * np.outer(phi, phi), system.matrix(rule.nodes[k]))
    return GalerkinMatrix(m, n, _freeze(out))


def stabilize_point(a, q, parameter: Optional[float] = None) -> StabilizedPoint:
    """Stabilizing transform of a single stable matrix.

    Solves the Lyapunov equation for M, factors M = L L^T, and forms
    B = L^T A L^{-T}. B is similar to A, and B + B^T = -L^{-1} Q L^{-T} is
    negative definite whenever Q is positive definite.
    """
    a = np.asarray(a, dtype=float)
    q = np.asarray(q, dtype=float)
    where = "" if parameter is None else f" at p={parameter:.17g}"
    abscissa = spectral_abscissa(a)
    if abscissa >= 0.0:
        raise StabilizationError(
            f"matrix{where} is not stable (spectral abscissa {abscissa:.3e}); "
            "the Lyapunov equation has no positive definite solution",
            parameter=parameter,
        )
    try:
        m_sol = lyapunov_solve(a, q)
        factor = cholesky(m_sol)
    except NumericsError as exc:
        raise StabilizationError(f"stabilization failed{where}: {exc}", parameter=parameter) from exc
    inv_t = lu_solve(factor.T, np.eye(a.shape[0]))
    transformed = factor.T @ a @ inv_t
    return StabilizedPoint(parameter, m_sol, factor, inv_t, transformed)


def assemble_stabilized_linear(
    system: ParametricLinearSystem,
    q,
    basis: OrthonormalBasis,
    rule: QuadratureRule,
) -> GalerkinMatrix:
    """Projection of the transformed family B(p), stable by construction."""
    _check_rule(basis, rule)
    table = basis_matrix(basis, rule.nodes)
    m, n = basis.size, system.dim
    out = np.zeros((m * n, m * n))
    for k in range(rule.count):
        p = rule.nodes[k]
        try:
            point = stabilize_point(system.matrix(p), q, parameter=p)
        except NumericsError as exc:
            raise StabilizationError(
                f"assembly aborted at quadrature node {k} (p={p:.17g}): {exc}",
                parameter=p,
            ) from exc
        phi = table[:, k]
        out += np.kron(rule.weights[k] * np.outer(phi, phi), point.transformed)
    return GalerkinMatrix(m, n, _freeze(out))


def stabilized_system(
    shifted: ParametricNonlinearSystem, q, rule: QuadratureRule
) -> ParametricNonlinearSystem:
    """Stability-preserving reformulation y' = L(p)^T f(L(p)^{-T} y, p).

    `shifted` must have the zero equilibrium (use model.shift_system first).
    The Lyapunov/Cholesky factors are computed once per quadrature node and
    cached; the returned evaluators are defined at those nodes only.
    """
    if shifted.equilibrium is None:
        raise ValueError("stabilized_system requires an equilibrium map")
    factors: dict[float, StabilizedPoint] = {}
    for k in range(rule.count):
        p = float(rule.nodes[k])
        eq = np.asarray(shifted.equilibrium(p), dtype=float)
        if np.abs(eq).max() > 1e-12:
            raise ValueError(
                "stabilized_system requires the shifted form with equilibrium 0; "
                f"got |x*| = {np.abs(eq).max():.3e} at p={p:.17g}"
            )
        jac = shifted.jacobian(np.zeros(shifted.dim), p)
        try:
            factors[p] = stabilize_point(jac, q, parameter=p)
        except NumericsError as exc:
            raise StabilizationError(
                f"stabilization failed at quadrature node {k} (p={p:.17g}): {exc}",
                parameter=p,
            ) from exc

    def lookup(p: float) -> StabilizedPoint:
        try:
            return factors[float(p)]
        except KeyError:
            raise ValueError(
                f"stabilized system is defined at its quadrature nodes only, got p={p}"
            ) from None

    def rhs(y: np.ndarray, p: float) -> np.ndarray:
        point = lookup(p)
        return point.cholesky_factor.T @ shifted.rhs(point.inv_transpose_factor @ y, p)

    def jacobian(y: np.ndarray, p: float) -> np.ndarray:
        point = lookup(p)
        inner = shifted.jacobian(point.inv_transpose_factor @ y, p)
        return point.cholesky_factor.T @ inner @ point.inv_transpose_factor

    def equilibrium(p: float) -> np.ndarray:
        return np.zeros(shifted.dim)

    return ParametricNonlinearSystem(shifted.dim, rhs, jacobian, equilibrium)


def _coefficient_blocks(basis: OrthonormalBasis, dim: int, coeffs) -> np.ndarray:
    v = np.asarray(coeffs, dtype=float)
    expected = basis.size * dim
    if v.shape != (expected,):
        raise ValueError(f"coefficient vector has shape {v.shape}, expected ({expected},)")
    return v.reshape(basis.size, dim)


def nonlinear_galerkin_rhs(
    system: ParametricNonlinearSystem,
    basis: OrthonormalBasis,
    rule: QuadratureRule,
    coeffs,
) -> np.ndarray:
    """Projected right-hand side: block i is E[f(sum_j v_j Phi_j, .) Phi_i]."""
    _check_rule(basis, rule)
    blocks = _coefficient_blocks(basis, system.dim, coeffs)
    table = basis_matrix(basis, rule.nodes)
    out = np.zeros((basis.size, system.dim))
    for k in range(rule.count):
        phi = table[:, k]
        x = blocks.T @ phi
        out += rule.weights[k] * np.outer(phi, system.rhs(x, rule.nodes[k]))
    return out.reshape(-1)


def nonlinear_galerkin_jacobian(
    system: ParametricNonlinearSystem,
    basis: OrthonormalBasis,
    rule: QuadratureRule,
    coeffs,
) -> np.ndarray:
    """Jacobian of the projected right-hand side at the given coefficients."""
    _check_rule(basis, rule)
    blocks = _coefficient_blocks(basis, system.dim, coeffs)
    table = basis_matrix(basis, rule.nodes)
    mn = basis.size * system.dim
    out = np.zeros((mn, mn))
    for k in range(rule.count):
        phi = table[:, k]
        x = blocks.T @ phi
        out += np.kron(
            rule.weights[k] * np.outer(phi, phi), system.jacobian(x, rule.nodes[k])
        )
    return out


def stabilized_nonlinear_rhs(
    shifted: ParametricNonlinearSystem,
    q,
    basis: OrthonormalBasis,
    rule: QuadratureRule,
    coeffs,
) -> np.ndarray:
    """Projected right-hand side of the stabilized reformulation.

    One-shot convenience; for repeated evaluation (time integration) build
    stabilized_system once and reuse it with nonlinear_galerkin_rhs.
    """
    return nonlinear_galerkin_rhs(stabilized_system(shifted, q, rule), basis, rule, coeffs)


def stabilized_nonlinear_jacobian(
    shifted: ParametricNonlinearSystem,
    q,
    basis: OrthonormalBasis,
    rule: QuadratureRule,
    coeffs,
) -> np.ndarray:
    """Jacobian counterpart of stabilized_nonlinear_rhs."""
    return nonlinear_galerkin_jacobian(stabilized_system(shifted, q, rule), basis, rule, coeffs)


def reconstruct(coeffs, basis: OrthonormalBasis, p: float) -> np.ndarray:
    """Evaluate sum_j v_j Phi_j(p) for a coefficient vector of m blocks."""
    v = np.asarray(coeffs, dtype=float)
    if v.ndim != 1 or v.size % basis.size != 0:
        raise ValueError(
            f"coefficient vector of size {v.size} does not split into "
            f"{basis.size} equal blocks"
        )
    n = v.size // basis.size
    phi = basis_matrix(basis, np.array([float(p)]))[:, 0]
    return v.reshape(basis.size, n).T @ phi
