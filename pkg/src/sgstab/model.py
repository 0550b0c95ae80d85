"""Parameter-dependent dynamical systems and the built-in test problems.

Systems are plain evaluator bundles: the projection machinery only ever
needs pointwise values at quadrature nodes, so no symbolic representation
is kept. The parameter domain is fixed to [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ParametricLinearSystem",
    "ParametricNonlinearSystem",
    "paper_linear_system",
    "paper_quadratic_system",
    "lift_linear",
    "shift_system",
    "equilibrium_jacobian",
]


@dataclass(frozen=True)
class ParametricLinearSystem:
    """x' = A(p) x with a stable matrix family A on the parameter domain."""

    dim: int
    matrix: Callable[[float], np.ndarray]


@dataclass(frozen=True)
class ParametricNonlinearSystem:
    """x' = f(x, p) with an analytic Jacobian and an optional equilibrium map."""

    dim: int
    rhs: Callable[[np.ndarray, float], np.ndarray]
    jacobian: Callable[[np.ndarray, float], np.ndarray]
    equilibrium: Optional[Callable[[float], np.ndarray]] = None


# Built-in 3x3 family: entries are quadratics in p, stored as integer
# coefficient matrices over a common denominator of 100.
_LIN_P2 = np.array([[128.0, 295.0, 165.0], [-82.0, -266.0, -147.0], [70.0, 43.0, 15.0]])
_LIN_P1 = np.array([[-72.0, -199.0, -234.0], [-59.0, 144.0, -210.0], [296.0, 96.0, 146.0]])
_LIN_P0 = np.array([[-32.0, 4.0, 46.0], [270.0, -73.0, 286.0], [-80.0, 8.0, -251.0]])


def paper_linear_system() -> ParametricLinearSystem:
    """The built-in 3x3 linear family, stable for every p in [-1, 1]."""

    def matrix(p: float) -> np.ndarray:
        return (_LIN_P2 * (p * p) + _LIN_P1 * p + _LIN_P0) / 100.0

    return ParametricLinearSystem(dim=3, matrix=matrix)


def paper_quadratic_system() -> ParametricNonlinearSystem:
    """The built-in planar quadratic system with equilibrium (sin p, cos p)."""

    def rhs(x: np.ndarray, p: float) -> np.ndarray:
        sp, cp = math.sin(p), math.cos(p)
        x1, x2 = x[0], x[1]
        c11 = -35.0 * p - 2.0 * sp - 13.0 * p * p - 97.0
        c12 = 4.0 * cp - 77.0 * p - 33.0 * p * p + 23.0
        k1 = (
            sp * sp
            - 2.0 * cp * cp
            + cp * (33.0 * p * p + 77.0 * p - 23.0)
            + sp * (13.0 * p * p + 35.0 * p + 97.0)
        )
        c21 = 85.0 * p - 8.0 * sp + 51.0 * p * p - 54.0
        c22 = 2.0 * cp - 0.1 * p + 67.0 * p * p - 24.0
        k2 = (
            4.0 * sp * sp
            - cp * cp
            + cp * (-67.0 * p * p + 0.1 * p + 24.0)
            - sp * (51.0 * p * p + 85.0 * p - 54.0)
        )
        return np.array(
            [
                x1 * x1 + c11 * x1 - 2.0 * x2 * x2 + c12 * x2 + k1,
                4.0 * x1 * x1 + c21 * x1 - x2 * x2 + c22 * x2 + k2,
            ]
        )

    def jacobian(x: np.ndarray, p: float) -> np.ndarray:
        sp, cp = math.sin(p), math.cos(p)
        x1, x2 = x[0], x[1]
        return np.array(
            [
                [
                    2.0 * x1 + (-35.0 * p - 2.0 * sp - 13.0 * p * p - 97.0),
                    -4.0 * x2 + (4.0 * cp - 77.0 * p - 33.0 * p * p + 23.0),
                ],
                [
                    8.0 * x1 + (85.0 * p - 8.0 * sp + 51.0 * p * p - 54.0),
                    -2.0 * x2 + (2.0 * cp - 0.1 * p + 67.0 * p * p - 24.0),
                ],
            ]
        )

    def equilibrium(p: float) -> np.ndarray:
        return np.array([math.sin(p), math.cos(p)])

    return ParametricNonlinearSystem(dim=2, rhs=rhs, jacobian=jacobian, equilibrium=equilibrium)


def lift_linear(system: ParametricLinearSystem) -> ParametricNonlinearSystem:
    """View a linear system as a nonlinear one (f = A(p) x, equilibrium 0)."""

    def rhs(x: np.ndarray, p: float) -> np.ndarray:
        return system.matrix(p) @ x

    def jacobian(x: np.ndarray, p: float) -> np.ndarray:
        return system.matrix(p)

    def equilibrium(p: float) -> np.ndarray:
        return np.zeros(system.dim)

    return ParametricNonlinearSystem(system.dim, rhs, jacobian, equilibrium)


def shift_system(system: ParametricNonlinearSystem) -> ParametricNonlinearSystem:
    """Recenter on the equilibrium: the result has f(0, p) = 0 for every p."""
    if system.equilibrium is None:
        raise ValueError("shift_system requires a system with an equilibrium map")
    base_rhs, base_jac, eq = system.rhs, system.jacobian, system.equilibrium

    def rhs(x: np.ndarray, p: float) -> np.ndarray:
        return base_rhs(x + eq(p), p)

    def jacobian(x: np.ndarray, p: float) -> np.ndarray:
        return base_jac(x + eq(p), p)

    def equilibrium(p: float) -> np.ndarray:
        return np.zeros(system.dim)

    return ParametricNonlinearSystem(system.dim, rhs, jacobian, equilibrium)


def equilibrium_jacobian(system: ParametricNonlinearSystem, p: float) -> np.ndarray:
    """Jacobian of the right-hand side at the equilibrium for parameter p."""
    if system.equilibrium is None:
        raise ValueError("equilibrium_jacobian requires a system with an equilibrium map")
    return system.jacobian(system.equilibrium(p), p)
