"""Damped Newton iteration and the implicit trapezoidal rule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import IntegrationError, SingularMatrixError
from .matops import lu_solve

__all__ = ["NewtonReport", "Trajectory", "newton_solve", "trapezoidal_integrate"]

# Maximum number of step halvings in the Newton line search.
MAX_HALVINGS = 20


@dataclass(frozen=True, eq=False)
class NewtonReport:
    """Outcome of a Newton run; `converged` means residual < tol in max norm."""

    root: np.ndarray
    iterations: int
    residual: float
    converged: bool


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniform-step time grid and one state vector per grid point."""

    times: np.ndarray
    states: np.ndarray
    step: float


def newton_solve(
    func: Callable[[np.ndarray], np.ndarray],
    jac: Callable[[np.ndarray], np.ndarray],
    x0,
    tol: float = 1e-10,
    max_iter: int = 50,
) -> NewtonReport:
    """Newton iteration with step-halving line search.

    Each iteration solves J(x) dx = -F(x) and halves the step up to
    MAX_HALVINGS times until the residual max norm decreases (taking the
    smallest step if it never does). Running out of iterations yields a
    non-converged report; a singular Jacobian raises SingularMatrixError.
    """
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    x = np.asarray(x0, dtype=float).copy()
    fx = np.asarray(func(x), dtype=float)
    residual = float(np.abs(fx).max())
    if residual < tol:
        return NewtonReport(x, 0, residual, True)
    for iteration in range(1, max_iter + 1):
        step = lu_solve(jac(x), -fx)
        scale = 1.0
        for _ in range(MAX_HALVINGS):
            candidate = x + scale * step
            f_candidate = np.asarray(func(candidate), dtype=float)
            r_candidate = float(np.abs(f_candidate).max())
            if r_candidate < residual:
                break
            scale *= 0.5
        x, fx, residual = candidate, f_candidate, r_candidate
        if residual < tol:
            return NewtonReport(x, iteration, residual, True)
    return NewtonReport(x, max_iter, residual, False)


def trapezoidal_integrate(
    rhs: Callable[[np.ndarray], np.ndarray],
    jac: Callable[[np.ndarray], np.ndarray],
    x0,
    t_end: float,
    h: float,
    newton_tol: float = 1e-10,
    newton_max_iter: int = 50,
) -> Trajectory:
    """Integrate x' = rhs(x) from 0 to t_end with the implicit trapezoidal rule.

    Each step solves x_{k+1} = x_k + (h/2)(rhs(x_k) + rhs(x_{k+1})) by Newton
    iteration from an explicit Euler predictor. t_end must be an integer
    multiple of h. Failure of an implicit step raises IntegrationError with
    the step index and time.
    """
    if h <= 0.0:
        raise ValueError(f"step size must be positive, got {h}")
    if t_end < h:
        raise ValueError(f"t_end={t_end} is shorter than one step h={h}")
    steps = int(round(t_end / h))
    if abs(steps * h - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError(f"t_end={t_end} is not an integer multiple of h={h}")

    x = np.asarray(x0, dtype=float).copy()
    dim = x.size
    times = np.arange(steps + 1) * h
    states = np.empty((steps + 1, dim))
    states[0] = x
    identity = np.eye(dim)
    half_h = 0.5 * h
    for k in range(steps):
        fk = np.asarray(rhs(x), dtype=float)

        def implicit_residual(u, x=x, fk=fk):
            return u - x - half_h * (fk + np.asarray(rhs(u), dtype=float))

        def implicit_jacobian(u):
            return identity - half_h * np.asarray(jac(u), dtype=float)

        try:
            report = newton_solve(
                implicit_residual,
                implicit_jacobian,
                x + h * fk,
                tol=newton_tol,
                max_iter=newton_max_iter,
            )
        except SingularMatrixError as exc:
            raise IntegrationError(
                f"singular implicit-step Jacobian at step {k + 1} (t={times[k + 1]:.6g})",
                step=k + 1,
                time=float(times[k + 1]),
            ) from exc
        if not report.converged:
            raise IntegrationError(
                f"Newton did not converge at step {k + 1} (t={times[k + 1]:.6g}); "
                f"residual {report.residual:.3e}",
                step=k + 1,
                time=float(times[k + 1]),
            )
        x = report.root
        states[k + 1] = x
    times.flags.writeable = False
    states.flags.writeable = False
    return Trajectory(times=times, states=states, step=float(h))
