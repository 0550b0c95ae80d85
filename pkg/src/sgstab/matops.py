"""Dense linear-algebra kernels for small real matrices.

Everything here operates on plain two-dimensional numpy arrays. The kernels
are written for the matrix sizes this library actually meets (a few up to a
few dozen rows), favouring explicit pivot/convergence diagnostics over raw
speed.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    EigenConvergenceError,
    LyapunovSolveError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

__all__ = [
    "lu_solve",
    "cholesky",
    "eigenvalues",
    "spectral_abscissa",
    "symmetric_part",
    "lyapunov_solve",
]

# Relative pivot threshold below which LU elimination reports singularity.
PIVOT_TOL = 1e-14
# Relative asymmetry tolerated by the Cholesky kernel.
SYMMETRY_TOL = 1e-12
# Total QR sweep budget for the eigenvalue iteration, per matrix dimension.
QR_SWEEPS_PER_DIM = 30

_EPS = float(np.finfo(float).eps)


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def lu_solve(a, b) -> np.ndarray:
    """Solve a x = b by Gaussian elimination with partial pivoting.

    `b` may be a vector or a matrix of right-hand sides; the result has the
    same shape. Raises SingularMatrixError when a pivot falls below
    PIVOT_TOL relative to the largest entry of `a`.
    """
    a = _as_square(a).copy()
    b = np.asarray(b, dtype=float)
    vector_input = b.ndim == 1
    rhs = b.reshape(-1, 1).copy() if vector_input else b.copy()
    n = a.shape[0]
    if rhs.shape[0] != n:
        raise ValueError(f"right-hand side has {rhs.shape[0]} rows, expected {n}")

    scale = max(1.0, float(np.abs(a).max()))
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) <= PIVOT_TOL * scale:
            raise SingularMatrixError(
                f"pivot {a[piv, k]:.3e} at column {k} below threshold "
                f"{PIVOT_TOL * scale:.3e}",
                pivot_index=k,
            )
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            rhs[[k, piv]] = rhs[[piv, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k + 1 :] -= np.outer(factors, a[k, k + 1 :])
        rhs[k + 1 :] -= np.outer(factors, rhs[k])

    x = np.empty_like(rhs)
    for k in range(n - 1, -1, -1):
        x[k] = (rhs[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x[:, 0] if vector_input else x


def cholesky(m) -> np.ndarray:
    """Lower-triangular Cholesky factor L of a symmetric positive definite m.

    The diagonal of L is strictly positive, which makes the factor unique.
    """
    m = _as_square(m)
    scale = float(np.abs(m).max())
    if scale > 0.0 and float(np.abs(m - m.T).max()) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric to working precision")
    n = m.shape[0]
    lower = np.zeros_like(m)
    for j in range(n):
        d = m[j, j] - lower[j, :j] @ lower[j, :j]
        if d <= 0.0:
            raise NotPositiveDefiniteError(
                f"leading minor of order {j + 1} is not positive definite "
                f"(pivot {d:.3e})",
                order=j + 1,
            )
        lower[j, j] = np.sqrt(d)
        lower[j + 1 :, j] = (m[j + 1 :, j] - lower[j + 1 :, :j] @ lower[j, :j]) / lower[j, j]
    return lower


def _hessenberg(h: np.ndarray) -> np.ndarray:
    """Reduce to upper Hessenberg form in place via Householder reflections."""
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k].copy()
        norm_x = float(np.linalg.norm(x))
        if norm_x == 0.0:
            continue
        v = x
        v[0] += np.copysign(norm_x, v[0]) if v[0] != 0.0 else norm_x
        v /= np.linalg.norm(v)
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v)
    for i in range(2, n):
        h[i, : i - 1] = 0.0
    return h


def _hqr(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    Classic implicitly shifted QR with deflation into 1x1 and 2x2 trailing
    blocks; eigenvectors are not accumulated. Returns (real, imag) parts.
    """
    n = h.shape[0]
    wr = np.empty(n)
    wi = np.empty(n)
    anorm = float(np.sum(np.abs(h)))
    sweep_budget = QR_SWEEPS_PER_DIM * n
    sweeps = 0
    t = 0.0
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            # Look for a negligible subdiagonal entry to split the block.
            for l in range(nn, 0, -1):
                s = abs(h[l - 1, l - 1]) + abs(h[l, l])
                if s == 0.0:
                    s = anorm
                if abs(h[l, l - 1]) <= _EPS * s:
                    h[l, l - 1] = 0.0
                    break
            else:
                l = 0
            x = h[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if l == nn - 1:
                # Trailing 2x2 block: closed-form pair.
                p = 0.5 * (y - x)
                q = p * p + w
                z = np.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + np.copysign(z, p) if p != 0.0 else p + z
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = wi[nn] = 0.0
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if sweeps >= sweep_budget:
                raise EigenConvergenceError(
                    f"QR iteration did not converge within {sweep_budget} sweeps; "
                    f"unreduced block size {nn - l + 1}",
                    block_size=nn - l + 1,
                    sweeps=sweeps,
                )
            if its == 10 or its == 20:
                # Exceptional shift to break symmetry-induced stalls.
                t += x
                for i in range(nn + 1):
                    h[i, i] -= x
                s = abs(h[nn, nn - 1]) + abs(h[nn - 1, nn - 2])
                y = x = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            sweeps += 1
            # Seek two consecutive small subdiagonals to start the sweep at.
            for m in range(nn - 2, l - 1, -1):
                z = h[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
                q = h[m + 1, m + 1] - z - r - s
                r = h[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(h[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(h[m - 1, m - 1]) + abs(z) + abs(h[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
            for i in range(m + 2, nn + 1):
                h[i, i - 2] = 0.0
            for i in range(m + 3, nn + 1):
                h[i, i - 3] = 0.0
            # Double QR step on rows l..nn, columns m..nn.
            for k in range(m, nn):
                if k != m:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = h[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = np.copysign(np.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        h[k, k - 1] = -h[k, k - 1]
                else:
                    h[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                cols = slice(k, nn + 1)
                if k != nn - 1:
                    pj = h[k, cols] + q * h[k + 1, cols] + r * h[k + 2, cols]
                    h[k + 2, cols] -= pj * z
                else:
                    pj = h[k, cols] + q * h[k + 1, cols]
                h[k + 1, cols] -= pj * y
                h[k, cols] -= pj * x
                rows = slice(l, min(nn, k + 3) + 1)
                if k != nn - 1:
                    pi = x * h[rows, k] + y * h[rows, k + 1] + z * h[rows, k + 2]
                    h[rows, k + 2] -= pi * r
                else:
                    pi = x * h[rows, k] + y * h[rows, k + 1]
                h[rows, k + 1] -= pi * q
                h[rows, k] -= pi
    return wr, wi


def sort_spectrum(values) -> np.ndarray:
    """Order eigenvalues by descending real part, ties by ascending imaginary."""
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, -values.real))
    return values[order]


def eigenvalues(a) -> np.ndarray:
    """All eigenvalues of a real square matrix.

    Householder reduction to Hessenberg form followed by the implicitly
    shifted double QR iteration. The result is a complex array ordered by
    descending real part (ties broken by ascending imaginary part); complex
    eigenvalues of real input appear in exact conjugate pairs.
    """
    a = _as_square(a)
    n = a.shape[0]
    if n == 1:
        return np.array([complex(a[0, 0])])
    h = _hessenberg(a.copy())
    wr, wi = _hqr(h)
    return sort_spectrum(wr + 1j * wi)


def spectral_abscissa(a) -> float:
    """Largest real part over the spectrum; negative means asymptotically stable."""
    return float(eigenvalues(a)[0].real)


def symmetric_part(a) -> np.ndarray:
    """The symmetric part (a + a^T) / 2; exactly symmetric entrywise."""
    a = _as_square(a)
    # IEEE addition is commutative, so this is bitwise symmetric already.
    return 0.5 * (a + a.T)


def lyapunov_solve(a, q) -> np.ndarray:
    """Solve a^T m + m a + q = 0 for the symmetric solution m.

    Vectorizes to the Kronecker system (I (x) a^T + a^T (x) I) vec(m) = -vec(q)
    and solves it with the LU kernel; adequate for the small dimensions used
    here. The result is explicitly symmetrized so downstream factorizations
    never see rounding asymmetry.
    """
    a = _as_square(a)
    q = _as_square(q, "q")
    if q.shape != a.shape:
        raise ValueError(f"q has shape {q.shape}, expected {a.shape}")
    n = a.shape[0]
    eye = np.eye(n)
    operator = np.kron(eye, a.T) + np.kron(a.T, eye)
    try:
        solution = lu_solve(operator, -q.reshape(n * n, order="F"))
    except SingularMatrixError as exc:
        raise LyapunovSolveError(
            "Lyapunov operator is singular (eigenvalue pair of a sums to zero); "
            "no unique solution"
        ) from exc
    m = solution.reshape((n, n), order="F")
    return 0.5 * (m + m.T)
