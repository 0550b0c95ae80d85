"""Shared test oracles, independent of the library's own numerical paths."""

import cmath
import math

import numpy as np


def quadratic_roots(trace: float, det: float) -> list[complex]:
    """Roots of x^2 - trace*x + det via the closed-form formula."""
    disc = cmath.sqrt(trace * trace - 4.0 * det)
    return [(trace + disc) / 2.0, (trace - disc) / 2.0]


def cubic_roots(a2: float, a1: float, a0: float) -> list[complex]:
    """Roots of x^3 + a2 x^2 + a1 x + a0 by Cardano's formula."""
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    shift = -a2 / 3.0
    if p == 0.0 and q == 0.0:
        return [complex(shift)] * 3
    disc = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    u3 = -q / 2.0 + disc
    alt = -q / 2.0 - disc
    if abs(alt) > abs(u3):
        u3 = alt
    u = u3 ** (1.0 / 3.0)
    omega = complex(-0.5, math.sqrt(3.0) / 2.0)
    roots = []
    for k in range(3):
        uk = u * omega**k
        roots.append(uk - p / (3.0 * uk) + shift)
    return roots


def char_poly_roots(a: np.ndarray) -> list[complex]:
    """Eigenvalues of a 2x2 or 3x3 matrix from its characteristic polynomial."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 2:
        return quadratic_roots(float(np.trace(a)), float(np.linalg.det(a)))
    if n == 3:
        tr = float(np.trace(a))
        tr2 = float(np.trace(a @ a))
        det = (
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )
        # char poly: x^3 - tr x^2 + c1 x - det
        c1 = 0.5 * (tr * tr - tr2)
        return cubic_roots(-tr, c1, -float(det))
    raise ValueError(f"closed forms cover 2x2 and 3x3 only, got {n}x{n}")


def spectra_distance(got, expected) -> float:
    """Greedy nearest-neighbour matching distance between two spectra."""
    got = list(np.asarray(got, dtype=complex))
    expected = list(np.asarray(expected, dtype=complex))
    assert len(got) == len(expected)
    worst = 0.0
    for g in got:
        j = min(range(len(expected)), key=lambda i: abs(expected[i] - g))
        worst = max(worst, abs(expected.pop(j) - g))
    return worst


def random_stable_matrix(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    """Random stable matrix built by shifting a random matrix left of the axis."""
    s = rng.uniform(-2.0, 2.0, size=(n, n))
    margin = rng.uniform(0.1, 2.0)
    shift = max(z.real for z in np.linalg.eigvals(s)) + margin
    return s - shift * np.eye(n)


def random_spd_matrix(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    r = rng.uniform(-1.0, 1.0, size=(n, n))
    return r.T @ r + 0.1 * np.eye(n)
