"""Projected-gradient local minimizers on the unit sphere and the Stiefel manifold.

Both take a callback returning (value, euclidean gradient with respect
to the conjugate variable), run backtracking line searches with an
Armijo condition, and report whether they met the tolerance within the
iteration budget.  Used by the output-entropy, subspace-entanglement,
convex-roof and capacity searches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ARMIJO = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 40
STEP_GROW = 2.0
MAX_STEP = 1e3


@dataclass(frozen=True)
class LocalResult:
    x: np.ndarray
    value: float
    converged: bool
    iterations: int


def _descend(x, f, g, project, retract, fg, max_iter, tol, gtol2):
    """Generic projected-gradient descent with backtracking."""
    eta = 1.0
    stall = 0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        xi = project(x, g)
        gnorm2 = float(np.real(np.vdot(xi.reshape(-1), xi.reshape(-1))))
        if gnorm2 <= gtol2:
            converged = True
            break
        accepted = False
        fy, gy, y = f, g, x
        for _ in range(MAX_BACKTRACKS):
            y = retract(x - eta * xi)
            fy, gy = fg(y)
            if fy <= f - ARMIJO * eta * gnorm2:
                accepted = True
                break
            eta *= BACKTRACK
        if not accepted:
            converged = True  # no descent direction at working precision
            break
        if f - fy <= tol * max(1.0, abs(f)):
            stall += 1
        else:
            stall = 0
        x, f, g = y, fy, gy
        if stall >= 3:
            converged = True
            break
        eta = min(eta * STEP_GROW, MAX_STEP)
    return LocalResult(x=x, value=f, converged=converged, iterations=it)


def minimize_on_sphere(fg, x0: np.ndarray, max_iter: int = 400, tol: float = 1e-9,
                       gtol2: float = 1e-14) -> LocalResult:
    """Minimize over unit vectors; fg(x) -> (value, grad wrt conj(x))."""

    def project(x, g):
        return g - x * np.vdot(x, g)

    def retract(y):
        return y / np.linalg.norm(y)

    x0 = np.asarray(x0, dtype=complex).reshape(-1)
    x0 = x0 / np.linalg.norm(x0)
    f0, g0 = fg(x0)
    return _descend(x0, f0, g0, project, retract, fg, max_iter, tol, gtol2)


def qr_retract(x: np.ndarray) -> np.ndarray:
    """Thin QR with the R diagonal made positive, for a unique retraction."""
    q, r = np.linalg.qr(x)
    d = np.diagonal(r)
    absd = np.abs(d)
    safe = np.where(absd > 1e-300, absd, 1.0)
    phases = np.where(absd > 1e-300, d / safe, 1.0)
    return q * phases


def minimize_on_stiefel(fg, u0: np.ndarray, max_iter: int = 400, tol: float = 1e-9,
                        gtol2: float = 1e-14) -> LocalResult:
    """Minimize over complex matrices with orthonormal columns."""

    def project(u, g):
        ug = u.conj().T @ g
        return g - u @ ((ug + ug.conj().T) / 2)

    u0 = qr_retract(np.asarray(u0, dtype=complex))
    f0, g0 = fg(u0)
    return _descend(u0, f0, g0, project, qr_retract, fg, max_iter, tol, gtol2)


def haar_stiefel(m: int, r: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    return qr_retract(z)
