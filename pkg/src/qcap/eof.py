"""Entanglement of formation: exact two-qubit value and convex-roof search.

The convex roof is minimized over the standard decomposition
parameterization: if rho has rank r with scaled eigenvectors
v_k = sqrt(lambda_k) e_k, every decomposition of rho into m >= r pure
states arises from an m x r matrix U with orthonormal columns via
sqrt(p_i) psi_i = sum_k U_ik v_k.  The search is a multi-start
projected-gradient descent over that Stiefel manifold; the first start
is the eigen-ensemble itself, so the result never exceeds the
eigen-decomposition average and is nonincreasing in restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, measures, optim, quantum
from ._threads import run_indexed

RANK_TOL = 1e-10
PRUNE_PROB = 1e-12
MU_FLOOR = 1e-15

# sigma_y (x) sigma_y, the spin-flip kernel of the concurrence
_SY2 = np.array(
    [[0, 0, 0, -1],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [-1, 0, 0, 0]],
    dtype=complex,
)


@dataclass(frozen=True)
class EofResult:
    """Best decomposition found: value in bits, the achieving ensemble, and search status."""

    value: float
    ensemble: quantum.PureEnsemble
    converged: bool
    iterations: int


def eof_wootters(rho) -> float:
    """Exact entanglement of formation of a two-qubit state.

    Concurrence C = max(0, l1 - l2 - l3 - l4) from the decreasing square
    roots of the eigenvalues of rho (sy(x)sy) rho* (sy(x)sy), then
    E_f = h((1 + sqrt(1 - C^2)) / 2) with h the binary entropy.
    """
    if isinstance(rho, quantum.DensityMatrix):
        if rho.dims != (2, 2):
            raise ValueError(f"expected a 2 (x) 2 state, got dims {rho.dims}")
        m = rho.matrix
    else:
        m = linalg.as_matrix(rho)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {m.shape}")
    rt = m @ _SY2 @ m.conj() @ _SY2
    ev = np.linalg.eigvals(rt)
    lam = np.sqrt(np.abs(ev.real))
    lam[::-1].sort()
    c = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return measures.binary_entropy((1.0 + np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


class _RoofProblem:
    """Average entanglement of a size-m decomposition, as a function on the Stiefel manifold."""

    def __init__(self, rho: quantum.DensityMatrix, cut, ensemble_size):
        w, v = np.linalg.eigh(rho.matrix)
        keep = w > RANK_TOL
        self.rank = int(keep.sum())
        self.scaled = v[:, keep] * np.sqrt(w[keep])  # n x r, columns v_k
        if ensemble_size is None:
            ensemble_size = self.rank * self.rank
        if ensemble_size < self.rank:
            raise ValueError(f"ensemble_size {ensemble_size} < rank {self.rank}")
        self.m = int(ensemble_size)
        perm, self.da, self.db = measures.bipartition_shape(rho.dims, cut)
        idx = measures.vector_index_permutation(rho.dims, perm)
        self.scaled_perm = self.scaled[idx, :]
        self.dims = rho.dims

    def value_and_grad(self, u: np.ndarray):
        members = (self.scaled_perm @ u.T).T.reshape(self.m, self.da, self.db)
        sig = members @ members.conj().transpose(0, 2, 1)
        p = np.einsum("iaa->i", sig).real
        mu, q = np.linalg.eigh(sig)
        mu = np.clip(mu, 0.0, None)
        nz = mu > MU_FLOOR
        logs = np.where(nz, np.log2(np.where(nz, mu, 1.0)), 0.0)
        plogp = np.where(p > MU_FLOOR, p * np.log2(np.maximum(p, MU_FLOOR)), 0.0)
        value = float(-(mu * logs).sum() + plogp.sum())
        # gradient wrt conj(member): -log2(sigma/p) M, support-restricted
        rel = np.where(nz, logs - np.log2(np.maximum(p, MU_FLOOR))[:, None], 0.0)
        lmat = (q * rel[:, None, :]) @ q.conj().transpose(0, 2, 1)
        gm = -(lmat @ members)
        grad = gm.reshape(self.m, -1) @ self.scaled_perm.conj()
        return value, grad

    def ensemble_from(self, u: np.ndarray) -> quantum.PureEnsemble:
        vectors = (self.scaled @ u.T).T  # m x n, original factor ordering
        p = np.einsum("ij,ij->i", vectors, vectors.conj()).real
        keep = p > PRUNE_PROB
        p, vectors = p[keep], vectors[keep]
        members = tuple(
            (float(pi / p.sum()), quantum.PureState(vec / np.sqrt(pi), self.dims))
            for pi, vec in zip(p, vectors)
        )
        return quantum.PureEnsemble(members)


def eof_convex_roof(rho: quantum.DensityMatrix, cut=0, ensemble_size: int | None = None,
                    restarts: int = 64, seed: int = 0, tol: float = 1e-7,
                    max_iter: int = 400) -> EofResult:
    """Upper bound on the entanglement of formation across the given cut.

    Parameters
    ----------
    rho : DensityMatrix
        Bipartite (or multi-factor) state; `cut` lists the factors on one side.
    ensemble_size : int, optional
        Decomposition size m; defaults to rank(rho)^2, must be >= rank.
    restarts, seed, tol, max_iter
        Multi-start search controls.  Restart 0 starts at the
        eigen-ensemble; the rest are Haar random.  Deterministic in
        (seed, restarts); the value is nonincreasing in both `restarts`
        and `ensemble_size`.
    """
    problem = _RoofProblem(rho, cut, ensemble_size)
    if problem.rank == 1:
        vec = problem.scaled[:, 0]
        state = quantum.PureState(vec / np.linalg.norm(vec), rho.dims)
        value = measures.pure_entanglement(state, cut)
        return EofResult(value=value, ensemble=quantum.PureEnsemble(((1.0, state),)),
                         converged=True, iterations=0)
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    def one(i: int) -> optim.LocalResult:
        if i == 0:
            u0 = np.eye(problem.m, problem.rank, dtype=complex)
        else:
            u0 = optim.haar_stiefel(problem.m, problem.rank, quantum.derived_rng(seed, i))
        return optim.minimize_on_stiefel(problem.value_and_grad, u0,
                                         max_iter=max_iter, tol=tol)

    results = run_indexed(one, restarts)
    best = min(results, key=lambda r: r.value)
    return EofResult(value=float(best.value), ensemble=problem.ensemble_from(best.x),
                     converged=bool(best.converged), iterations=best.iterations)


def _subspace_objective(k: quantum.SubspaceBasis):
    d0, d1 = k.dims
    cols = k.columns

    def fg(c):
        m = (cols @ c).reshape(d0, d1)
        sig = m @ m.conj().T
        p = np.trace(sig).real
        mu, q = np.linalg.eigh(sig)
        mu = np.clip(mu, 0.0, None)
        nz = mu > MU_FLOOR
        logs = np.where(nz, np.log2(np.where(nz, mu, 1.0)), 0.0)
        value = float(-(mu * logs).sum() + p * np.log2(max(p, MU_FLOOR)))
        rel = np.where(nz, logs - np.log2(max(p, MU_FLOOR)), 0.0)
        lmat = (q * rel) @ q.conj().T
        gm = -(lmat @ m)
        return value, cols.conj().T @ gm.reshape(-1)

    return fg


def min_subspace_entanglement(k: quantum.SubspaceBasis, restarts: int = 32, seed: int = 0,
                              tol: float = 1e-7, max_iter: int = 400) -> float:
    """Upper bound on min { E(psi) : psi a unit vector in the subspace }.

    Multi-start projected gradient over subspace coordinates on the unit
    sphere; the first starts are the basis vectors themselves.
    """
    if len(k.dims) != 2:
        raise ValueError("subspace must live in a bipartite ambient space")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    r = k.subspace_dim
    fg = _subspace_objective(k)

    def one(i: int) -> optim.LocalResult:
        if i < r:
            c0 = np.zeros(r, dtype=complex)
            c0[i] = 1.0
        else:
            rng = quantum.derived_rng(seed, i)
            z = rng.standard_normal(r) + 1j * rng.standard_normal(r)
            c0 = z / np.linalg.norm(z)
        return optim.minimize_on_sphere(fg, c0, max_iter=max_iter, tol=tol)

    results = run_indexed(one, restarts)
    best = min(results, key=lambda r_: r_.value)
    if not any(r_.converged for r_ in results):
        raise measures.NumericalError("subspace-entanglement search did not converge",
                                      best.value)
    return float(best.value)


def eof_symmetric(k: quantum.SubspaceBasis, **kwargs) -> float:
    """Entanglement of formation of the maximally mixed state on a covariant subspace.

    Valid when a group acts irreducibly on the subspace and the ambient
    output factor, commuting with the partial trace; under that
    hypothesis (asserted by the caller, not checked here) the formation
    of the normalized projector equals the minimum pure-state
    entanglement over the subspace, which is what is returned.
    """
    return min_subspace_entanglement(k, **kwargs)
