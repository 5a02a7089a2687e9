"""Entropies and entanglement/information functionals, all in bits.

Logarithms are base 2 throughout: a Bell pair carries entanglement 1
and a qubit carries capacity at most 1.  Eigenvalues below 1e-12 are
treated as exact zeros before 0*log(0) handling; negative eigenvalues
within -1e-10 are clipped, anything worse is rejected.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import linalg, optim, quantum
from ._threads import run_indexed

Bits = float

EIG_CLIP = 1e-12
NEG_EIG_TOL = 1e-10
LOG_FLOOR = 1e-300


class NumericalError(RuntimeError):
    """Search failed to converge; carries the best value found."""

    def __init__(self, message: str, best_value: float):
        super().__init__(f"{message} (best value found: {best_value})")
        self.best_value = best_value


def shannon_entropy(p: Sequence[float]) -> Bits:
    """-sum p log2 p with 0 log 0 = 0; input renormalized within 1e-9."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any(p < -1e-12):
        raise ValueError(f"negative probability {p.min()} beyond tolerance")
    p = np.clip(p, 0.0, None)
    s = p.sum()
    if abs(s - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {s}, not 1 within 1e-9")
    p = p / s
    nz = p > EIG_CLIP
    return float(-(p[nz] * np.log2(p[nz])).sum())


def binary_entropy(x: float) -> Bits:
    return shannon_entropy([x, 1.0 - x])


def _clean_spectrum(w: np.ndarray) -> np.ndarray:
    if w.min() < -NEG_EIG_TOL:
        raise ValueError(f"eigenvalue {w.min()} below -1e-10; not a state")
    w = np.clip(w, 0.0, None)
    w[w < EIG_CLIP] = 0.0
    return w


def entropy_of_spectrum(w: np.ndarray) -> Bits:
    w = _clean_spectrum(np.asarray(w, dtype=float))
    nz = w > 0
    return float(-(w[nz] * np.log2(w[nz])).sum())


def von_neumann_entropy(rho) -> Bits:
    """Entropy of the eigenvalue vector of a state (DensityMatrix or Hermitian array)."""
    m = rho.matrix if isinstance(rho, quantum.DensityMatrix) else linalg.as_matrix(rho)
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return entropy_of_spectrum(w)


def holevo_information(e: quantum.PureEnsemble, t: quantum.KrausChannel) -> Bits:
    """S(sum p_i T(pi_i)) - sum p_i S(T(pi_i)); nonnegative, at most log2(out_dim)."""
    if e.members[0][1].dim != t.in_dim:
        raise ValueError("ensemble states do not live on the channel input space")
    outs = [quantum.apply_channel_matrix(t, s.projector()) for _, s in e.members]
    avg = sum(p * o for (p, _), o in zip(e.members, outs))
    value = von_neumann_entropy(avg) - sum(
        p * von_neumann_entropy(o) for (p, _), o in zip(e.members, outs)
    )
    return float(max(value, 0.0))


def _side_a_indices(cut, n: int) -> tuple[int, ...]:
    if isinstance(cut, (int, np.integer)):
        cut = (int(cut),)
    side = tuple(sorted(int(i) for i in cut))
    if not side or any(i < 0 or i >= n for i in side) or len(side) == n:
        raise ValueError(f"cut {cut} is not a proper bipartition of {n} factors")
    return side


def bipartition_shape(dims: Sequence[int], cut) -> tuple[tuple[int, ...], int, int]:
    """Permutation putting the cut's factors first, plus the two side dimensions."""
    side = _side_a_indices(cut, len(dims))
    other = tuple(i for i in range(len(dims)) if i not in side)
    perm = side + other
    da = int(np.prod([dims[i] for i in side]))
    db = int(np.prod([dims[i] for i in other]))
    return perm, da, db


def vector_index_permutation(dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Index array p with v_permuted = v[p] for a factor reordering."""
    n = int(np.prod(dims))
    idx = np.arange(n).reshape(tuple(dims)).transpose(perm).reshape(-1)
    return idx


def pure_entanglement(psi: quantum.PureState, cut=0) -> Bits:
    """Entropy of entanglement of a pure state across the given cut.

    `cut` lists the tensor factors forming one side (an int means that
    single factor).  Symmetric in the two sides.
    """
    perm, da, db = bipartition_shape(psi.dims, cut)
    m = psi.vector[vector_index_permutation(psi.dims, perm)].reshape(da, db)
    small = m if da <= db else m.conj().T
    red = small @ small.conj().T
    return entropy_of_spectrum(np.linalg.eigvalsh(red))


def log_negativity(rho: quantum.DensityMatrix, cut=0) -> Bits:
    """log2 of the trace norm of the partial transpose across the cut; 0 for PPT states."""
    side = _side_a_indices(cut, len(rho.dims))
    gamma = linalg.partial_transpose(rho.matrix, rho.dims, side)
    value = float(np.log2(linalg.trace_norm(gamma)))
    return max(value, 0.0)


def output_entropy_and_gradient(t: quantum.KrausChannel, psi: np.ndarray):
    """S(T(|psi><psi|)) and its gradient with respect to conj(psi)."""
    outs = np.stack([a @ psi for a in t.kraus])  # (k, out_dim)
    rho = np.einsum("ka,kb->ab", outs, outs.conj())
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    w = _clean_spectrum(w)
    nz = w > 0
    value = float(-(w[nz] * np.log2(w[nz])).sum())
    logw = np.where(nz, np.log2(np.where(nz, w, 1.0)) + 1 / np.log(2), 0.0)
    lrho = (v * logw) @ v.conj().T
    grad = np.zeros_like(psi)
    for a, o in zip(t.kraus, outs):
        grad -= a.conj().T @ (lrho @ o)
    return value, grad


def min_output_entropy(t: quantum.KrausChannel, restarts: int = 32, seed: int = 0,
                       tol: float = 1e-7, max_iter: int = 400) -> Bits:
    """Upper bound on the minimal output entropy over pure inputs.

    Multi-start projected gradient on the unit sphere; the first
    `in_dim` starts are the computational basis states, the rest are
    Haar random.  Nonincreasing in `restarts`.  Raises NumericalError
    (carrying the best value) if no restart converged.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    def fg(x):
        return output_entropy_and_gradient(t, x)

    def one(i: int) -> optim.LocalResult:
        if i < t.in_dim:
            x0 = np.zeros(t.in_dim, dtype=complex)
            x0[i] = 1.0
        else:
            rng = quantum.derived_rng(seed, i)
            z = rng.standard_normal(t.in_dim) + 1j * rng.standard_normal(t.in_dim)
            x0 = z / np.linalg.norm(z)
        return optim.minimize_on_sphere(fg, x0, max_iter=max_iter, tol=tol)

    results = run_indexed(one, restarts)
    best = min(results, key=lambda r: r.value)
    if not any(r.converged for r in results):
        raise NumericalError("output-entropy search did not converge", best.value)
    return float(best.value)
