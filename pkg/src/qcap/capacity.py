"""Holevo capacity optimization, the dilation-form cross-check, and cost constraints.

The capacity search alternates an exact probability step (the Holevo
information is concave in the weights, maximized by projected gradient
ascent on the simplex) with a joint projected-gradient ascent over the
member states on their unit spheres.  Restart 0 seeds the ensemble with
the computational basis, which is already optimal for every bundled
covariant channel; further restarts are Haar random, and the best value
is kept, so the result is a lower bound, nondecreasing in restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import eof as eof_mod
from . import linalg, measures, quantum
from ._threads import run_indexed

MAX_INPUT_DIM = 16
PRUNE_PROB = 1e-12
LOG_EIG_FLOOR = 1e-18
PROB_PG_TOL = 1e-9


class InfeasibleError(ValueError):
    """The cost threshold is below the cheapest available state."""


@dataclass(frozen=True)
class CapacityResult:
    """Best ensemble found, its Holevo information, and the average output state."""

    value: float
    ensemble: quantum.PureEnsemble
    optimal_output: quantum.DensityMatrix
    converged: bool


@dataclass(frozen=True)
class CostConstraint:
    """Hermitian cost operator with an admissible average cost threshold."""

    cost_op: np.ndarray
    threshold: float

    def __post_init__(self):
        a = linalg.as_matrix(self.cost_op)
        if a.shape[0] != a.shape[1] or np.max(np.abs(a - a.conj().T)) > 1e-10:
            raise ValueError("cost operator must be Hermitian")
        object.__setattr__(self, "cost_op", quantum._frozen((a + a.conj().T) / 2))
        object.__setattr__(self, "threshold", float(self.threshold))


@dataclass(frozen=True)
class DilationCheck:
    """Entropy-minus-formation evaluation at the dilated capacity witness."""

    value: float
    witness: quantum.DensityMatrix
    entropy_term: float
    eof_term: float
    capacity: CapacityResult


def _log2m(m: np.ndarray) -> np.ndarray:
    """Matrix log base 2 with an eigenvalue floor, for relative-entropy gradients."""
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    lw = np.log2(np.maximum(w, LOG_EIG_FLOOR))
    return (v * lw) @ v.conj().T


def _entropies(rhos: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(rhos)
    w = np.clip(w, 0.0, None)
    nz = w > measures.EIG_CLIP
    logs = np.where(nz, np.log2(np.where(nz, w, 1.0)), 0.0)
    return -(w * logs).sum(axis=-1)


def _project_simplex(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    k = idx[u - css / idx > 0][-1]
    tau = css[k - 1] / k
    return np.maximum(v - tau, 0.0)


def _project_feasible(v: np.ndarray, costs: np.ndarray | None, alpha: float | None) -> np.ndarray:
    p = _project_simplex(v)
    if costs is None or costs @ p <= alpha + 1e-12:
        return p
    lo, hi = 0.0, 1.0
    while costs @ _project_simplex(v - hi * costs) > alpha and hi < 1e14:
        hi *= 2.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if costs @ _project_simplex(v - mid * costs) > alpha:
            lo = mid
        else:
            hi = mid
    return _project_simplex(v - hi * costs)


class _EnsembleProblem:
    def __init__(self, t: quantum.KrausChannel, constraint: CostConstraint | None):
        self.t = t
        self.ops = np.stack(t.kraus)  # (k, out, in)
        self.constraint = constraint

    def outputs(self, states: np.ndarray) -> np.ndarray:
        z = np.einsum("koi,mi->kom", self.ops, states)
        return np.einsum("kam,kbm->mab", z, z.conj()), z

    def costs(self, states: np.ndarray) -> np.ndarray | None:
        if self.constraint is None:
            return None
        a = self.constraint.cost_op
        return np.einsum("mi,ij,mj->m", states.conj(), a, states).real

    def info(self, probs: np.ndarray, rhos: np.ndarray, entropies: np.ndarray) -> float:
        avg = np.einsum("m,mab->ab", probs, rhos)
        return float(measures.entropy_of_spectrum(np.linalg.eigvalsh(avg)) - probs @ entropies)

    def prob_step(self, probs, rhos, entropies, max_iter=200):
        """Exact concave maximization of the Holevo information over the weights."""
        alpha = self.constraint.threshold if self.constraint else None
        costs_states = None
        if self.constraint is not None:
            costs_states = self._state_costs
        p = _project_feasible(probs, costs_states, alpha)
        val = self.info(p, rhos, entropies)
        eta = 1.0
        for _ in range(max_iter):
            avg = np.einsum("m,mab->ab", p, rhos)
            lbar = _log2m(avg)
            g = -entropies - np.einsum("mab,ba->m", rhos, lbar).real
            if np.linalg.norm(_project_feasible(p + g, costs_states, alpha) - p) <= PROB_PG_TOL:
                break
            moved = False
            for _ in range(60):
                q = _project_feasible(p + eta * g, costs_states, alpha)
                new = self.info(q, rhos, entropies)
                if new >= val + 1e-4 * max(g @ (q - p), 0.0) and new >= val:
                    p, val, moved = q, new, True
                    break
                eta *= 0.5
            if not moved:
                break
            eta = min(eta * 2.0, 1e6)
        return p, val

    def state_gradient(self, probs, states, rhos, z, lbar):
        lrho = np.stack([_log2m(r) for r in rhos])
        diff = lrho - lbar
        t1 = np.einsum("mab,kbm->kam", diff, z)
        grad = np.einsum("kao,kam->ma", self.ops.conj(), t1)
        return grad * probs[:, None]

    def state_step(self, probs, states, iters=6):
        """Joint ascent sweep over all member states with a shared line search."""
        alpha = self.constraint.threshold if self.constraint else None
        rhos, z = self.outputs(states)
        entropies = _entropies(rhos)
        val = self.info(probs, rhos, entropies)
        eta = 0.5
        for _ in range(iters):
            avg = np.einsum("m,mab->ab", probs, rhos)
            lbar = _log2m(avg)
            g = self.state_gradient(probs, states, rhos, z, lbar)
            overlap = np.einsum("mi,mi->m", states.conj(), g)
            xi = g - states * overlap[:, None]
            gnorm2 = float(np.real(np.einsum("mi,mi->", xi.conj(), xi)))
            if gnorm2 <= 1e-16:
                break
            moved = False
            for _ in range(50):
                cand = states + eta * xi
                cand = cand / np.linalg.norm(cand, axis=1, keepdims=True)
                if self.constraint is not None:
                    cand_costs = np.einsum("mi,ij,mj->m", cand.conj(),
                                           self.constraint.cost_op, cand).real
                    if probs @ cand_costs > alpha + 1e-9:
                        eta *= 0.5
                        continue
                rhos_c, z_c = self.outputs(cand)
                ent_c = _entropies(rhos_c)
                new = self.info(probs, rhos_c, ent_c)
                if new >= val + 1e-4 * eta * gnorm2:
                    states, rhos, z, entropies, val = cand, rhos_c, z_c, ent_c, new
                    if self.constraint is not None:
                        self._state_costs = cand_costs
                    moved = True
                    break
                eta *= 0.5
            if not moved:
                break
            eta = min(eta * 2.0, 1e3)
        return states, rhos, entropies, val

    def run(self, states0: np.ndarray, tol: float, max_cycles: int):
        states = states0 / np.linalg.norm(states0, axis=1, keepdims=True)
        self._state_costs = self.costs(states)
        m = states.shape[0]
        probs = np.full(m, 1.0 / m)
        rhos, _ = self.outputs(states)
        entropies = _entropies(rhos)
        probs, val = self.prob_step(probs, rhos, entropies)
        converged = False
        for _ in range(max_cycles):
            states, rhos, entropies, _ = self.state_step(probs, states)
            probs, new = self.prob_step(probs, rhos, entropies)
            if new - val <= tol * max(1.0, abs(new)):
                val = max(val, new)
                converged = True
                break
            val = new
        return val, probs, states, converged


def _initial_states(t, m, restart, seed, constraint, warm=None):
    d = t.in_dim
    rng = quantum.derived_rng(seed, restart)
    states = np.zeros((m, d), dtype=complex)
    row = 0
    if warm is not None:
        take = min(len(warm), max(m - d, 1))  # leave room for the basis states
        states[:take] = warm[:take]
        row = take
    if restart == 0 and row < m:
        take = min(d, m - row)
        states[row:row + take] = np.eye(d)[:take]
        row += take
    if m > row:
        z = rng.standard_normal((m - row, d)) + 1j * rng.standard_normal((m - row, d))
        states[row:] = z / np.linalg.norm(z, axis=1, keepdims=True)
    if constraint is not None:
        costs = np.einsum("mi,ij,mj->m", states.conj(), constraint.cost_op, states).real
        if costs.min() > constraint.threshold:
            # replace one member by the cheapest state so projection stays feasible
            _, v = np.linalg.eigh(constraint.cost_op)
            states[-1] = v[:, 0]
    return states


def _optimize(t, max_ensemble, restarts, seed, tol, max_cycles, constraint, warm=None):
    if t.in_dim > MAX_INPUT_DIM:
        raise ValueError(f"input dimension {t.in_dim} above the supported desk scale "
                         f"({MAX_INPUT_DIM})")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    m = max_ensemble if max_ensemble is not None else t.out_dim ** 2
    m = max(int(m), 1)
    if constraint is not None:
        lo = float(np.linalg.eigvalsh(constraint.cost_op)[0])
        if constraint.threshold < lo - 1e-12:
            raise InfeasibleError(
                f"threshold {constraint.threshold} below the minimal cost {lo}")
    problem = _EnsembleProblem(t, constraint)

    def one(i: int):
        states0 = _initial_states(t, m, i, seed, constraint, warm if i == 0 else None)
        return problem.run(states0, tol, max_cycles)

    results = run_indexed(one, restarts)
    best = max(results, key=lambda r: r[0])
    val, probs, states, converged = best

    keep = probs > PRUNE_PROB
    probs, states = probs[keep], states[keep]
    probs = probs / probs.sum()
    members = tuple(
        (float(p), quantum.PureState(s, (t.in_dim,))) for p, s in zip(probs, states)
    )
    ensemble = quantum.PureEnsemble(members)
    value = measures.holevo_information(ensemble, t)
    rhos, _ = problem.outputs(states)
    avg = np.einsum("m,mab->ab", probs, rhos)
    output = quantum.DensityMatrix((avg + avg.conj().T) / 2, (t.out_dim,))
    return CapacityResult(value=value, ensemble=ensemble, optimal_output=output,
                          converged=converged)


def holevo_capacity(t: quantum.KrausChannel, max_ensemble: int | None = None,
                    restarts: int = 8, seed: int = 0, tol: float = 1e-7,
                    max_cycles: int = 60) -> CapacityResult:
    """Lower bound on the product-state classical capacity of a channel.

    The ensemble size defaults to out_dim^2, which suffices for the
    maximum.  Deterministic in (seed, restarts); nondecreasing in
    restarts.
    """
    return _optimize(t, max_ensemble, restarts, seed, tol, max_cycles, None)


def constrained_capacity(t: quantum.KrausChannel, c: CostConstraint,
                         max_ensemble: int | None = None, restarts: int = 8,
                         seed: int = 0, tol: float = 1e-7, max_cycles: int = 60,
                         warm_start: quantum.PureEnsemble | None = None) -> CapacityResult:
    """Capacity with ensembles restricted to average cost <= threshold.

    The probability step projects onto the simplex intersected with the
    cost half-space; state updates that would leave the feasible set
    are rejected by the line search.  Nondecreasing and concave in the
    threshold.
    """
    warm = None
    if warm_start is not None:
        warm = np.stack([s.vector for _, s in warm_start.members])
    return _optimize(t, max_ensemble, restarts, seed, tol, max_cycles, c, warm)


def capacity_via_dilation(t: quantum.KrausChannel, capacity_kwargs: dict | None = None,
                          eof_kwargs: dict | None = None) -> DilationCheck:
    """Entropy-minus-formation value at the dilated optimal ensemble.

    Dilates the capacity witness into environment (x) output, evaluates
    S(Tr_env rho) - E_f(rho) there, and reports the pieces; the value
    must agree with the direct capacity within combined optimizer
    tolerances.
    """
    cap = holevo_capacity(t, **(capacity_kwargs or {}))
    dil = quantum.stinespring_from_kraus(t)
    u = dil.isometry
    rho = np.zeros((u.shape[0], u.shape[0]), dtype=complex)
    for p, s in cap.ensemble.members:
        w = u @ s.vector
        rho += p * np.outer(w, w.conj())
    witness = quantum.DensityMatrix((rho + rho.conj().T) / 2, (dil.env_dim, dil.out_dim))
    entropy_term = measures.von_neumann_entropy(
        linalg.partial_trace(witness.matrix, witness.dims, 0))
    roof = eof_mod.eof_convex_roof(witness, cut=0, **(eof_kwargs or {}))
    return DilationCheck(value=float(entropy_term - roof.value), witness=witness,
                         entropy_term=float(entropy_term), eof_term=float(roof.value),
                         capacity=cap)


def covariant_capacity(k: quantum.SubspaceBasis, traced: int = 0, **kwargs) -> float:
    """log2(output dim) minus the subspace-minimum entanglement.

    Valid for subspaces carrying an irreducible symmetry that commutes
    with the partial trace over the `traced` factor (asserted by the
    caller).  Checked against the direct capacity for the bundled
    examples in the test suite.
    """
    if len(k.dims) != 2 or traced not in (0, 1):
        raise ValueError("need a bipartite ambient space and traced in {0, 1}")
    out_dim = k.dims[1 - traced]
    return float(np.log2(out_dim) - eof_mod.min_subspace_entanglement(k, **kwargs))
