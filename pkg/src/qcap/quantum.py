"""States, channels and Stinespring dilations on factorized Hilbert spaces.

All values are immutable after construction (the wrapped arrays are
marked read-only) and every operation is a pure function, so concurrent
use from several threads is safe.  Random constructors take explicit
seeds and are deterministic.

Convention: a dilation isometry maps the input space into
environment (x) output, with the environment as the *first* tensor
factor (the one the partial trace removes).  `permute` converts to the
opposite ordering when needed; entanglement quantities do not depend on
the choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Sequence

import numpy as np

from . import linalg

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-10
NORM_TOL = 1e-12
GRAM_TOL = 1e-10
KRAUS_PRUNE_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derived_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for restart/sample `index`; deterministic in (seed, index)."""
    return np.random.default_rng([int(seed), int(index)])


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator on a factorized space."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        dims = linalg.check_factorization(m.shape[0], self.dims)
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-10")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} is not 1 within 1e-10")
        if np.linalg.eigvalsh((m + m.conj().T) / 2)[0] < -EIG_TOL:
            raise ValueError("density matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", _frozen((m + m.conj().T) / 2))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def permute(self, order: Sequence[int]) -> "DensityMatrix":
        m = linalg.permute_factors(self.matrix, self.dims, order)
        return DensityMatrix(m, tuple(self.dims[i] for i in order))


@dataclass(frozen=True)
class PureState:
    """Unit vector on a factorized space."""

    vector: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).reshape(-1)
        dims = linalg.check_factorization(v.shape[0], self.dims)
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ValueError("state vector is not normalized within 1e-12")
        object.__setattr__(self, "vector", _frozen(v))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector(), self.dims)

    def permute(self, order: Sequence[int]) -> "PureState":
        v = linalg.permute_factors(self.vector, self.dims, order)
        return PureState(v, tuple(self.dims[i] for i in order))


@dataclass(frozen=True)
class PureEnsemble:
    """Weighted list of pure states; probabilities sum to one."""

    members: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        members = tuple((float(p), s) for p, s in self.members)
        if not members:
            raise ValueError("ensemble must have at least one member")
        probs = np.array([p for p, _ in members])
        if np.any(probs < -1e-12):
            raise ValueError("ensemble probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError(f"ensemble probabilities sum to {probs.sum()}, not 1")
        dims = members[0][1].dims
        if any(s.dims != dims for _, s in members):
            raise ValueError("ensemble members live on different factorizations")
        object.__setattr__(self, "members", members)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.members[0][1].dims

    def average(self) -> DensityMatrix:
        m = sum(p * s.projector() for p, s in self.members)
        return DensityMatrix(m / np.trace(m).real, self.dims)


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple[np.ndarray, ...]
    in_dim: int
    out_dim: int

    def __post_init__(self):
        ops = tuple(_frozen(linalg.as_matrix(a)) for a in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        if any(a.shape != (self.out_dim, self.in_dim) for a in ops):
            raise ValueError("every Kraus operator must be out_dim x in_dim")
        gram = sum(a.conj().T @ a for a in ops)
        if np.max(np.abs(gram - np.eye(self.in_dim))) > HERM_TOL:
            raise ValueError("Kraus operators do not preserve the trace (sum A'A != 1)")
        object.__setattr__(self, "kraus", ops)

    @classmethod
    def from_operators(cls, ops: Sequence[np.ndarray]) -> "KrausChannel":
        first = linalg.as_matrix(ops[0])
        return cls(tuple(ops), in_dim=first.shape[1], out_dim=first.shape[0])


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal columns spanning a subspace of a factorized ambient space."""

    columns: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        c = linalg.as_matrix(self.columns)
        dims = linalg.check_factorization(c.shape[0], self.dims)
        if c.shape[1] > c.shape[0]:
            raise ValueError("more basis columns than ambient dimensions")
        gram = c.conj().T @ c
        if np.max(np.abs(gram - np.eye(c.shape[1]))) > GRAM_TOL:
            raise ValueError("basis columns are not orthonormal within 1e-10")
        object.__setattr__(self, "columns", _frozen(c))
        object.__setattr__(self, "dims", dims)

    @property
    def ambient_dim(self) -> int:
        return self.columns.shape[0]

    @property
    def subspace_dim(self) -> int:
        return self.columns.shape[1]


@dataclass(frozen=True)
class StinespringDilation:
    """Isometry into environment (x) output plus its image subspace."""

    isometry: np.ndarray
    env_dim: int
    out_dim: int
    in_dim: int
    image_basis: SubspaceBasis = field(repr=False)

    def __post_init__(self):
        u = linalg.as_matrix(self.isometry)
        if u.shape != (self.env_dim * self.out_dim, self.in_dim):
            raise ValueError("isometry has the wrong shape")
        if np.max(np.abs(u.conj().T @ u - np.eye(self.in_dim))) > HERM_TOL:
            raise ValueError("dilation map is not an isometry within 1e-10")
        object.__setattr__(self, "isometry", _frozen(u))


def apply_channel(t: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Channel output sum_i A_i rho A_i'."""
    if rho.dim != t.in_dim:
        raise ValueError(f"state dimension {rho.dim} != channel input {t.in_dim}")
    out = apply_channel_matrix(t, rho.matrix)
    return DensityMatrix(out, (t.out_dim,))


def apply_channel_matrix(t: KrausChannel, m: np.ndarray) -> np.ndarray:
    """Raw-array channel application (no validation of the input)."""
    out = np.zeros((t.out_dim, t.out_dim), dtype=complex)
    for a in t.kraus:
        out += a @ m @ a.conj().T
    return (out + out.conj().T) / 2


def stinespring_from_kraus(t: KrausChannel) -> StinespringDilation:
    """Canonical dilation stacking the Kraus blocks, environment index first.

    Kraus operators of negligible norm are dropped so the environment
    carries no spurious dimensions.
    """
    ops = [a for a in t.kraus if np.linalg.norm(a, 2) >= KRAUS_PRUNE_TOL]
    if not ops:
        raise ValueError("all Kraus operators are numerically zero")
    u = np.vstack(ops)
    k = len(ops)
    basis = SubspaceBasis(u, (k, t.out_dim))
    return StinespringDilation(
        isometry=u, env_dim=k, out_dim=t.out_dim, in_dim=t.in_dim, image_basis=basis
    )


def channel_from_subspace(k: SubspaceBasis, traced: int) -> KrausChannel:
    """Channel rho -> Tr_traced(V rho V') for the embedding V given by the basis."""
    if len(k.dims) != 2:
        raise ValueError("subspace must live in a bipartite ambient space")
    if traced not in (0, 1):
        raise ValueError("traced factor index must be 0 or 1")
    d0, d1 = k.dims
    r = k.subspace_dim
    cols = k.columns.T.reshape(r, d0, d1)  # cols[j] = j-th basis vector as a d0 x d1 block
    d_env = k.dims[traced]
    ops = []
    for e in range(d_env):
        a = cols[:, e, :].T if traced == 0 else cols[:, :, e].T
        if np.linalg.norm(a, 2) >= KRAUS_PRUNE_TOL:
            ops.append(a)
    out_dim = d1 if traced == 0 else d0
    return KrausChannel(tuple(ops), in_dim=r, out_dim=out_dim)


def choi_matrix(t: KrausChannel) -> DensityMatrix:
    """Unit-trace Choi state (1 (x) T) applied to the maximally entangled state."""
    d = t.in_dim
    c = np.zeros((d * t.out_dim, d * t.out_dim), dtype=complex)
    for a in t.kraus:
        w = a.T.reshape(-1)  # (1 (x) A) sum_i |ii>, ordering (input, output)
        c += np.outer(w, w.conj())
    return DensityMatrix(c / d, (d, t.out_dim))


def haar_random_pure(dims: Sequence[int], seed) -> PureState:
    """Haar-distributed pure state (normalized standard complex Gaussian)."""
    rng = _rng(seed)
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(z / np.linalg.norm(z), dims)


def random_density(dims: Sequence[int], rank: int, seed) -> DensityMatrix:
    """Induced-measure random state: partial trace of a Haar pure state over a rank-dim ancilla."""
    rng = _rng(seed)
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    if not 1 <= rank <= n:
        raise ValueError(f"rank must be in 1..{n}, got {rank}")
    z = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    z /= np.linalg.norm(z)
    rho = z @ z.conj().T
    return DensityMatrix((rho + rho.conj().T) / 2, dims)


def maximally_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_i |ii> on a d (x) d space."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1 / np.sqrt(d)
    return PureState(v, (d, d))
