"""Dense complex linear algebra on numpy arrays.

Tensor products, partial trace/transpose over explicitly factorized
spaces, Hermitian eigendecomposition, trace norm and low-degree real
polynomial roots.  A factorization is a sequence of subsystem
dimensions listed left to right in `kron` order.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

# Tensor products beyond this total dimension are refused (desk scale).
DEFAULT_DIM_CAP = 4096

HERMITIAN_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex ndarray."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    return m


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m - m.conj().T))) <= tol * max(1.0, float(np.max(np.abs(m))))


def check_factorization(dim: int, dims: Sequence[int]) -> tuple[int, ...]:
    """Validate that the subsystem dimensions multiply to `dim`."""
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != dim:
        raise ValueError(f"factorization {dims} does not match dimension {dim}")
    return dims


def kron(a, b, max_dim: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Tensor product with standard (left factor major) entry ordering."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] * b.shape[0] > max_dim or a.shape[1] * b.shape[1] > max_dim:
        raise ValueError(
            f"kron result {a.shape[0] * b.shape[0]}x{a.shape[1] * b.shape[1]} "
            f"exceeds the dimension cap {max_dim}"
        )
    return np.kron(a, b)


def kron_all(*matrices, max_dim: int = DEFAULT_DIM_CAP) -> np.ndarray:
    out = as_matrix(matrices[0])
    for m in matrices[1:]:
        out = kron(out, m, max_dim=max_dim)
    return out


def _as_index_set(which, n: int) -> tuple[int, ...]:
    if isinstance(which, (int, np.integer)):
        which = (int(which),)
    idx = tuple(sorted(int(i) for i in which))
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate subsystem indices {which}")
    if any(i < 0 or i >= n for i in idx):
        raise ValueError(f"subsystem index out of range in {which} (n={n})")
    return idx


def partial_trace(m, dims: Sequence[int], traced: int | Iterable[int]) -> np.ndarray:
    """Trace out the given subsystems, keeping the rest in order."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("partial trace needs a square matrix")
    dims = check_factorization(m.shape[0], dims)
    n = len(dims)
    traced = _as_index_set(traced, n)
    kept = [i for i in range(n) if i not in traced]
    t = m.reshape(dims + dims)
    # contract each traced row leg with its column leg
    for k, i in enumerate(traced):
        t = np.trace(t, axis1=i - k, axis2=i - k + n - k)
    d_kept = int(np.prod([dims[i] for i in kept])) if kept else 1
    return t.reshape(d_kept, d_kept)


def partial_transpose(m, dims: Sequence[int], transposed: int | Iterable[int]) -> np.ndarray:
    """Transpose the given tensor factors, leaving the others alone."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("partial transpose needs a square matrix")
    dims = check_factorization(m.shape[0], dims)
    n = len(dims)
    transposed = _as_index_set(transposed, n)
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    for i in transposed:
        axes[i], axes[i + n] = axes[i + n], axes[i]
    return t.transpose(axes).reshape(m.shape)


def permute_factors(a, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a vector or square matrix.

    `order[k]` is the old position of the factor that ends up at
    position k, so order=(1, 0) swaps a bipartite pair.
    """
    a = np.asarray(a, dtype=complex)
    order = tuple(int(i) for i in order)
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of 0..{n - 1}")
    if a.ndim == 1:
        dims = check_factorization(a.shape[0], dims)
        return a.reshape(dims).transpose(order).reshape(-1)
    a = as_matrix(a)
    dims = check_factorization(a.shape[0], dims)
    axes = list(order) + [i + n for i in order]
    return a.reshape(dims + dims).transpose(axes).reshape(a.shape)


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (real, ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    m = as_matrix(m)
    if not is_hermitian(m, tol=1e-10):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w, v


def trace_norm(m) -> float:
    """Sum of singular values; for Hermitian input, sum of |eigenvalues|."""
    m = as_matrix(m)
    if m.shape[0] == m.shape[1] and is_hermitian(m, tol=1e-10):
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        return float(np.sum(np.abs(w)))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def real_poly_roots(coeffs) -> np.ndarray:
    """All roots (with multiplicity) of a real polynomial of degree <= 4.

    Coefficients are highest degree first.  Roots come from the
    companion-matrix eigenvalues, then a single Newton step apiece.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size < 1:
        raise ValueError("coefficients must be a nonempty 1-d array")
    if c.size > 5:
        raise ValueError(f"degree {c.size - 1} > 4 is not supported")
    if c[0] == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    if c.size == 1:
        return np.array([], dtype=complex)
    roots = np.roots(c)
    deriv = np.polyder(c)
    fp = np.polyval(deriv, roots)
    f = np.polyval(c, roots)
    safe = np.abs(fp) > 1e-8 * max(1.0, float(np.max(np.abs(c))))
    roots = np.where(safe, roots - f / np.where(safe, fp, 1.0), roots)
    return roots
