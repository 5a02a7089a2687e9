"""Cost-versus-distillable-entanglement gap for the Pauli-channel family.

The partial transpose of the optimal mixture rho_T splits into two 4x4
blocks sharing the characteristic polynomial f(2z), where

    f(z) = z^4 - z^3 + 4(p0 px py + p0 px pz + p0 py pz + px py pz) z
           - 16 p0 px py pz.

f(2z) = 0 has at most one negative root z0; the trace norm of the
partial transpose is 1 - 4 z0, and the log-negativity bound on the
distillable entanglement falls below the closed-form entanglement cost
exactly when f evaluated at -(2^Ec - 1)/2 is positive.  The region scan
maps this condition over the weight simplex, and the consistency check
referees the polynomial route against direct eigendecomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import eof as eof_mod
from . import linalg, measures, quantum
from .families import PauliParams, pauli_states
from ._threads import run_indexed

# Index sets of the two invariant 4x4 blocks of rho_T^Gamma in the
# (environment x output) product basis, index = 2*env + out.
BLOCK_A = (0, 3, 5, 6)
BLOCK_B = (1, 2, 4, 7)

NEG_ROOT_TOL = 1e-12
REAL_ROOT_TOL = 1e-8


@dataclass(frozen=True)
class GapRecord:
    """One scanned weight point: closed-form cost, log-negativity, gap flag."""

    px: float
    py: float
    pz: float
    p0: float
    admissible: bool
    ec_closed_form: float
    logneg: float
    f_at_threshold: float
    gap: bool


def gap_polynomial(p: PauliParams):
    """Coefficients [1, -1, 0, 4 e3, -16 e4] of f, exact when the weights are exact."""
    p0, px, py, pz = p.p0, p.px, p.py, p.pz
    e3 = p0 * px * py + p0 * px * pz + p0 * py * pz + px * py * pz
    e4 = p0 * px * py * pz
    one = Fraction(1) if isinstance(e3, (Fraction, int)) else 1.0
    return [one, -one, 0 * one, 4 * e3, -16 * e4]


def _negative_root(p: PauliParams) -> float | None:
    """The unique negative root of f(2z) = 0, or None when the spectrum is nonnegative."""
    c = [float(x) for x in gap_polynomial(p)]
    coeffs = [16.0 * c[0], 8.0 * c[1], 4.0 * c[2], 2.0 * c[3], c[4]]
    roots = linalg.real_poly_roots(coeffs)
    real = roots[np.abs(roots.imag) <= REAL_ROOT_TOL * (1.0 + np.abs(roots.real))].real
    neg = np.sort(real[real < -NEG_ROOT_TOL])
    if neg.size == 0:
        return None
    if neg.size > 1 and neg[-1] - neg[0] > 1e-9:
        raise RuntimeError(f"expected a unique negative root, got {neg}")
    return float(neg[0])


def gap_trace_norm(p: PauliParams) -> float:
    """Trace norm of the partial transpose of rho_T, via 1 - 4 z0."""
    z0 = _negative_root(p)
    return 1.0 if z0 is None else 1.0 - 4.0 * z0


def gap_condition(p: PauliParams) -> GapRecord:
    """Evaluate the gap flag f(-(2^Ec - 1)/2) > 0 at one weight point.

    The closed-form cost H(p0+pz, 1-p0-pz) is evaluated for any weight
    vector; it is meaningful on admissible points and on the
    p0+pz = px+py = 1/2 family, and the record carries the
    admissibility flag so consumers can filter.  Weights with a
    positive partial transpose get logneg = 0 and gap = False.
    """
    p0, px, py, pz = p.as_floats()
    ec = measures.binary_entropy(p0 + pz)
    threshold = -(2.0 ** ec - 1.0) / 2.0
    fval = float(np.polyval([float(x) for x in gap_polynomial(p)], threshold))
    z0 = _negative_root(p)
    if z0 is None:
        logneg, gap = 0.0, False
    else:
        logneg = math.log2(1.0 - 4.0 * z0)
        gap = fval > 0.0
    return GapRecord(px=px, py=py, pz=pz, p0=p0, admissible=p.admissible,
                     ec_closed_form=ec, logneg=logneg, f_at_threshold=fval, gap=gap)


CSV_HEADER = "px,py,pz,p0,admissible,ec_bits,logneg_bits,f_threshold,gap"


def _csv_row(r: GapRecord) -> str:
    def g(x: float) -> str:
        return f"{x:.9g}"

    def b(x: bool) -> str:
        return "true" if x else "false"

    return (f"{g(r.px)},{g(r.py)},{g(r.pz)},{g(r.p0)},{b(r.admissible)},"
            f"{g(r.ec_closed_form)},{g(r.logneg)},{g(r.f_at_threshold)},{b(r.gap)}")


def gap_region_scan(grid_step: float, out=None) -> list[GapRecord]:
    """Scan (px, py, pz) over the simplex grid with p0 = 1 - px - py - pz >= 0.

    Emits one record per grid point in lexicographic order, admissible
    or not (the admissibility column lets consumers drop points outside
    the canonical ordering).  Boundary points with equality in the
    ordering test count as admissible.  Writes the CSV to `out` when
    given; output is deterministic byte for byte for a fixed step.
    """
    if not 0.0 < grid_step <= 0.1:
        raise ValueError(f"grid step must lie in (0, 0.1], got {grid_step}")
    n = int(math.floor(1.0 / grid_step + 1e-9))
    points = []
    for i in range(n + 1):
        for j in range(n + 1):
            for k in range(n + 1):
                px, py, pz = i * grid_step, j * grid_step, k * grid_step
                rest = px + py + pz
                if rest <= 1.0 + 1e-12:
                    points.append((px, py, pz, max(1.0 - rest, 0.0)))

    def one(idx: int) -> GapRecord:
        px, py, pz, p0 = points[idx]
        return gap_condition(PauliParams(p0=p0, px=px, py=py, pz=pz))

    records = run_indexed(one, len(points))
    if out is not None:
        out.write(CSV_HEADER + "\n")
        for r in records:
            out.write(_csv_row(r) + "\n")
    return records


@dataclass(frozen=True)
class GapConsistencyReport:
    """Referee record: direct eigendecomposition against the polynomial route."""

    params: PauliParams
    ok: bool
    eigenvalue_mismatch: float
    trace_norm_direct: float
    trace_norm_root: float
    block_coupling: float
    block_eigenvalues: tuple[float, ...]
    message: str


def gap_consistency_check(p: PauliParams) -> GapConsistencyReport:
    """Check that rho_T^Gamma's spectrum is the f(2z) = 0 roots, each twice.

    Builds rho_T explicitly, partial-transposes the output factor,
    compares the eigenvalue multiset with the doubled polynomial roots,
    compares the direct trace norm with 1 - 4 z0, and verifies the
    two-block structure.
    """
    _, _, rho = pauli_states(p)
    gamma = linalg.partial_transpose(rho.matrix, rho.dims, 1)
    eigs = np.sort(np.linalg.eigvalsh(gamma))

    c = [float(x) for x in gap_polynomial(p)]
    roots = linalg.real_poly_roots([16.0 * c[0], 8.0 * c[1], 4.0 * c[2], 2.0 * c[3], c[4]])
    if np.max(np.abs(roots.imag)) > REAL_ROOT_TOL * (1.0 + np.max(np.abs(roots.real))):
        return GapConsistencyReport(p, False, np.inf, float("nan"), float("nan"),
                                    float("nan"), (), "polynomial roots are not real")
    doubled = np.sort(np.concatenate([roots.real, roots.real]))
    mismatch = float(np.max(np.abs(doubled - eigs)))

    tn_direct = float(np.abs(eigs).sum())
    z0 = _negative_root(p)
    tn_root = 1.0 if z0 is None else 1.0 - 4.0 * z0

    coupling = float(np.max(np.abs(gamma[np.ix_(BLOCK_A, BLOCK_B)])))
    block = np.sort(np.linalg.eigvalsh(gamma[np.ix_(BLOCK_A, BLOCK_A)]))

    problems = []
    if mismatch > 1e-8:
        problems.append(f"eigenvalue multiset off by {mismatch:.3e}")
    if abs(tn_direct - tn_root) > 1e-9:
        problems.append(f"trace norms differ: {tn_direct!r} vs {tn_root!r}")
    if coupling > 1e-10:
        problems.append(f"blocks couple at {coupling:.3e}")
    return GapConsistencyReport(
        params=p, ok=not problems, eigenvalue_mismatch=mismatch,
        trace_norm_direct=tn_direct, trace_norm_root=tn_root,
        block_coupling=coupling, block_eigenvalues=tuple(float(x) for x in block),
        message="; ".join(problems) if problems else "consistent",
    )


@dataclass(frozen=True)
class SuperadditivityCandidate:
    """A sample whose formation upper bound undercut the marginal sum; expected never."""

    index: int
    kind: str
    roof_bound: float
    marginal_sum: float
    margin: float
    state: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "state", quantum._frozen(self.state))


def superadditivity_search(samples: int, seed: int = 0, roof_restarts: int = 3,
                           roof_tol: float = 1e-6, roof_max_iter: int = 200,
                           margin: float = 1e-4) -> list[SuperadditivityCandidate]:
    """Hunt for violations of formation superadditivity on (2x2) (x) (2x2).

    Alternates Haar-random pure states and rank-2 induced states on the
    four-qubit space.  For each, the convex-roof upper bound across the
    joint environments-versus-outputs cut is compared with the exact
    two-qubit formation of the two marginals; a candidate is reported
    when the bound undercuts the marginal sum by more than `margin`.
    Candidates are surfaced, never suppressed; the expected result is
    an empty list.
    """
    dims = (2, 2, 2, 2)
    cut = (0, 2)

    def one(i: int) -> SuperadditivityCandidate | None:
        rng = quantum.derived_rng(seed, i)
        if i % 2 == 0:
            kind = "pure"
            rho = haar_pure_density(dims, rng)
        else:
            kind = "rank2"
            rho = quantum.random_density(dims, 2, rng)
        roof = eof_mod.eof_convex_roof(rho, cut=cut, restarts=roof_restarts,
                                       seed=seed * 100003 + i, tol=roof_tol,
                                       max_iter=roof_max_iter)
        left = linalg.partial_trace(rho.matrix, dims, (2, 3))
        right = linalg.partial_trace(rho.matrix, dims, (0, 1))
        marginal_sum = eof_mod.eof_wootters(left) + eof_mod.eof_wootters(right)
        if roof.value + margin < marginal_sum:
            return SuperadditivityCandidate(index=i, kind=kind, roof_bound=roof.value,
                                            marginal_sum=marginal_sum,
                                            margin=marginal_sum - roof.value,
                                            state=rho.matrix)
        return None

    return [c for c in run_indexed(one, samples) if c is not None]


def haar_pure_density(dims, rng) -> quantum.DensityMatrix:
    psi = quantum.haar_random_pure(dims, rng)
    return psi.density()
