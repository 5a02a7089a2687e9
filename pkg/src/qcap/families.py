"""Channel and subspace families with known closed-form capacities and costs.

Parameters may be `fractions.Fraction` (or int) as well as float; when
every entry is exact the admissibility test and the gap polynomial
coefficients are computed in exact rational arithmetic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import measures, quantum

SIGMA = {
    "0": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _is_exact(*values) -> bool:
    return all(isinstance(v, Rational) for v in values)


@dataclass(frozen=True)
class PauliParams:
    """Mixing weights (p0, px, py, pz) of a Pauli (generalized depolarizing) qubit channel."""

    p0: float | Fraction
    px: float | Fraction
    py: float | Fraction
    pz: float | Fraction

    def __post_init__(self):
        vals = (self.p0, self.px, self.py, self.pz)
        if _is_exact(*vals):
            if any(v < 0 for v in vals) or sum(vals) != 1:
                raise ValueError(f"weights {vals} are not a probability vector")
        else:
            f = [float(v) for v in vals]
            if min(f) < -1e-12 or abs(sum(f) - 1.0) > 1e-12:
                raise ValueError(f"weights {vals} are not a probability vector")

    @property
    def admissible(self) -> bool:
        """Canonical axis ordering: p0+pz-px-py >= |p0+py-px-pz| and >= |p0+px-py-pz|."""
        lhs = self.p0 + self.pz - self.px - self.py
        r1 = self.p0 + self.py - self.px - self.pz
        r2 = self.p0 + self.px - self.py - self.pz
        if _is_exact(self.p0, self.px, self.py, self.pz):
            return lhs >= abs(r1) and lhs >= abs(r2)
        lhs, r1, r2 = float(lhs), float(r1), float(r2)
        return lhs >= abs(r1) - 1e-12 and lhs >= abs(r2) - 1e-12

    def as_floats(self) -> tuple[float, float, float, float]:
        return float(self.p0), float(self.px), float(self.py), float(self.pz)


def pauli_channel(p: PauliParams) -> quantum.KrausChannel:
    """rho -> sum_s p_s sigma_s rho sigma_s with Kraus operators sqrt(p_s) sigma_s."""
    if not p.admissible:
        warnings.warn("Pauli weights are outside the canonical axis ordering; "
                      "closed forms for this family do not apply", UserWarning,
                      stacklevel=2)
    p0, px, py, pz = p.as_floats()
    ops = tuple(np.sqrt(max(w, 0.0)) * SIGMA[s]
                for w, s in zip((p0, px, py, pz), "0xyz"))
    return quantum.KrausChannel(ops, in_dim=2, out_dim=2)


def pauli_states(p: PauliParams):
    """The two orthogonal dilation images of the basis states, and their mixture.

    Vectors live in environment (x) output order, environment basis
    (|0>,|x>,|y>,|z>); the displayed opposite ordering is a factor swap
    away and has identical entanglement.  Returns (psi, psi_perp, rho)
    with rho the equal mixture, the optimal capacity input.
    """
    p0, px, py, pz = (np.sqrt(max(v, 0.0)) for v in p.as_floats())
    psi = np.zeros(8, dtype=complex)
    psi[0], psi[3], psi[5], psi[6] = p0, px, 1j * py, pz
    perp = np.zeros(8, dtype=complex)
    perp[1], perp[2], perp[4], perp[7] = p0, px, -1j * py, -pz
    psi_t = quantum.PureState(psi, (4, 2))
    psi_perp = quantum.PureState(perp, (4, 2))
    rho = (psi_t.projector() + psi_perp.projector()) / 2
    return psi_t, psi_perp, quantum.DensityMatrix(rho, (4, 2))


def pauli_ec_closed_form(p: PauliParams) -> float:
    """Entanglement cost H(p0+pz, 1-p0-pz) of any mixture of the two dilation images.

    Valid for admissible weights, and also on the p0+pz = px+py = 1/2
    family where the same closed form extends; rejected elsewhere.
    """
    balanced = (
        p.p0 + p.pz == Fraction(1, 2) == p.px + p.py
        if _is_exact(p.p0, p.px, p.py, p.pz)
        else abs(float(p.p0 + p.pz) - 0.5) <= 1e-12 and abs(float(p.px + p.py) - 0.5) <= 1e-12
    )
    if not (p.admissible or balanced):
        raise ValueError("closed form needs admissible weights or p0+pz = px+py = 1/2")
    return measures.binary_entropy(float(p.p0 + p.pz))


def random_admissible_pauli(seed) -> PauliParams:
    """Uniform simplex sample relabeled so the two largest weights sit on (p0, pz)."""
    rng = quantum._rng(seed)
    x = np.sort(rng.dirichlet(np.ones(4)))[::-1]
    return PauliParams(p0=float(x[0]), pz=float(x[1]), px=float(x[2]), py=float(x[3]))


@dataclass(frozen=True)
class DepolarizingParams:
    """Dimension d and mixing parameter of rho -> lam rho + (1-lam) 1/d."""

    d: int
    lam: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("dimension must be at least 2")
        lo = -1.0 / (self.d ** 2 - 1)
        if not lo - 1e-12 <= self.lam <= 1 + 1e-12:
            raise ValueError(f"lambda {self.lam} outside the completely positive range "
                             f"[{lo}, 1]")

    @property
    def p0(self) -> float:
        return self.lam + (1 - self.lam) / self.d ** 2


def weyl_basis(d: int) -> list[np.ndarray]:
    """Shift/clock unitaries X^a Z^b, a nice error basis with the identity first."""
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    out = []
    xa = np.eye(d, dtype=complex)
    for _ in range(d):
        zb = np.eye(d, dtype=complex)
        for _ in range(d):
            out.append(xa @ zb)
            zb = zb @ z
        xa = xa @ x
    return out


def depolarizing_channel(p: DepolarizingParams) -> quantum.KrausChannel:
    """Mixture of the identity and the uniform non-identity Weyl rotations."""
    basis = weyl_basis(p.d)
    w_rest = np.sqrt(max(1 - p.p0, 0.0) / (p.d ** 2 - 1))
    ops = [np.sqrt(max(p.p0, 0.0)) * basis[0]] + [w_rest * u for u in basis[1:]]
    return quantum.KrausChannel(tuple(ops), in_dim=p.d, out_dim=p.d)


def depolarizing_smin(p: DepolarizingParams) -> float:
    """Minimal output entropy H(q, 1-q) + q log2(d-1) with q = (1-1/d)(1-lam)."""
    q = (1 - 1 / p.d) * (1 - p.lam)
    extra = q * np.log2(p.d - 1) if p.d > 2 else 0.0
    return measures.binary_entropy(q) + float(extra)


def identity_channel(d: int) -> quantum.KrausChannel:
    return quantum.KrausChannel((np.eye(d, dtype=complex),), in_dim=d, out_dim=d)


def tensor_channel(t1: quantum.KrausChannel, t2: quantum.KrausChannel) -> quantum.KrausChannel:
    """Parallel composition with Kraus operators A_i (x) B_j."""
    ops = tuple(np.kron(a, b) for a in t1.kraus for b in t2.kraus)
    return quantum.KrausChannel(ops, in_dim=t1.in_dim * t2.in_dim,
                                out_dim=t1.out_dim * t2.out_dim)


def _basis_vector(entries: list[tuple[int, int, complex]], dims: tuple[int, int]) -> np.ndarray:
    v = np.zeros(dims[0] * dims[1], dtype=complex)
    for i, j, amp in entries:
        v[i * dims[1] + j] = amp
    return v


def vdc_subspace() -> quantum.SubspaceBasis:
    """Three-dimensional subspace of C3 (x) C6 whose trace over C6 gives rho -> (1 + rho^T)/4.

    Every state supported on it has entanglement of formation
    H(1/2, 1/4, 1/4) = 3/2, and the induced channel is
    entanglement breaking.
    """
    h, r2 = 0.5, np.sqrt(2) / 2
    cols = [
        _basis_vector([(1, 2, h), (2, 1, h), (0, 3, r2)], (3, 6)),
        _basis_vector([(2, 0, h), (0, 2, h), (1, 4, r2)], (3, 6)),
        _basis_vector([(0, 1, h), (1, 0, h), (2, 5, r2)], (3, 6)),
    ]
    return quantum.SubspaceBasis(np.column_stack(cols), (3, 6))


def vdc_family(weight: float) -> quantum.SubspaceBasis:
    """Superpositions interpolating toward a constant channel, in C3 (x) C15.

    The second factor is C6 + C9 with the C6 block in coordinates 0-5.
    The C9 part tensors the maximally entangled pair with a label ket,
    so tracing it gives the maximally mixed state; the induced channel
    is p * (1/3) + (1-p) rho^T with p = 1 - weight/4.
    """
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {weight}")
    c, s = np.sqrt(weight), np.sqrt(1.0 - weight)
    base = vdc_subspace().columns.reshape(3, 6, 3)  # (first factor, C6 index, column)
    cols = []
    for j in range(3):
        v = np.zeros((3, 15), dtype=complex)
        v[:, :6] = c * base[:, :, j]
        for i in range(3):
            v[i, 6 + 3 * i + j] = s / np.sqrt(3)
        cols.append(v.reshape(-1))
    return quantum.SubspaceBasis(np.column_stack(cols), (3, 15))


def antisym_subspace() -> quantum.SubspaceBasis:
    """Antisymmetric subspace of C3 (x) C3; every unit vector has entanglement exactly 1."""
    r = 1 / np.sqrt(2)
    cols = [
        _basis_vector([(1, 2, r), (2, 1, -r)], (3, 3)),
        _basis_vector([(2, 0, r), (0, 2, -r)], (3, 3)),
        _basis_vector([(0, 1, r), (1, 0, -r)], (3, 3)),
    ]
    return quantum.SubspaceBasis(np.column_stack(cols), (3, 3))


def antisym_mixed_state() -> quantum.DensityMatrix:
    """Maximally mixed state on the antisymmetric subspace (formation 1, cost 1)."""
    k = antisym_subspace()
    rho = (k.columns @ k.columns.conj().T) / 3
    return quantum.DensityMatrix(rho, (3, 3))


def parse_number(text: str) -> Fraction:
    """Parse '1/6', '0.5' or '2' exactly."""
    return Fraction(text.strip())


def _parse_pauli(arg: str) -> PauliParams:
    parts = [parse_number(x) for x in arg.split(",")]
    if len(parts) != 4:
        raise ValueError("pauli parameters are p0,px,py,pz")
    return PauliParams(*parts)


def example_channel(name: str) -> quantum.KrausChannel:
    """Registry of named channels: identity:d, pauli:p0,px,py,pz, depol:d,lam, vdc[:w], antisym."""
    kind, _, arg = name.partition(":")
    if kind == "identity":
        return identity_channel(int(arg))
    if kind == "pauli":
        return pauli_channel(_parse_pauli(arg))
    if kind == "depol":
        d_text, _, lam_text = arg.partition(",")
        return depolarizing_channel(
            DepolarizingParams(int(d_text), float(parse_number(lam_text))))
    if kind == "vdc":
        basis = vdc_family(float(parse_number(arg))) if arg else vdc_subspace()
        return quantum.channel_from_subspace(basis, traced=1)
    if kind == "antisym":
        return quantum.channel_from_subspace(antisym_subspace(), traced=0)
    raise ValueError(f"unknown example channel {name!r}")


def example_state(name: str) -> tuple[quantum.DensityMatrix, int]:
    """Registry of named bipartite states; returns (state, leading factors on side A)."""
    kind, _, arg = name.partition(":")
    if kind == "bell":
        return quantum.maximally_entangled(2).density(), 1
    if kind == "rho_T":
        return pauli_states(_parse_pauli(arg))[2], 1
    if kind == "antisym-mixed":
        return antisym_mixed_state(), 1
    raise ValueError(f"unknown example state {name!r}")
