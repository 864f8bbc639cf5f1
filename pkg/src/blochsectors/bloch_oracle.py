"""Brute-force Bloch expansion in a generalized Gell-Mann product basis.

This is the slow ground truth: every one of the d^(2N) coefficients
r_{j1...jN} = Tr[(g_j1 (x) ... (x) g_jN) rho] is computed, and sector lengths
are read off by counting non-identity indices. Local matrices are normalized
to Tr(g_j^dagger g_k) = d delta_jk, so g_0 is the plain identity and the
qubit basis is (1, X, Y, Z).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, SizeError
from .qstate import PureState
from .sector_engine import SectorDistribution

MAX_COEFFICIENTS = 10**8
DROP_TOL = 1e-12
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class LocalBasis:
    local_dim: int
    matrices: np.ndarray = field(repr=False)  # (d*d, d, d); matrices[0] is the identity

    def __len__(self):
        return len(self.matrices)


def gell_mann_basis(d: int) -> LocalBasis:
    """Identity followed by the d^2-1 generalized Gell-Mann matrices.

    Order: symmetric and antisymmetric off-diagonal pairs (j<k) interleaved,
    then the diagonal family. For d=2 this gives exactly (1, X, Y, Z). All
    traceless elements are scaled so that Tr(g^2) = d.
    """
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    mats = [np.eye(d, dtype=np.complex128)]
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=np.complex128)
            sym[j, k] = sym[k, j] = 1.0
            asym = np.zeros((d, d), dtype=np.complex128)
            asym[j, k], asym[k, j] = -1j, 1j
            mats += [sym, asym]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128))
    # standard normalization is Tr(g^2) = 2
    scale = np.sqrt(d / 2.0)
    out = np.array([mats[0]] + [m * scale for m in mats[1:]])
    return LocalBasis(d, out)


def conjugated_basis(basis: LocalBasis, unitary: np.ndarray) -> LocalBasis:
    """U g U^dagger for every element; still a valid orthogonal basis."""
    mats = np.einsum("ab,jbc,dc->jad", unitary, basis.matrices, unitary.conj())
    return LocalBasis(basis.local_dim, mats)


@dataclass
class BlochCoefficients:
    n_parties: int
    local_dim: int
    entries: dict[tuple[int, ...], float] = field(repr=False)

    def __getitem__(self, idx):
        return self.entries.get(tuple(idx), 0.0)

    def __len__(self):
        return len(self.entries)

    def sum_of_squares(self) -> float:
        return float(sum(v * v for v in self.entries.values()))

    def to_jsonl(self) -> str:
        """One JSON object per line, sorted by index tuple."""
        lines = [json.dumps({"idx": list(idx), "r": self.entries[idx]}) for idx in sorted(self.entries)]
        return "\n".join(lines) + ("\n" if lines else "")


def bloch_dense(state: PureState, bases: Sequence[LocalBasis] | None = None) -> np.ndarray:
    """All coefficients as a dense real array of shape (d*d,) * N."""
    n, d = state.n_parties, state.local_dim
    if d ** (2 * n) > MAX_COEFFICIENTS:
        raise SizeError(f"d^(2N) = {d ** (2 * n)} coefficients exceed the {MAX_COEFFICIENTS} guard")
    if bases is None:
        bases = [gell_mann_basis(d)] * n
    elif isinstance(bases, LocalBasis):
        bases = [bases] * n
    if len(bases) != n or any(b.local_dim != d for b in bases):
        raise DomainError("need one local basis of matching dimension per party")
    psi = state.tensor()
    t = np.multiply.outer(psi, psi.conj())  # axes: a_0..a_{n-1}, b_0..b_{n-1}
    # Contract party 0 first; after each step the leading pair is (a_j, b_j) at axes (0, n-j).
    for j in range(n):
        left = n - j
        mats = bases[j].matrices  # (J, d, d) indexed [J, b, a]
        t = np.tensordot(mats, t, axes=([2, 1], [0, left]))
        t = np.moveaxis(t, 0, -1)
    coeffs = t  # axes now: J_0 .. J_{n-1}
    imag = np.max(np.abs(coeffs.imag)) if coeffs.size else 0.0
    if imag > IMAG_TOL:
        raise ConsistencyError(f"Bloch coefficient with imaginary part {imag}")
    return np.ascontiguousarray(coeffs.real)


def bloch_expand(state: PureState, bases: Sequence[LocalBasis] | None = None) -> BlochCoefficients:
    dense = bloch_dense(state, bases)
    nz = np.argwhere(np.abs(dense) >= DROP_TOL)
    entries = {tuple(int(i) for i in idx): float(dense[tuple(idx)]) for idx in nz}
    return BlochCoefficients(state.n_parties, state.local_dim, entries)


def sectors_from_bloch(coeffs: BlochCoefficients | np.ndarray, d: int | None = None) -> SectorDistribution:
    """S_k = sum of r^2 over index tuples with exactly k non-identity entries."""
    if isinstance(coeffs, np.ndarray):
        if d is None:
            raise DomainError("local dimension required for a dense coefficient array")
        n = coeffs.ndim
        weight = np.zeros(coeffs.shape, dtype=np.int64)
        for j in range(n):
            shape = [1] * n
            shape[j] = -1
            weight = weight + (np.arange(d * d) > 0).reshape(shape)
        sq = coeffs**2
        lengths = np.array([sq[weight == k].sum() for k in range(n + 1)])
        return SectorDistribution(n, d, lengths)
    n = coeffs.n_parties
    lengths = np.zeros(n + 1)
    for idx, r in coeffs.entries.items():
        lengths[sum(1 for j in idx if j)] += r * r
    return SectorDistribution(n, coeffs.local_dim, lengths)
