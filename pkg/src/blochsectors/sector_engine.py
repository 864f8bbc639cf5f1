"""Fast sector lengths from a table of subset purities, plus operator-level maps.

Every sector length of a pure state follows from the 2^N purities
Tr(rho_B^2): the full-support sector of the reduction to A is
d^|A| * sum_{B subset A} (-1/d)^{|A|-|B|} Tr(rho_B^2), and S_k sums that over
all |A| = k. Operator routines (maps of the form prod_j [a_j Tr_j(.) (x) 1_j -
b_j id]) materialize d^N x d^N matrices and are only meant for small checks.

Sector lengths are always reported as the squared Hilbert-Schmidt length S_k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, SizeError
from .qstate import DensityOperator, PureState, mask_to_parties, purity_from_amplitudes, reduce

MAX_TABLE_PARTIES = 24
MAX_OPERATOR_SIDE = 4096  # d^N for routines that build full operators
NEG_TOL = 1e-9


def popcounts(n: int) -> np.ndarray:
    """popcount of every mask in range(2**n)."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        counts[1 << j: 1 << (j + 1)] = counts[: 1 << j] + 1
    return counts


@dataclass
class SectorDistribution:
    """(S_0, ..., S_N) for an N-party state of local dimension d."""

    n_parties: int
    local_dim: int
    lengths: np.ndarray

    def __post_init__(self):
        s = np.array(self.lengths, dtype=float)
        if s.shape != (self.n_parties + 1,):
            raise DomainError(f"expected {self.n_parties + 1} sector lengths, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ConsistencyError(f"non-finite sector lengths {s}")
        tol = NEG_TOL * max(1.0, float(self.local_dim) ** self.n_parties)
        if np.any(s < -tol):
            raise ConsistencyError(f"negative sector length beyond rounding: {s}")
        s[s < 0] = 0.0
        self.lengths = s

    @property
    def n(self) -> int:
        return self.n_parties

    @property
    def d(self) -> int:
        return self.local_dim

    def __getitem__(self, k):
        return self.lengths[k]

    def __len__(self):
        return len(self.lengths)

    def total(self) -> float:
        return float(self.lengths.sum())

    def tolist(self) -> list[float]:
        return [float(x) for x in self.lengths]


@dataclass
class PurityTable:
    n_parties: int
    local_dim: int
    values: np.ndarray = field(repr=False)

    def __getitem__(self, mask: int) -> float:
        return float(self.values[mask])


def _check_table_size(n: int) -> None:
    if n > MAX_TABLE_PARTIES:
        raise SizeError(f"purity table over 2**{n} subsets exceeds the N <= {MAX_TABLE_PARTIES} guard")


def purity_table_batch(psi: np.ndarray, n: int, d: int) -> np.ndarray:
    """Purities of all 2^n subsets; ``psi`` of shape (d**n,) or (S, d**n)."""
    _check_table_size(n)
    full = (1 << n) - 1
    out = np.empty(psi.shape[:-1] + (1 << n,))
    for mask in range(1 << n):
        comp = full ^ mask
        if comp < mask:
            out[..., mask] = out[..., comp]
        else:
            out[..., mask] = purity_from_amplitudes(psi, n, d, mask)
    return out


def purity_table(state: PureState) -> PurityTable:
    values = purity_table_batch(state.amplitudes, state.n_parties, state.local_dim)
    return PurityTable(state.n_parties, state.local_dim, values)


def subset_transform(values: np.ndarray, n: int, weight: float) -> np.ndarray:
    """f[A] = sum_{B subset A} weight^{|A|-|B|} values[B], along the last axis.

    One pass per party: for masks containing party j, add ``weight`` times the
    entry with j removed.
    """
    f = np.array(values, dtype=float, copy=True)
    shape = f.shape[:-1]
    for j in range(n):
        view = f.reshape(shape + (-1, 2, 1 << j))
        view[..., 1, :] += weight * view[..., 0, :]
    return f


def sectors_from_table(values: np.ndarray, n: int, d: int) -> np.ndarray:
    """Sector lengths (..., n+1) from purity table(s) (..., 2**n)."""
    f = subset_transform(values, n, -1.0 / d)
    pc = popcounts(n)
    scale = float(d) ** pc
    weighted = f * scale
    out = np.zeros(f.shape[:-1] + (n + 1,))
    for k in range(n + 1):
        out[..., k] = weighted[..., pc == k].sum(axis=-1)
    return out


def sectors_from_purities(state: PureState) -> SectorDistribution:
    n, d = state.n_parties, state.local_dim
    table = purity_table_batch(state.amplitudes, n, d)
    return SectorDistribution(n, d, sectors_from_table(table, n, d))


def n_sector_from_table(values: np.ndarray, n: int, d: int) -> np.ndarray:
    """S_N = d^N sum_B (-1/d)^{N-|B|} Tr(rho_B^2)."""
    pc = popcounts(n)
    coeff = float(d) ** n * (-1.0 / d) ** (n - pc)
    return values @ coeff


def n_sector_via_projector(state: PureState | PurityTable) -> float:
    if isinstance(state, PureState):
        state = purity_table(state)
    value = float(n_sector_from_table(state.values, state.n_parties, state.local_dim))
    if value < -NEG_TOL * max(1.0, float(state.local_dim) ** state.n_parties):
        raise ConsistencyError(f"negative N-sector {value}")
    return max(value, 0.0)


def n_sector_batch(psi: np.ndarray, n: int, d: int) -> np.ndarray:
    """S_N for a batch of amplitude vectors of shape (S, d**n)."""
    return n_sector_from_table(purity_table_batch(psi, n, d), n, d)


def trace_r_from_table(values: np.ndarray, n: int, party: int) -> np.ndarray:
    """Tr R_[party] = sum over subsets A of the other parties of (-1)^|A| Tr(rho_A^2).

    Follows from Tr[rho (Tr_{A-bar} rho (x) 1)] = Tr(rho_A^2) term by term of the
    universal inversion.
    """
    pc = popcounts(n)
    masks = np.arange(1 << n)
    sign = np.where(pc % 2 == 0, 1.0, -1.0)
    sign[(masks >> party) & 1 == 1] = 0.0
    return values @ sign


# --- operator-level maps ------------------------------------------------------

@dataclass(frozen=True)
class InversionMap:
    """prod_j [alpha_j Tr_j(.) (x) 1_j - beta_j id] with per-party coefficients."""

    alphas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        if len(self.alphas) != len(self.betas):
            raise DomainError("alphas and betas must have equal length")
        if not all(np.isfinite(self.alphas)) or not all(np.isfinite(self.betas)):
            raise DomainError("inversion coefficients must be finite")

    @property
    def n_parties(self) -> int:
        return len(self.alphas)

    @classmethod
    def uniform(cls, n: int, alpha: float, beta: float) -> "InversionMap":
        return cls((alpha,) * n, (beta,) * n)

    @classmethod
    def projector(cls, n: int, d: int) -> "InversionMap":
        """Projector onto the full-support (N-)sector."""
        return cls.uniform(n, -1.0 / d, -1.0)

    @classmethod
    def q_map(cls, n: int, d: int) -> "InversionMap":
        return cls.uniform(n, 1.0, 1.0 / d)

    @classmethod
    def standard_inversion(cls, n: int) -> "InversionMap":
        return cls.uniform(n, 1.0, 1.0)


def _check_operator_side(side: int) -> None:
    if side > MAX_OPERATOR_SIDE:
        raise SizeError(f"operator of side {side} exceeds the {MAX_OPERATOR_SIDE} guard")


def trace_and_embed(matrix: np.ndarray, m: int, d: int, parties: Sequence[int]) -> np.ndarray:
    """(Tr_parties M) (x) 1_parties, re-embedded in the original party order."""
    parties = sorted(set(parties))
    if not parties:
        return matrix.copy()
    t = matrix.reshape((d,) * (2 * m))
    rest = [j for j in range(m) if j not in parties]
    # move traced pairs to the end, trace them out
    order = rest + [m + j for j in rest] + parties + [m + j for j in parties]
    t = np.transpose(t, order)
    k = len(parties)
    t = t.reshape((d,) * (2 * len(rest)) + (d**k, d**k))
    reduced = np.trace(t, axis1=-2, axis2=-1)
    ident = np.eye(d**k).reshape((d,) * (2 * k))
    full = np.multiply.outer(reduced, ident)
    # current axis order: rest rows, rest cols, traced rows, traced cols
    current = rest + [m + j for j in rest] + parties + [m + j for j in parties]
    inverse = np.argsort(current)
    return np.transpose(full, inverse).reshape(d**m, d**m)


def _apply_sequential(imap: InversionMap, matrix: np.ndarray, m: int, d: int) -> np.ndarray:
    out = np.array(matrix, dtype=np.complex128)
    for j in range(m):
        out = imap.alphas[j] * trace_and_embed(out, m, d, [j]) - imap.betas[j] * out
    return out


def _apply_expansion(imap: InversionMap, matrix: np.ndarray, m: int, d: int) -> np.ndarray:
    out = np.zeros_like(matrix, dtype=np.complex128)
    for mask in range(1 << m):
        traced = mask_to_parties(mask, m)
        coeff = 1.0
        for j in range(m):
            coeff *= imap.alphas[j] if mask >> j & 1 else -imap.betas[j]
        if coeff != 0.0:
            out += coeff * trace_and_embed(matrix, m, d, traced)
    return out


def apply_inversion(imap: InversionMap, op, d: int | None = None, method: str = "expansion"):
    """Apply a generalized inversion map to an operator.

    ``op`` is a DensityOperator (result keeps its party labels) or a square
    array, in which case ``d`` is required. ``method="expansion"`` sums over
    traced subsets; ``"sequential"`` applies the single-party factors in turn.
    """
    if isinstance(op, DensityOperator):
        matrix, d = op.matrix, op.local_dim
    else:
        matrix = np.asarray(op)
        if d is None:
            raise DomainError("local dimension d required for a bare matrix")
    m = imap.n_parties
    if matrix.shape != (d**m, d**m):
        raise DomainError(f"operator shape {matrix.shape} does not fit {m} parties of dimension {d}")
    _check_operator_side(d**m)
    if method == "expansion":
        out = _apply_expansion(imap, matrix, m, d)
    elif method == "sequential":
        out = _apply_sequential(imap, matrix, m, d)
    else:
        raise DomainError(f"unknown method {method!r}")
    if isinstance(op, DensityOperator):
        return DensityOperator(op.party_set, d, out)
    return out


def density_matrix(state: PureState) -> np.ndarray:
    _check_operator_side(state.local_dim**state.n_parties)
    psi = state.amplitudes
    return np.outer(psi, psi.conj())


def sector_component(state: PureState, k: int) -> np.ndarray:
    """The k-sector operator: all Bloch terms acting nontrivially on exactly k parties."""
    n, d = state.n_parties, state.local_dim
    if not 0 <= k <= n:
        raise DomainError(f"sector index {k} out of range 0..{n}")
    rho = density_matrix(state)
    out = np.zeros_like(rho)
    for mask in range(1 << n):
        if bin(mask).count("1") != k:
            continue
        # traceless projection on A, identity-component projection elsewhere
        alphas = tuple(-1.0 / d if mask >> j & 1 else 1.0 / d for j in range(n))
        betas = tuple(-1.0 if mask >> j & 1 else 0.0 for j in range(n))
        out += _apply_sequential(InversionMap(alphas, betas), rho, n, d)
    return out


def r_matrix(state: PureState, traced_party: int) -> np.ndarray:
    """R = rho I_-(rho) for the reduction with ``traced_party`` (0-based) removed."""
    n = state.n_parties
    if n < 2:
        raise DomainError("R matrix needs at least two parties")
    if not 0 <= traced_party < n:
        raise DomainError(f"party {traced_party} out of range")
    rho = reduce(state, ((1 << n) - 1) ^ (1 << traced_party))
    inv = apply_inversion(InversionMap.standard_inversion(n - 1), rho, method="sequential")
    return rho.matrix @ inv.matrix


def trace_r(state: PureState, traced_party: int) -> float:
    value = np.trace(r_matrix(state, traced_party))
    if abs(value.imag) > 1e-10:
        raise ConsistencyError(f"Tr R has imaginary part {value.imag}")
    return float(value.real)


def seminorm_P(op: np.ndarray, d: int) -> float:
    """sqrt(Tr[M^dagger P(M)]) with P the full-sector projector."""
    op = np.asarray(op, dtype=np.complex128)
    side = op.shape[0]
    m = 0
    while d**m < side:
        m += 1
    if op.shape != (side, side) or d**m != side:
        raise DomainError(f"operator shape {op.shape} is not square with side a power of {d}")
    projected = apply_inversion(InversionMap.projector(m, d), op, d, method="sequential")
    value = np.vdot(op, projected)  # Tr(M^dagger P(M))
    if value.real < -1e-10:
        raise ConsistencyError(f"P-seminorm squared negative: {value.real}")
    return float(np.sqrt(max(value.real, 0.0)))
