"""Pure N-qudit states: construction, tensor products, reductions, purities.

Amplitudes are indexed by base-d digit strings with party 0 as the most
significant digit, so ``amplitudes.reshape((d,) * n)`` puts party ``j`` on
axis ``j``. Subsets of parties are bit masks: bit ``j`` set means party ``j``
(0-based) belongs to the subset.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

NORM_TOL = 1e-12
LOAD_NORM_TOL = 1e-6


@dataclass(frozen=True)
class PureState:
    n_parties: int
    local_dim: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_parties < 1:
            raise DomainError(f"need at least one party, got {self.n_parties}")
        if self.local_dim < 2:
            raise DomainError(f"local dimension must be >= 2, got {self.local_dim}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.local_dim**self.n_parties:
            raise DomainError(
                f"expected {self.local_dim}**{self.n_parties} amplitudes, got {amps.size}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state not normalized (norm={norm!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return self.n_parties

    @property
    def d(self) -> int:
        return self.local_dim

    @property
    def full_mask(self) -> int:
        return (1 << self.n_parties) - 1

    def tensor(self) -> np.ndarray:
        """Amplitudes as an n-index array, one axis of size d per party."""
        return self.amplitudes.reshape((self.local_dim,) * self.n_parties)

    @classmethod
    def from_amplitudes(cls, amplitudes, d: int, normalize: bool = True) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = _infer_parties(amps.size, d)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise DomainError("zero vector is not a state")
            amps = amps / norm
        return cls(n, d, amps)


@dataclass(frozen=True)
class DensityOperator:
    party_set: tuple[int, ...]
    local_dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        side = self.local_dim ** len(self.party_set)
        if self.matrix.shape != (side, side):
            raise DomainError(f"operator shape {self.matrix.shape} does not match {side}x{side}")

    @property
    def n_parties(self) -> int:
        return len(self.party_set)


@dataclass(frozen=True)
class PartySubset:
    mask: int
    n_parties: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.n_parties):
            raise DomainError(f"mask {self.mask} out of range for {self.n_parties} parties")

    @classmethod
    def from_parties(cls, parties: Iterable[int], n_parties: int) -> "PartySubset":
        mask = 0
        for p in parties:
            if not 0 <= p < n_parties:
                raise DomainError(f"party {p} out of range for {n_parties} parties")
            mask |= 1 << p
        return cls(mask, n_parties)

    @property
    def parties(self) -> tuple[int, ...]:
        return mask_to_parties(self.mask, self.n_parties)

    def complement(self) -> "PartySubset":
        return PartySubset(((1 << self.n_parties) - 1) ^ self.mask, self.n_parties)

    def __len__(self) -> int:
        return bin(self.mask).count("1")


def mask_to_parties(mask: int, n: int) -> tuple[int, ...]:
    return tuple(j for j in range(n) if mask >> j & 1)


def _as_mask(subset, n: int) -> int:
    if isinstance(subset, PartySubset):
        return subset.mask
    if isinstance(subset, (int, np.integer)):
        if not 0 <= subset < (1 << n):
            raise DomainError(f"mask {subset} out of range for {n} parties")
        return int(subset)
    return PartySubset.from_parties(subset, n).mask


def _infer_parties(size: int, d: int) -> int:
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    n, rest = 0, size
    while rest > 1 and rest % d == 0:
        rest //= d
        n += 1
    if rest != 1 or n < 1:
        raise DomainError(f"length {size} is not a positive power of d={d}")
    return n


def _basis_index(digits: Sequence[int], d: int) -> int:
    idx = 0
    for digit in digits:
        idx = idx * d + digit
    return idx


# --- constructors -----------------------------------------------------------

def make_ghz(n: int, d: int) -> PureState:
    """(1/sqrt d) * sum_j |j...j>."""
    if n < 2 or d < 2:
        raise DomainError(f"GHZ needs n >= 2 and d >= 2, got n={n}, d={d}")
    amps = np.zeros(d**n, dtype=np.complex128)
    for j in range(d):
        amps[_basis_index([j] * n, d)] = 1 / np.sqrt(d)
    return PureState(n, d, amps)


def make_product(n: int, d: int, j: int = 0) -> PureState:
    """The computational product state |j>^{(x) n}."""
    if n < 1 or d < 2:
        raise DomainError(f"invalid n={n}, d={d}")
    if not 0 <= j < d:
        raise DomainError(f"level j={j} out of range for d={d}")
    amps = np.zeros(d**n, dtype=np.complex128)
    amps[_basis_index([j] * n, d)] = 1.0
    return PureState(n, d, amps)


def tensor(a: PureState, b: PureState) -> PureState:
    if a.local_dim != b.local_dim:
        raise DomainError(f"local dimensions differ: {a.local_dim} vs {b.local_dim}")
    amps = np.kron(a.amplitudes, b.amplitudes)
    # kron of unit vectors is unit up to rounding; renormalize to keep the invariant tight
    amps = amps / np.linalg.norm(amps)
    return PureState(a.n_parties + b.n_parties, a.local_dim, amps)


def make_bell_product(n: int, d: int) -> PureState:
    """Bell pairs for even n; a 3-party GHZ followed by Bell pairs for odd n."""
    if n < 2:
        raise DomainError(f"Bell product needs n >= 2, got {n}")
    bell = make_ghz(2, d)
    state = bell if n % 2 == 0 else make_ghz(3, d)
    for _ in range((n - state.n_parties) // 2):
        state = tensor(state, bell)
    return state


def haar_amplitudes(n: int, d: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Normalized complex Gaussian vectors; shape (d**n,) or (size, d**n)."""
    shape = (d**n,) if size is None else (size, d**n)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_state(n: int, d: int, seed: int | None = None) -> PureState:
    if n < 1 or d < 2:
        raise DomainError(f"invalid n={n}, d={d}")
    rng = np.random.default_rng(seed)
    return PureState(n, d, haar_amplitudes(n, d, rng))


def apply_local_unitaries(state: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Apply ``unitaries[j]`` to party ``j``."""
    if len(unitaries) != state.n_parties:
        raise DomainError("need one unitary per party")
    psi = state.tensor()
    for j, u in enumerate(unitaries):
        psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [j])), 0, j)
    return PureState.from_amplitudes(psi.reshape(-1), state.local_dim)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


# --- reductions -------------------------------------------------------------

def bipartition_matrix(state: PureState, subset) -> np.ndarray:
    """Amplitudes reshaped to (d^|B|, d^(N-|B|)) with the parties of B as rows."""
    n, d = state.n_parties, state.local_dim
    mask = _as_mask(subset, n)
    keep = mask_to_parties(mask, n)
    rest = tuple(j for j in range(n) if j not in keep)
    psi = np.transpose(state.tensor(), keep + rest)
    return psi.reshape(d ** len(keep), d ** len(rest))


def reduce(state: PureState, keep) -> DensityOperator:
    """Partial trace over the complement of ``keep``."""
    mask = _as_mask(keep, state.n_parties)
    if mask == 0:
        raise DomainError("cannot reduce to the empty set of parties")
    m = bipartition_matrix(state, mask)
    rho = m @ m.conj().T
    return DensityOperator(mask_to_parties(mask, state.n_parties), state.local_dim, rho)


def purity_from_amplitudes(psi: np.ndarray, n: int, d: int, mask: int) -> np.ndarray:
    """Tr(rho_B^2) for one state (shape (d**n,)) or a batch (shape (S, d**n)).

    Uses the Gram matrix of the smaller side of the bipartition, so the cost
    never exceeds d^N * d^min(|B|, N-|B|).
    """
    k = bin(mask).count("1")
    if k == 0 or k == n:
        return np.ones(psi.shape[:-1])
    if 2 * k > n:
        mask ^= (1 << n) - 1
        k = n - k
    keep = mask_to_parties(mask, n)
    rest = tuple(j for j in range(n) if j not in keep)
    batch = psi.shape[:-1]
    t = psi.reshape(batch + (d,) * n)
    off = len(batch)
    t = np.transpose(t, tuple(range(off)) + tuple(off + j for j in keep + rest))
    m = t.reshape(batch + (d**k, d ** (n - k)))
    gram = m @ np.swapaxes(m.conj(), -1, -2)
    return np.sum(np.abs(gram) ** 2, axis=(-1, -2))


def purity(state: PureState, subset) -> float:
    mask = _as_mask(subset, state.n_parties)
    return float(purity_from_amplitudes(state.amplitudes, state.n_parties, state.local_dim, mask))


# --- JSON state specs -------------------------------------------------------

def state_from_spec(spec) -> PureState:
    """Build a state from a JSON-style dict (see README for the schema)."""
    if isinstance(spec, (str, Path)):
        spec = load_spec(spec)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise DomainError("state spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "tensor":
            factors = [state_from_spec(f) for f in spec["factors"]]
            if not factors:
                raise DomainError("tensor spec needs at least one factor")
            out = factors[0]
            for f in factors[1:]:
                out = tensor(out, f)
            _check_declared(spec, out)
            return out
        n, d = int(spec["n"]), int(spec["d"])
        if kind == "ghz":
            return make_ghz(n, d)
        if kind == "product":
            return make_product(n, d, int(spec.get("j", 0)))
        if kind == "bell_product":
            return make_bell_product(n, d)
        if kind == "random":
            return random_state(n, d, int(spec["seed"]))
        if kind == "amplitudes":
            re = np.asarray(spec["re"], dtype=float)
            im = np.asarray(spec.get("im", np.zeros_like(re)), dtype=float)
            if re.shape != im.shape or re.size != d**n:
                raise DomainError(f"'re'/'im' must both have length d**n = {d**n}")
            amps = re + 1j * im
            norm = np.linalg.norm(amps)
            if abs(norm - 1.0) > LOAD_NORM_TOL:
                raise DomainError(f"amplitude norm {norm} deviates from 1 by more than {LOAD_NORM_TOL}")
            return PureState(n, d, amps / norm)
    except KeyError as exc:
        raise DomainError(f"state spec of kind {kind!r} is missing field {exc}") from None
    raise DomainError(f"unknown state kind {kind!r}")


def _check_declared(spec: dict, state: PureState) -> None:
    if "n" in spec and int(spec["n"]) != state.n_parties:
        raise DomainError(f"declared n={spec['n']} but factors give {state.n_parties}")
    if "d" in spec and int(spec["d"]) != state.local_dim:
        raise DomainError(f"declared d={spec['d']} but factors give {state.local_dim}")


def load_spec(text_or_path) -> dict:
    """Parse inline JSON, or read it from a file path."""
    text = str(text_or_path)
    if not text.lstrip().startswith("{"):
        path = Path(text)
        if not path.exists():
            raise DomainError(f"state spec is neither JSON nor an existing file: {text!r}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid state JSON: {exc}") from None
