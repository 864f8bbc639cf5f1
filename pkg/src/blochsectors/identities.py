"""Linear relations and bounds that every pure-state sector distribution obeys.

Each ``check_*`` returns a RelationReport with both sides evaluated. Functions
taking a distribution accept either a float SectorDistribution or an exact
SectorPolynomial; with exact input the arithmetic stays in integers and
Fractions, so the residual is exactly zero when the relation holds.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .qstate import PureState, bipartition_matrix
from .sector_engine import (
    purity_table,
    sectors_from_purities,
    trace_r,
    trace_r_from_table,
)

REL_TOL = 1e-9
H_TOL = 1e-10


@dataclass
class RelationReport:
    name: str
    left: float
    right: float
    residual: float
    tolerance: float
    passed: bool
    kind: str = "equality"
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("left", "right", "residual", "tolerance"):
            out[key] = float(out[key])
        out["passed"] = bool(out["passed"])
        return out


def _equality(name, left, right, tol, **details) -> RelationReport:
    residual = left - right
    return RelationReport(name, left, right, residual, tol, bool(abs(residual) <= tol), "equality", details)


def _lengths(s) -> tuple[list, int, int]:
    vals = list(s.lengths)
    if any(isinstance(v, (float, np.floating)) for v in vals):
        vals = [float(v) for v in vals]
    else:
        vals = [int(v) if isinstance(v, (int, np.integer)) else v for v in vals]
    return vals, s.n_parties, s.local_dim


def _half(values) -> object:
    return Fraction(1, 2) if all(isinstance(v, (int, Fraction)) for v in values) else 0.5


# --- relations on distributions ---------------------------------------------

def check_pq_relation(s) -> RelationReport:
    """d^N S_N = sum_k (-1)^k (d^2-1)^(N-k) S_k."""
    S, n, d = _lengths(s)
    left = d**n * S[n]
    right = sum((-1) ** k * (d * d - 1) ** (n - k) * S[k] for k in range(n + 1))
    return _equality("pq", left, right, REL_TOL * d**n)


def check_k_purity(s, k: int) -> RelationReport:
    """d^(N-2k) sum_{m<=k} C(N-m, k-m) S_m = sum_{n<=N-k} C(N-n, k) S_n."""
    S, n, d = _lengths(s)
    if not 0 <= k <= (n - 1) // 2:
        raise DomainError(f"k-purity needs 0 <= k <= {(n - 1) // 2} for N={n}, got k={k}")
    left = d ** (n - 2 * k) * sum(math.comb(n - m, k - m) * S[m] for m in range(k + 1))
    right = sum(math.comb(n - j, k) * S[j] for j in range(n - k + 1))
    return _equality(f"kpurity[k={k}]", left, right, REL_TOL * d**n, k=k)


def check_odd_qubit_balance(s) -> RelationReport:
    """Odd-N qubits: even and odd sector sums both equal 2^(N-1).

    Passing a PureState also evaluates the H invariant directly.
    """
    state = s if isinstance(s, PureState) else None
    if state is not None:
        s = sectors_from_purities(state)
    S, n, d = _lengths(s)
    if d != 2 or n % 2 == 0:
        raise DomainError(f"balance relation needs d=2 and odd N, got d={d}, N={n}")
    even = sum(S[0::2])
    odd = sum(S[1::2])
    tol = REL_TOL * 2**n
    ok = abs(even - odd) <= tol and abs(even - 2 ** (n - 1)) <= tol
    details = {"s_even": float(even), "s_odd": float(odd)}
    if state is not None:
        h = h_invariant(state)
        details["h_invariant"] = h
        ok = ok and abs(h) <= H_TOL
    return RelationReport("balance", even, odd, even - odd, tol, bool(ok), "equality", details)


def check_small_n_identity(s) -> RelationReport:
    """The N-specific sector identity for 2 <= N <= 6."""
    S, n, d = _lengths(s)
    half = _half(S)
    D = d * d - 1
    if n == 2:
        terms = [1, S[1], S[2]]
        left, right = d * d, sum(terms)
    elif n == 3:
        terms = [(d - 1) ** 2 * (d + 2), (d - 1) * S[1]]
        left, right = S[3], terms[0] - terms[1]
    elif n == 4:
        terms = [D**2, half * D * S[1], half * S[3]]
        left, right = S[4], terms[0] - terms[1] - terms[2]
    elif n == 5:
        terms = [
            (d - 1) ** 3 * (d + 2) * (d * d - 2 * d - 4),
            (d - 1) ** 2 * (d * d - d - 3) * S[1],
            (d - 1) * S[3],
        ]
        left, right = (d - 3) * S[5], terms[0] - terms[1] + terms[2]
    elif n == 6:
        terms = [
            2 * (d - 2) * D**3 * (d + 2),
            D**2 * (d * d - 3) * S[1],
            D * S[3],
            (d * d - 3) * S[5],
        ]
        left, right = 2 * (d * d - 4) * S[6], terms[0] - terms[1] + terms[2] - terms[3]
    else:
        raise DomainError(f"small-N identities exist for 2 <= N <= 6, got N={n}")
    scale = max(float(d**n), float(abs(left)), *(float(abs(t)) for t in terms))
    degenerate = (n == 5 and d == 3) or (n == 6 and d == 2)
    return _equality("smalln", left, right, REL_TOL * scale, n=n, degenerate_leading_coefficient=degenerate)


# --- relations that need the state -------------------------------------------

def sum_trace_r(state: PureState, method: str = "auto") -> float:
    """sum_j Tr R_[j]; operator route for small systems, purity table otherwise."""
    n, d = state.n_parties, state.local_dim
    if method == "auto":
        method = "operator" if d ** (n - 1) <= 256 else "purity"
    if method == "operator":
        return sum(trace_r(state, j) for j in range(n))
    if method == "purity":
        table = purity_table(state).values
        return float(sum(trace_r_from_table(table, n, j) for j in range(n)))
    raise DomainError(f"unknown method {method!r}")


def _trr_weight(n: int, d: int, k: int, form: str):
    if form == "printed":
        return (-1) ** k * (n - k)
    if form == "general":
        return (-1) ** k * (n - k) * (d - 1) ** (n - 1 - k)
    raise DomainError(f"unknown form {form!r}; use 'general' or 'printed'")


def check_trR_relation(state: PureState, sectors=None, method: str = "auto",
                       form: str = "general") -> RelationReport:
    """d^(N-1) sum_j Tr R_[j] against a signed sum of sector lengths, and left >= 0.

    ``form="printed"`` uses weights (-1)^k (N-k), which is exact only for qubits.
    ``form="general"`` uses (-1)^k (N-k) (d-1)^(N-1-k), exact for every d with R
    built from the standard inversion; both coincide at d = 2.
    """
    n, d = state.n_parties, state.local_dim
    if n < 2:
        raise DomainError("Tr R relation needs N >= 2")
    S = (sectors if sectors is not None else sectors_from_purities(state)).lengths
    left = d ** (n - 1) * sum_trace_r(state, method)
    right = sum(_trr_weight(n, d, k, form) * S[k] for k in range(n))
    tol = REL_TOL * d ** (n - 1)
    report = _equality("trr", float(left), float(right), tol, form=form)
    report.details["nonnegative"] = bool(left >= -tol and right >= -tol)
    report.passed = report.passed and report.details["nonnegative"]
    return report


def check_even_sector_relation(state: PureState, sectors=None, method: str = "auto",
                               form: str = "general") -> RelationReport:
    """1-purity relation plus the Tr R relation, halved.

    Printed form: (d^(N-2)/2) [N + S_1 + d sum_j Tr R_[j]] = sum_{even k<N} (N-k) S_k,
    exact for qubits. The general form keeps the right side as
    sum_k (N-k) [1 + (-1)^k (d-1)^(N-1-k)] S_k / 2, which reduces to the same
    even-only sum at d = 2.
    """
    n, d = state.n_parties, state.local_dim
    if n % 2 or n < 4:
        raise DomainError(f"even-sector relation needs even N >= 4, got N={n}")
    S = (sectors if sectors is not None else sectors_from_purities(state)).lengths
    left = d ** (n - 2) / 2 * (n + S[1] + d * sum_trace_r(state, method))
    if form == "printed":
        right = sum((n - k) * S[k] for k in range(0, n, 2))
    else:
        right = sum((n - k + _trr_weight(n, d, k, form)) * S[k] for k in range(n)) / 2
    return _equality("even", float(left), float(right), REL_TOL * d ** (n - 2), form=form)


def apply_y_string(vec: np.ndarray, m: int) -> np.ndarray:
    """Y on each of m qubits of a length-2^m vector."""
    y = np.array([[0, -1j], [1j, 0]])
    t = vec.reshape((2,) * m)
    for j in range(m):
        t = np.moveaxis(np.tensordot(y, t, axes=([1], [j])), 0, j)
    return t.reshape(-1)


def h_invariant(state: PureState) -> float:
    """Tr[Pi Y^N Pi* Y^N] = |<psi| Y^N |psi*>|^2 (qubits only)."""
    if state.local_dim != 2:
        raise DomainError("H invariant is defined for qubits")
    psi = state.amplitudes
    return float(abs(np.vdot(psi, apply_y_string(psi.conj(), state.n_parties))) ** 2)


class SchmidtCheck(NamedTuple):
    lam: float
    delta: float
    value: float
    degenerate: bool


def schmidt_delta_check(state: PureState, party: int) -> SchmidtCheck:
    """Schmidt data of one qubit against the rest, even-N qubit states.

    Returns the larger Schmidt weight lam, Delta = |<X_0| Y^(N-1) X_1*>| and
    2 lam^2 + 2 (1-lam)^2 - 1 + 4 lam (1-lam) Delta^2, which equals the local
    1-sector of ``party`` plus 2 Tr R for that party and never exceeds 1.
    """
    n, d = state.n_parties, state.local_dim
    if d != 2 or n % 2:
        raise DomainError(f"Schmidt check needs d=2 and even N, got d={d}, N={n}")
    if not 0 <= party < n:
        raise DomainError(f"party {party} out of range")
    m = bipartition_matrix(state, 1 << party)
    _, sv, vh = np.linalg.svd(m)
    lam = float(sv[0] ** 2)
    degenerate = 1.0 - lam < 1e-12
    if degenerate:
        delta = 0.0
    else:
        x0, x1 = vh[0], vh[1]
        delta = float(abs(np.vdot(x0, apply_y_string(x1.conj(), n - 1))))
    value = 2 * lam**2 + 2 * (1 - lam) ** 2 - 1 + 4 * lam * (1 - lam) * delta**2
    return SchmidtCheck(lam, delta, float(value), bool(degenerate))


def symmetrized_lhs(state: PureState, sectors=None, method: str = "auto") -> float:
    S = (sectors if sectors is not None else sectors_from_purities(state)).lengths
    return float(S[1] + 2 * sum_trace_r(state, method))


def check_symmetrized_max(state: PureState, sectors=None, method: str = "auto") -> RelationReport:
    """S_1 + 2 sum_j Tr R_[j] <= N for even-N qubit states."""
    n, d = state.n_parties, state.local_dim
    if d != 2 or n % 2:
        raise DomainError(f"symmetrized maximum needs d=2 and even N, got d={d}, N={n}")
    left = symmetrized_lhs(state, sectors, method)
    tol = REL_TOL
    return RelationReport(
        "symmax", left, float(n), left - n, tol, bool(left <= n + tol), "upper_bound",
        {"attains_maximum": bool(abs(left - n) <= tol)},
    )


# --- batch front end -----------------------------------------------------------

RELATIONS = ("pq", "kpurity", "trr", "even", "balance", "smalln", "schmidt")


def applicable(name: str, n: int, d: int) -> bool:
    if name in ("pq", "kpurity"):
        return True
    if name == "trr":
        return n >= 2
    if name == "even":
        return n % 2 == 0 and n >= 4
    if name == "balance":
        return d == 2 and n % 2 == 1
    if name == "smalln":
        return 2 <= n <= 6
    if name == "schmidt":
        return d == 2 and n % 2 == 0
    raise DomainError(f"unknown relation {name!r}")


def run_relations(state: PureState, names="all", form: str = "general") -> list[RelationReport]:
    """Evaluate the requested relations. ``"all"`` silently skips inapplicable ones;
    an explicitly named inapplicable relation raises DomainError."""
    n, d = state.n_parties, state.local_dim
    if names == "all":
        names = [r for r in RELATIONS if applicable(r, n, d)]
    else:
        for name in names:
            if not applicable(name, n, d):
                raise DomainError(f"relation {name!r} does not apply to N={n}, d={d}")
    sectors = sectors_from_purities(state)
    reports = []
    for name in names:
        if name == "pq":
            reports.append(check_pq_relation(sectors))
        elif name == "kpurity":
            reports += [check_k_purity(sectors, k) for k in range((n - 1) // 2 + 1)]
        elif name == "trr":
            reports.append(check_trR_relation(state, sectors, form=form))
        elif name == "even":
            reports.append(check_even_sector_relation(state, sectors, form=form))
        elif name == "balance":
            reports.append(check_odd_qubit_balance(state))
        elif name == "smalln":
            reports.append(check_small_n_identity(sectors))
        elif name == "schmidt":
            for j in range(n):
                sc = schmidt_delta_check(state, j)
                reports.append(RelationReport(
                    f"schmidt[party={j}]", sc.value, 1.0, sc.value - 1.0, REL_TOL,
                    bool(sc.value <= 1 + REL_TOL and sc.delta <= 1 + 1e-10), "upper_bound",
                    {"lambda": sc.lam, "delta": sc.delta, "degenerate": sc.degenerate},
                ))
            reports.append(check_symmetrized_max(state, sectors))
    return reports
