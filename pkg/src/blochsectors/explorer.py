"""GHZ-vs-Bell phase diagram, its analytic boundary, and random searches for large S_N."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .closed_forms import bell_family_nsector_exact, ghz_nsector_exact
from .errors import DomainError
from .qstate import PureState, haar_amplitudes
from .sector_engine import n_sector_batch

WORKERS_ENV = "BLOCHSECTORS_WORKERS"
CSV_HEADER = ["d", "n", "s_ghz", "s_bell", "diff", "dominance", "log_mag"]


@dataclass(frozen=True)
class SweepRecord:
    d: int
    n: int
    s_ghz: int
    s_bell: int
    diff: int
    dominance: str  # GHZ, BELL, TIE or UNDECIDED

    @property
    def log_mag(self) -> float:
        """sign(diff) * log10(1 + |diff|), computed without float overflow."""
        if self.diff == 0:
            return 0.0
        mag = abs(self.diff)
        if mag.bit_length() < 1000:
            value = math.log10(1 + mag)
        else:
            shift = mag.bit_length() - 60
            value = math.log10(mag >> shift) + shift * math.log10(2)
        return math.copysign(value, self.diff)

    def csv_row(self) -> list[str]:
        return [str(self.d), str(self.n), str(self.s_ghz), str(self.s_bell), str(self.diff),
                self.dominance, f"{self.log_mag:.6f}"]


def sweep_cell(d: int, n: int) -> SweepRecord:
    g = ghz_nsector_exact(n, d)
    b = bell_family_nsector_exact(n, d)
    diff = g - b
    if n in (2, 3):
        dominance = "UNDECIDED"  # the two families are the same state
    else:
        dominance = "GHZ" if diff > 0 else "BELL" if diff < 0 else "TIE"
    return SweepRecord(d, n, g, b, diff, dominance)


def _sweep_row(args) -> list[SweepRecord]:
    n, d_max = args
    return [sweep_cell(d, n) for d in range(2, d_max + 1)]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def sweep(d_max: int, n_max: int, workers: int | None = None) -> list[SweepRecord]:
    """All cells 2 <= d <= d_max, 2 <= n <= n_max, ordered by n then d."""
    if d_max < 2 or n_max < 2:
        raise DomainError(f"sweep needs d_max, n_max >= 2, got {d_max}, {n_max}")
    workers = default_workers() if workers is None else workers
    jobs = [(n, d_max) for n in range(2, n_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(job) for job in jobs]
    return [rec for row in rows for rec in row]


def write_sweep_csv(records: Iterable[SweepRecord], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.csv_row())


def sweep_csv_text(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    write_sweep_csv(records, buf)
    return buf.getvalue()


def dominance_switch_violations(records: Iterable[SweepRecord]) -> list[int]:
    """Even n >= 4 where, scanning d upwards, GHZ reappears after BELL. Ties are skipped."""
    by_n: dict[int, list[SweepRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec)
    bad = []
    for n, recs in sorted(by_n.items()):
        if n < 4 or n % 2:
            continue
        seen_bell = False
        for rec in sorted(recs, key=lambda r: r.d):
            if rec.dominance == "BELL":
                seen_bell = True
            elif rec.dominance == "GHZ" and seen_bell:
                bad.append(n)
                break
    return bad


# --- boundary -------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryResult:
    gamma: float
    slope: float
    residual: float


def boundary(tol: float = 1e-12) -> BoundaryResult:
    """Nonzero root of exp(-g) = 1 - g/2 by bisection on [1, 2]; the trivial g = 0 is excluded."""
    def f(g):
        return math.exp(-g) - (1 - g / 2)

    lo, hi = 1.0, 2.0
    if f(lo) * f(hi) >= 0:
        raise AssertionError("root not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    gamma = 0.5 * (lo + hi)
    return BoundaryResult(gamma, 1.0 / gamma, abs(f(gamma)))


# --- search -----------------------------------------------------------------------

@dataclass
class SearchResult:
    n: int
    d: int
    seed: int
    best_value: float
    samples_evaluated: int
    reference: int
    reference_family: str
    best_amplitudes: np.ndarray = field(repr=False)
    improved_by_climb: bool = False

    def to_dict(self) -> dict:
        amps = self.best_amplitudes
        return {
            "n": self.n,
            "d": self.d,
            "seed": self.seed,
            "best_S_N": float(self.best_value),
            "samples_evaluated": self.samples_evaluated,
            "reference": self.reference,
            "reference_family": self.reference_family,
            "exceeds_reference": bool(self.best_value > self.reference + 1e-6),
            "improved_by_climb": self.improved_by_climb,
            "best_state": {"kind": "amplitudes", "n": self.n, "d": self.d,
                           "re": [float(x) for x in amps.real], "im": [float(x) for x in amps.imag]},
        }


def reference_nsector(n: int, d: int) -> tuple[int, str]:
    """Larger of the GHZ and Bell-family closed forms (GHZ on ties)."""
    g = ghz_nsector_exact(n, d)
    b = bell_family_nsector_exact(n, d)
    return (g, "ghz") if g >= b else (b, "bell_product")


def search_max_nsector(
    n: int,
    d: int,
    samples: int,
    hillclimb_steps: int = 0,
    seed: int = 0,
    init: PureState | None = None,
    restarts: int = 1,
    proposals: int = 16,
    step0: float = 0.3,
    decay: float = 0.98,
    batch: int = 4096,
) -> SearchResult:
    """Haar sampling, then hill climbing from the ``restarts`` best samples.

    Each climb step draws ``proposals`` Gaussian perturbations of width
    step0 * decay**t, renormalizes them and moves to the best one if it
    raises S_N. With ``init`` the search starts from that state.
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    if n < 2:
        raise DomainError("search needs n >= 2")
    if init is not None and (init.n_parties, init.local_dim) != (n, d):
        raise DomainError("initial state does not match (n, d)")
    rng = np.random.default_rng(seed)
    dim = d**n
    pool_vecs = np.empty((0, dim), dtype=np.complex128)
    pool_vals = np.empty(0)
    if init is not None:
        pool_vecs = init.amplitudes[None, :].copy()
        pool_vals = n_sector_batch(pool_vecs, n, d)
    evaluated = len(pool_vals)
    remaining = samples
    keep = max(restarts, 1)
    while remaining > 0:
        size = min(batch, remaining)
        vecs = haar_amplitudes(n, d, rng, size=size)
        vals = n_sector_batch(vecs, n, d)
        evaluated += size
        remaining -= size
        pool_vecs = np.concatenate([pool_vecs, vecs])
        pool_vals = np.concatenate([pool_vals, vals])
        # stable sort keeps the initial state ahead of equal-valued samples
        order = np.argsort(-pool_vals, kind="stable")[:keep]
        pool_vecs, pool_vals = pool_vecs[order], pool_vals[order]

    best_vec, best_val = pool_vecs[0], float(pool_vals[0])
    climbed = False
    for start_vec, start_val in zip(pool_vecs, pool_vals):
        vec, val = start_vec.copy(), float(start_val)
        for t in range(hillclimb_steps):
            width = step0 * decay**t
            noise = rng.standard_normal((proposals, dim)) + 1j * rng.standard_normal((proposals, dim))
            cand = vec[None, :] + width * noise / np.sqrt(2 * dim)
            cand /= np.linalg.norm(cand, axis=1, keepdims=True)
            cand_vals = n_sector_batch(cand, n, d)
            evaluated += proposals
            i = int(np.argmax(cand_vals))
            if cand_vals[i] > val:
                vec, val = cand[i], float(cand_vals[i])
        if val > best_val:
            best_vec, best_val, climbed = vec, val, True

    ref, family = reference_nsector(n, d)
    return SearchResult(n, d, seed, best_val, evaluated, ref, family, best_vec, climbed)
