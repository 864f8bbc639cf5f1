"""Exact sector distributions of named state families, in Python integers.

Python ints are arbitrary precision, so values at d, N ~ 100 (hundreds of
digits) keep their exact sign. Only the two approximation curves are floats;
they are evaluated in log space to survive d^N beyond the double range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import ConsistencyError, DomainError

Exact = Union[int, Fraction]


@dataclass(frozen=True)
class SectorPolynomial:
    """Exact (S_0, ..., S_N); multiplication is the tensor-product rule."""

    local_dim: int
    lengths: tuple[Exact, ...]

    def __post_init__(self):
        if self.local_dim < 2:
            raise DomainError(f"local dimension must be >= 2, got {self.local_dim}")
        if not self.lengths:
            raise DomainError("a sector polynomial needs at least S_0")
        object.__setattr__(self, "lengths", tuple(self.lengths))

    @property
    def n_parties(self) -> int:
        return len(self.lengths) - 1

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

    def total(self) -> Exact:
        return sum(self.lengths)

    def __mul__(self, other: "SectorPolynomial") -> "SectorPolynomial":
        return poly_tensor(self, other)

    @classmethod
    def trivial(cls, d: int) -> "SectorPolynomial":
        """The zero-party polynomial, the identity for ``poly_tensor``."""
        return cls(d, (1,))


def _validate(n: int, d: int, n_min: int = 1) -> None:
    if n < n_min or d < 2:
        raise DomainError(f"invalid parameters n={n}, d={d}")


def ghz_sectors_exact(n: int, d: int) -> SectorPolynomial:
    """S_k = C(n,k) [(d-1)^k + (-1)^k (d-1)] / d, plus (d-1) d^(n-1) at k = n."""
    _validate(n, d, n_min=2)
    lengths = []
    for k in range(n + 1):
        num = math.comb(n, k) * ((d - 1) ** k + (-1) ** k * (d - 1))
        q, r = divmod(num, d)
        if r:
            raise ConsistencyError(f"GHZ sector {k} for (n={n}, d={d}) not divisible by d")
        lengths.append(q)
    lengths[n] += (d - 1) * d ** (n - 1)
    return SectorPolynomial(d, tuple(lengths))


def product_sectors_exact(n: int, d: int) -> SectorPolynomial:
    _validate(n, d)
    return SectorPolynomial(d, tuple(math.comb(n, k) * (d - 1) ** k for k in range(n + 1)))


def poly_tensor(a: SectorPolynomial, b: SectorPolynomial) -> SectorPolynomial:
    """Sector polynomial of a tensor product: convolution of the two sequences."""
    if a.local_dim != b.local_dim:
        raise DomainError(f"local dimensions differ: {a.local_dim} vs {b.local_dim}")
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a.lengths):
        for j, y in enumerate(b.lengths):
            out[i + j] += x * y
    return SectorPolynomial(a.local_dim, tuple(out))


def bell_product_sectors_exact(n: int, d: int) -> SectorPolynomial:
    """Bell pairs (even n) or GHZ^3 with Bell pairs (odd n), via poly_tensor."""
    _validate(n, d, n_min=2)
    bell = ghz_sectors_exact(2, d)
    poly = bell if n % 2 == 0 else ghz_sectors_exact(3, d)
    for _ in range((n - poly.n_parties) // 2):
        poly = poly_tensor(poly, bell)
    return poly


def bell_family_nsector_exact(n: int, d: int) -> int:
    """(d^2-1)^(n/2) for even n, (d-1)^2 (d+2) (d^2-1)^((n-3)/2) for odd n."""
    _validate(n, d, n_min=2)
    if n % 2 == 0:
        return (d * d - 1) ** (n // 2)
    return (d - 1) ** 2 * (d + 2) * (d * d - 1) ** ((n - 3) // 2)


def ghz_nsector_exact(n: int, d: int) -> int:
    return ghz_sectors_exact(n, d).lengths[n]


def ghz_nsector_approx(n: int, d: int) -> float:
    """d^N (1 - 1/d) + d^(N-1) exp(-N/d), evaluated as exp of a log."""
    _validate(n, d)
    log_first = n * math.log(d) + math.log1p(-1.0 / d)
    log_second = (n - 1) * math.log(d) - n / d
    hi, lo = max(log_first, log_second), min(log_first, log_second)
    return math.exp(hi + math.log1p(math.exp(lo - hi)))


def ame_nsector_approx(n: int, d: int) -> float:
    """d^N (1 - 1/d^2)^N; a reference curve only."""
    _validate(n, d)
    return math.exp(n * (math.log(d) + math.log1p(-1.0 / (d * d))))


def relative_error(approx: float, exact: int) -> float:
    """|approx - exact| / exact without converting a huge exact int to float first."""
    if exact == 0:
        raise DomainError("relative error undefined for zero")
    # scale both to a common exponent so the ratio stays in double range
    shift = max(exact.bit_length() - 900, 0)
    scaled_exact = exact >> shift
    scaled_approx = math.ldexp(approx, -shift)
    return abs(scaled_approx - scaled_exact) / scaled_exact


# --- comparison tables ------------------------------------------------------

def max_nsector_formula(n: int, d: int) -> int:
    """Known maximum of S_N for n = 2, 3, 4 parties."""
    if n == 2:
        return d * d - 1
    if n == 3:
        return (d - 1) ** 2 * (d + 2)
    if n == 4:
        return (d * d - 1) ** 2
    raise DomainError(f"maximum known in closed form only for n in 2..4, got {n}")


def _sign(diff: int) -> str:
    return ">" if diff > 0 else "<" if diff < 0 else "="


def table_rows(table: int, d_values: Sequence[int] | None = None) -> list[dict]:
    """Rows of the three comparison tables as dicts of exact integers.

    Table 1: maximum S_N for N = 2, 3, 4 and the family attaining it.
    Table 2: GHZ vs GHZ^3 (x) Bell at N = 5. Table 3: GHZ vs Bell^3 at N = 6.
    """
    if table == 1:
        d_values = d_values or range(2, 11)
        rows = []
        for d in d_values:
            attained = (
                ghz_sectors_exact(2, d)[2],
                ghz_sectors_exact(3, d)[3],
                bell_product_sectors_exact(4, d)[4],
            )
            rows.append({"d": d, "N2": attained[0], "N3": attained[1], "N4": attained[2]})
        return rows
    if table in (2, 3):
        n = 5 if table == 2 else 6
        d_values = d_values or (range(3, 8) if table == 2 else range(2, 5))
        rows = []
        for d in d_values:
            g = ghz_nsector_exact(n, d)
            b = bell_family_nsector_exact(n, d)
            rows.append({"d": d, "ghz": g, "bell": b, "cmp": _sign(g - b)})
        return rows
    raise DomainError(f"no table {table}; choose 1, 2 or 3")


TABLE_TITLES = {
    1: "Maximum N-sector: N=2 d^2-1 (Bell), N=3 (d-1)^2(d+2) (GHZ^3), N=4 (d^2-1)^2 (Bell^2)",
    2: "S_5: GHZ^5 = (d-1)^2(d^3+2d^2-2d+4) vs GHZ^3 x Bell = (d-1)^3(d+1)(d+2)",
    3: "S_6: GHZ^6 = (d-1)/d [d^6+(d-1)^5+1] vs Bell^3 = (d^2-1)^3",
}


def format_table(table: int, rows: list[dict]) -> str:
    lines = [TABLE_TITLES[table]]
    if table == 1:
        lines.append(f"{'d':>3} {'N=2':>8} {'N=3':>8} {'N=4':>8}")
        lines += [f"{r['d']:>3} {r['N2']:>8} {r['N3']:>8} {r['N4']:>8}" for r in rows]
    else:
        lines.append(f"{'d':>3} {'GHZ':>10}   {'Bell'}")
        lines += [f"{r['d']:>3} {r['ghz']:>10} {r['cmp']} {r['bell']}" for r in rows]
    return "\n".join(lines)
