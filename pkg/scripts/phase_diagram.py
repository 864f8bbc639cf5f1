"""GHZ vs Bell-family dominance over the (d, N) grid.

Writes the sweep CSV, prints a character map (G = GHZ, B = Bell family,
= tie, . undecided) and the fitted boundary slope next to the analytic one.
"""
import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from blochsectors.explorer import boundary, dominance_switch_violations, sweep, write_sweep_csv

SYMBOL = {"GHZ": "G", "BELL": "B", "TIE": "=", "UNDECIDED": "."}


@dataclass
class Config:
    d_max: int = 100
    n_max: int = 100
    out: Path = Path("phase_diagram.csv")
    map_step: int = 3  # print every map_step-th row and column
    workers: int | None = None


def first_bell_d(records, n):
    ds = [r.d for r in records if r.n == n and r.dominance == "BELL"]
    return min(ds) if ds else None


def main(cfg: Config) -> None:
    records = sweep(cfg.d_max, cfg.n_max, workers=cfg.workers)
    with open(cfg.out, "w", newline="") as fh:
        write_sweep_csv(records, fh)
    print(f"wrote {len(records)} cells to {cfg.out}")

    grid = {(r.d, r.n): SYMBOL[r.dominance] for r in records}
    print("N down, d across")
    for n in range(2, cfg.n_max + 1, cfg.map_step):
        row = "".join(grid[(d, n)] for d in range(2, cfg.d_max + 1, cfg.map_step))
        print(f"{n:>4} {row}")

    # crossover d*(N) on even N, fitted through the origin
    pts = [(n, first_bell_d(records, n)) for n in range(20, cfg.n_max + 1, 2)]
    pts = [(n, d) for n, d in pts if d is not None]
    b = boundary()
    if pts:
        ns, ds = np.array(pts, dtype=float).T
        fit = float(ns @ ds / (ns @ ns))
        print(f"fitted crossover slope {fit:.4f}, analytic 1/gamma {b.slope:.6f} (gamma {b.gamma:.10f})")
    violations = dominance_switch_violations(records)
    print("non-monotone even N:", violations or "none")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--d-max", type=int, default=Config.d_max)
    p.add_argument("--n-max", type=int, default=Config.n_max)
    p.add_argument("--out", type=Path, default=Config.out)
    p.add_argument("--map-step", type=int, default=Config.map_step)
    p.add_argument("--workers", type=int, default=None)
    a = p.parse_args()
    main(Config(a.d_max, a.n_max, a.out, a.map_step, a.workers))
