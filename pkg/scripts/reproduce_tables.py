"""Print the three N-sector comparison tables and check them against the families' numerics.

Usage: python3 scripts/reproduce_tables.py [--numeric-limit 200000]
"""
import argparse
from dataclasses import dataclass

import numpy as np

from blochsectors import closed_forms
from blochsectors.qstate import make_bell_product, make_ghz
from blochsectors.sector_engine import n_sector_via_projector


@dataclass
class Config:
    numeric_limit: int = 200_000  # largest d^N evaluated numerically


def numeric_check(n, d, exact, make, limit):
    if d**n > limit:
        return "skipped"
    value = n_sector_via_projector(make(n, d))
    return "ok" if np.isclose(value, exact, rtol=0, atol=1e-8 * d**n) else f"MISMATCH {value:.6f}"


def main(cfg: Config) -> None:
    for table in (1, 2, 3):
        rows = closed_forms.table_rows(table)
        print(closed_forms.format_table(table, rows))
        if table in (2, 3):
            n = 5 if table == 2 else 6
            for r in rows:
                g = numeric_check(n, r["d"], r["ghz"], make_ghz, cfg.numeric_limit)
                b = numeric_check(n, r["d"], r["bell"], make_bell_product, cfg.numeric_limit)
                print(f"    d={r['d']}: numeric GHZ {g}, Bell family {b}")
        print()


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--numeric-limit", type=int, default=Config.numeric_limit)
    main(Config(p.parse_args().numeric_limit))
