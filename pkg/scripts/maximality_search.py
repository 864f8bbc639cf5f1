"""Random search plus hill climbing for large N-sectors, compared with the GHZ/Bell references.

For qubits the best value should stay at 2^(N-1) (odd N) or 2^(N-1)+1 (even N).
For qudits the output is an empirical maximum only.
"""
import argparse
import json
from dataclasses import asdict, dataclass, field

from blochsectors.explorer import search_max_nsector


@dataclass
class Config:
    cells: list = field(default_factory=lambda: [(3, 2), (4, 2), (5, 2), (6, 2), (3, 3), (4, 3), (5, 3)])
    samples: int = 10_000
    steps: int = 200
    restarts: int = 3
    seed: int = 0
    json_out: bool = False


def main(cfg: Config) -> None:
    results = []
    for n, d in cfg.cells:
        res = search_max_nsector(n, d, cfg.samples, cfg.steps, cfg.seed, restarts=cfg.restarts)
        results.append(res)
        gap = res.best_value - res.reference
        print(f"N={n} d={d}: best {res.best_value:12.6f}  reference {res.reference:>6} "
              f"({res.reference_family})  gap {gap:+.2e}")
    if cfg.json_out:
        print(json.dumps({"config": asdict(cfg),
                          "results": [{k: v for k, v in r.to_dict().items() if k != "best_state"}
                                      for r in results]}))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--steps", type=int, default=Config.steps)
    p.add_argument("--restarts", type=int, default=Config.restarts)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--cell", action="append", metavar="N,D",
                   help="restrict to these cells; repeatable")
    p.add_argument("--json", action="store_true")
    a = p.parse_args()
    cfg = Config(samples=a.samples, steps=a.steps, restarts=a.restarts, seed=a.seed, json_out=a.json)
    if a.cell:
        cfg.cells = [tuple(int(x) for x in c.split(",")) for c in a.cell]
    main(cfg)
