"""Command-line entry point: ``blochsectors <subcommand> ...``.

Exit codes: 0 success, 1 a requested check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

from . import closed_forms, explorer, identities
from .bloch_oracle import bloch_expand, sectors_from_bloch
from .errors import DomainError, SizeError
from .qstate import state_from_spec
from .sector_engine import sectors_from_purities

EXACT_LIMIT = 2**53


def json_safe(obj):
    """Recursively make ``obj`` JSON-safe: big ints become strings, floats must be finite."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) <= EXACT_LIMIT else str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite number {obj} in output")
        return obj
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return json_safe(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(json_safe(obj))


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# --- subcommands -------------------------------------------------------------

def cmd_sectors(args) -> int:
    state = state_from_spec(args.state)
    n, d = state.n_parties, state.local_dim
    if args.method == "bloch":
        dist = sectors_from_bloch(bloch_expand(state))
    else:
        dist = sectors_from_purities(state)
    total = dist.total()
    checks = {
        "s0_is_one": abs(dist[0] - 1) <= 1e-9,
        "sum_is_d_pow_n": abs(total - d**n) <= 1e-9 * d**n,
        "above_min_n_sector": dist[n] >= (d - 1) ** n - 1e-6,
        "pq_relation": identities.check_pq_relation(dist).passed,
    }
    out = {"n": n, "d": d, "method": args.method, "S": [round(x, 12) for x in dist.tolist()],
           "sum": round(total, 12), "checks": checks}
    with _output(args.out) as fh:
        print(dumps(out), file=fh)
    return 0 if all(checks.values()) else 1


def cmd_verify(args) -> int:
    state = state_from_spec(args.state)
    names = "all" if args.relations == "all" else [r.strip() for r in args.relations.split(",")]
    if names != "all":
        unknown = [r for r in names if r not in identities.RELATIONS]
        if unknown:
            raise DomainError(f"unknown relation(s) {unknown}; choose from {identities.RELATIONS}")
    reports = identities.run_relations(state, names, form=args.form)
    with _output(args.out) as fh:
        print(dumps([r.to_dict() for r in reports]), file=fh)
    return 0 if all(r.passed for r in reports) else 1


def cmd_tables(args) -> int:
    rows = closed_forms.table_rows(args.table)
    with _output(args.out) as fh:
        if args.format in ("text", "both"):
            print(closed_forms.format_table(args.table, rows), file=fh)
        if args.format in ("json", "both"):
            print(dumps({"table": args.table, "rows": rows}), file=fh)
    return 0


def cmd_sweep(args) -> int:
    records = explorer.sweep(args.d_max, args.n_max, workers=args.workers)
    with _output(args.out) as fh:
        explorer.write_sweep_csv(records, fh)
        if args.boundary:
            b = explorer.boundary()
            print(dumps({"gamma": b.gamma, "slope": b.slope, "residual": b.residual}), file=fh)
    return 0


def cmd_search(args) -> int:
    result = explorer.search_max_nsector(
        args.n, args.d, args.samples, args.steps, args.seed, restarts=args.restarts
    )
    with _output(args.out) as fh:
        print(dumps(result.to_dict()), file=fh)
    return 0


def cmd_dump_bloch(args) -> int:
    state = state_from_spec(args.state)
    coeffs = bloch_expand(state)
    with _output(args.out) as fh:
        fh.write(coeffs.to_jsonl())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blochsectors", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def state_arg(p):
        p.add_argument("--state", required=True, help="JSON state spec, inline or a file path")

    p = sub.add_parser("sectors", help="sector distribution of a state")
    state_arg(p)
    p.add_argument("--method", choices=["purity", "bloch"], default="purity")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_sectors)

    p = sub.add_parser("verify", help="check sector identities on a state")
    state_arg(p)
    p.add_argument("--relations", default="all",
                   help="'all' or a comma list of: " + ",".join(identities.RELATIONS))
    p.add_argument("--form", choices=["general", "printed"], default="general",
                   help="Tr R / even-sector relation variant (they coincide for qubits)")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="print the N=2..6 comparison tables")
    p.add_argument("--table", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--format", choices=["text", "json", "both"], default="both")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("sweep", help="GHZ vs Bell-family N-sector over a (d, N) grid, as CSV")
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--boundary", action="store_true", help="append a JSON line with gamma and slope")
    p.add_argument("--workers", type=int, default=None,
                   help=f"process count (default: ${explorer.WORKERS_ENV} or 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("search", help="random search plus hill climbing for large S_N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("dump-bloch", help="all nonzero Bloch coefficients as JSON lines")
    state_arg(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_dump_bloch)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (DomainError, SizeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
