#!/usr/bin/env python3
"""Regenerate all three tables, the reference audit, and the invariant
suite into an output directory.

    python scripts/reproduce_tables.py [--limit N] [--outdir DIR] [--threads N]

Writes table1.csv, table2.csv, table3.csv (plus .json twins at full
precision), audit.txt, audit.json and invariants.txt, then prints a short
summary.  With the default limit of 10**6 this takes a few seconds.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from twinprimes import RunConfig
from twinprimes.report import (
    audit_against_reference,
    render_audit_json,
    render_audit_text,
    render_csv,
    render_invariants_text,
    render_json,
    run_invariant_suite,
    table1_rows,
    table2_rows,
    table3_rows,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--limit", type=int, default=10**6)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument(
        "--outdir",
        default=os.environ.get("TWINPRIMES_OUTDIR", "reproduction"),
    )
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(limit=args.limit, threads=args.threads)

    t0 = time.perf_counter()
    sieve = cfg.build()
    print(f"sieve to {args.limit:,} built in {time.perf_counter() - t0:.2f}s")

    builders = {1: table1_rows, 2: table2_rows, 3: table3_rows}
    for table_id, builder in builders.items():
        rows = builder(sieve, cfg)
        (outdir / f"table{table_id}.csv").write_text(
            render_csv(table_id, rows), encoding="utf-8"
        )
        (outdir / f"table{table_id}.json").write_text(
            render_json(table_id, rows), encoding="utf-8"
        )
        print(f"table{table_id}: {len(rows)} rows")

    audit = audit_against_reference(sieve, cfg)
    (outdir / "audit.txt").write_text(render_audit_text(audit), encoding="utf-8")
    (outdir / "audit.json").write_text(render_audit_json(audit), encoding="utf-8")
    counts = audit.status_counts()
    print(
        f"audit: {counts['match']} match / {counts['formatting-only']} "
        f"formatting-only / {counts['mismatch']} mismatch / "
        f"{len(audit.conflicts)} cross-table contradictions"
    )

    invariants = run_invariant_suite(sieve, cfg)
    (outdir / "invariants.txt").write_text(
        render_invariants_text(invariants), encoding="utf-8"
    )
    print("invariants:", "all passed" if invariants.passed else "FAILURES (see invariants.txt)")
    print(f"wrote {outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
