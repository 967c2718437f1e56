"""Command-line front end.

Subcommands: sieve, table1, table2, table3, estimate, calibrate, phi,
audit, check.  Exit codes: 0 all good, 2 invariant failure (or reference
mismatch under --strict-paper), 3 reference-value mismatches only.

Output goes to stdout unless --out is given; a relative --out path is
resolved inside $TWINPRIMES_OUTDIR when that is set.  Identical
configurations produce byte-identical csv/json output regardless of
--threads.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import estimators, legendre, report
from .report import (
    EXIT_INVARIANT_FAILURE,
    EXIT_OK,
    EXIT_REFERENCE_MISMATCH,
    RunConfig,
)

OUTDIR_ENV = "TWINPRIMES_OUTDIR"


def _parse_checkpoints(text: str) -> tuple[int, ...]:
    try:
        xs = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"checkpoints must be comma-separated integers, got {text!r}"
        )
    if not xs:
        raise argparse.ArgumentTypeError("checkpoint list is empty")
    return xs


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if not path.is_absolute():
        base = os.environ.get(OUTDIR_ENV)
        if base:
            path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise SystemExit(f"cannot write {path}: {exc}")


def _add_common(p: argparse.ArgumentParser, default_limit: int = 10**6) -> None:
    p.add_argument("--limit", type=int, default=default_limit,
                   help=f"sieve upper bound (default {default_limit})")
    p.add_argument("--threads", type=int, default=1,
                   help="construction threads; never changes results")
    p.add_argument("--segment-size", type=int, default=None,
                   help="odd candidates per sieve window (tuning only)")


def _add_table(sub, name: str, title: str) -> None:
    p = sub.add_parser(name, help=f"regenerate the {title}")
    _add_common(p)
    p.add_argument("--checkpoints", type=_parse_checkpoints, default=None,
                   help="comma-separated x values (default: reference rows)")
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--hc", type=float, default=None,
                   help="override the calibrated ratio constant")
    p.add_argument("--euler-pmax", type=int, default=10**6)


def _run_config(args, fmt: str = "text") -> RunConfig:
    return RunConfig(
        limit=args.limit,
        checkpoints=getattr(args, "checkpoints", None),
        h_c=getattr(args, "hc", None),
        euler_pmax=getattr(args, "euler_pmax", 10**6),
        fmt=fmt,
        out=getattr(args, "out", None),
        strict_paper=getattr(args, "strict_paper", False),
        threads=args.threads,
        segment_size=args.segment_size,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinprimes",
        description="Exact prime / twin-prime counts, bound checks, and "
        "reference-table audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="build a sieve and print its counts")
    _add_common(p)

    _add_table(sub, "table1", "hypothesis table (pi, pi2, pi(pi), ratio)")
    _add_table(sub, "table2", "bounds table (A, pi2, B)")
    _add_table(sub, "table3", "estimator table (h, pi2, pi2*, error)")

    p = sub.add_parser("estimate", help="estimates and bounds at a single x")
    _add_common(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--hc", type=float, default=None)
    p.add_argument("--euler-pmax", type=int, default=10**6)

    p = sub.add_parser("calibrate",
                       help="mean density ratio h over checkpoints")
    _add_common(p)
    p.add_argument("--checkpoints", type=_parse_checkpoints, default=None)

    p = sub.add_parser("phi", help="inclusion-exclusion count phi(y, r)")
    _add_common(p, default_limit=0)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("audit",
                       help="recompute and classify every reference cell")
    _add_common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.add_argument("--hc", type=float, default=None)
    p.add_argument("--euler-pmax", type=int, default=10**6)
    p.add_argument("--strict-paper", action="store_true",
                   help="treat reference mismatches as failures (exit 2)")

    p = sub.add_parser("check", help="run the full invariant suite")
    _add_common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.add_argument("--hc", type=float, default=None)
    p.add_argument("--euler-pmax", type=int, default=10**6)
    p.add_argument("--strict-paper", action="store_true",
                   help="also fail (exit 2) on reference mismatches")

    return parser


def _cmd_sieve(args) -> int:
    cfg = _run_config(args)
    sieve = cfg.build()
    pi = sieve.count_primes_upto(sieve.limit)
    pi2 = sieve.count_twins_upto(sieve.limit)
    pi_pi = sieve.count_primes_upto(pi)
    _write(
        f"limit={sieve.limit}\npi={pi}\npi2={pi2}\npi_pi={pi_pi}\n", None
    )
    return EXIT_OK


def _cmd_table(args, table_id: int) -> int:
    cfg = _run_config(args, fmt=args.format)
    sieve = cfg.build()
    rows = {
        1: report.table1_rows,
        2: report.table2_rows,
        3: report.table3_rows,
    }[table_id](sieve, cfg)
    _write(report.render_table(table_id, rows, cfg.fmt), cfg.out)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    if args.x < 5:
        raise SystemExit(f"--x must be >= 5, got {args.x}")
    limit = max(args.limit, args.x)
    cfg = RunConfig(limit=limit, h_c=args.hc, euler_pmax=args.euler_pmax,
                    threads=args.threads, segment_size=args.segment_size)
    sieve = cfg.build()
    est_cfg = cfg.estimator_config()
    x = args.x
    pi = sieve.count_primes_upto(x)
    pi2 = sieve.count_twins_upto(x)
    star = estimators.twin_count_estimate(x, pi, est_cfg)
    lo, up = estimators.trost_bounds(x)
    a, b = estimators.sandwich_bounds(x)
    density = legendre.density_upper_bound(
        sieve, legendre.DensityBoundParams(c=est_cfg.c_density, y=x)
    )
    print(
        "product estimate uses a truncated divergent trailing product "
        f"(pmax={est_cfg.euler_pmax}); its value is truncation-relative",
        file=sys.stderr,
    )
    _write(
        f"x={x}\npi={pi}\npi2={pi2}\n"
        f"h={estimators.density_ratio(x, pi, pi2):.6f}\n"
        f"pi2_star={star}\n"
        f"abs_delta={abs(pi2 - star)}\n"
        f"rel_error={abs(pi2 - star) / pi2:.4f}\n"
        f"trost_lower={lo:.3f}\ntrost_upper={up:.3f}\n"
        f"bound_a={a:.3f}\nbound_b={b:.3f}\n"
        f"density_bound={density.bound:.6f}\n"
        f"density_actual={density.actual:.6f}\n"
        f"density_holds={str(density.holds).lower()}\n"
        f"hl_simple={estimators.hardy_littlewood_simple(x, est_cfg):.3f}\n"
        f"hl_product={estimators.hardy_littlewood_product(x, est_cfg):.3f}\n",
        None,
    )
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    cfg = _run_config(args)
    sieve = cfg.build()
    xs = cfg.checkpoints or cfg.xs_for(3)
    rows = estimators.estimate_rows(sieve, xs, cfg.estimator_config())
    for row in rows:
        _write(f"x={row.x} h={row.h:.6f}\n", None)
    _write(f"h_c={estimators.mean_density_ratio(rows):.6f}\n", None)
    return EXIT_OK


def _cmd_phi(args) -> int:
    y, r = args.y, args.r
    phi = legendre.phi_recursive(y, r)
    lines = [f"y={y}", f"r={r}", f"phi_recursive={phi}"]
    if r <= legendre.MAX_MOBIUS_R:
        lines.append(f"phi_mobius={legendre.phi_mobius(y, r)}")
    limit = max(args.limit, y, 5)
    sieve = report.build_sieve(
        limit, threads=args.threads,
        **({"segment_size": args.segment_size} if args.segment_size else {}),
    )
    chk = legendre.check_phi_pi_bound(sieve, y, r)
    lines.append(f"pi_y={chk.pi_y}")
    lines.append(f"bound_ok={str(chk.bound_ok).lower()}")
    _write("\n".join(lines) + "\n", None)
    return EXIT_OK


def _cmd_audit(args) -> int:
    cfg = _run_config(args, fmt="text")
    sieve = cfg.build()
    audit = report.audit_against_reference(sieve, cfg)
    text = (
        report.render_audit_json(audit)
        if args.format == "json"
        else report.render_audit_text(audit)
    )
    _write(text, args.out)
    if audit.non_matching():
        return EXIT_INVARIANT_FAILURE if cfg.strict_paper else EXIT_REFERENCE_MISMATCH
    return EXIT_OK


def _cmd_check(args) -> int:
    cfg = _run_config(args, fmt="text")
    sieve = cfg.build()
    invariants = report.run_invariant_suite(sieve, cfg)
    audit = report.audit_against_reference(sieve, cfg)
    if args.format == "json":
        import json as _json

        doc = {
            "invariants": _json.loads(report.render_invariants_json(invariants)),
            "audit_status_counts": audit.status_counts(),
            "audit_conflicts": len(audit.conflicts),
        }
        _write(_json.dumps(doc, indent=2) + "\n", args.out)
    else:
        summary = (
            f"reference audit: {audit.status_counts()} "
            f"+ {len(audit.conflicts)} cross-table contradictions\n"
        )
        _write(report.render_invariants_text(invariants) + summary, args.out)
    if not invariants.passed:
        return EXIT_INVARIANT_FAILURE
    if audit.non_matching():
        return EXIT_INVARIANT_FAILURE if cfg.strict_paper else EXIT_REFERENCE_MISMATCH
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "sieve": _cmd_sieve,
        "table1": lambda a: _cmd_table(a, 1),
        "table2": lambda a: _cmd_table(a, 2),
        "table3": lambda a: _cmd_table(a, 3),
        "estimate": _cmd_estimate,
        "calibrate": _cmd_calibrate,
        "phi": _cmd_phi,
        "audit": _cmd_audit,
        "check": _cmd_check,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
