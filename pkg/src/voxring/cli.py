"""Command-line interface.

Commands
--------
betti      cell counts and Betti numbers of a picture
cup-table  the cup-product table of the 1-generators and its rank
cycles     representative cycles drawn as voxel sets
verify     model axioms, dd = 0, and the independent oracle cross-checks

Exit codes: 0 success, 1 picture parse error, 2 precondition failure
(e.g. disconnected foreground), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ParseError, PreconditionError, UsageError
from .picture import parse_picture
from .pipeline import RANK_CHECK_CELL_LIMIT, analyze_picture, _report_ok

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PRECONDITION = 2
EXIT_VERIFY = 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="picture file (dense grid or coordinate list)")
    p.add_argument("--complement", action="store_true",
                   help="analyze the background inside the padded box")
    p.add_argument("--padding", type=int, default=1, metavar="N",
                   help="box padding used with --complement (default 1)")
    p.add_argument("--json", action="store_true", dest="as_json",
                   help="emit a machine-readable report")
    p.add_argument("--oracle", action="store_true",
                   help="run the independent rank-based cross-checks")
    p.add_argument("--timing", action="store_true",
                   help="print per-stage timings")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="voxring",
        description="homology and cohomology-ring analysis of 3D binary "
                    "pictures via cubical complexes")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("betti", "Betti numbers and cell counts"),
                        ("cup-table", "cup-product table and rank"),
                        ("cycles", "voxel representatives of all generators"),
                        ("verify", "run every verification stage")):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        if name == "verify":
            p.add_argument("--rank-limit", type=int,
                           default=RANK_CHECK_CELL_LIMIT, metavar="CELLS",
                           help="skip the triangulation cross-check above "
                                "this many cells")
    return ap


def _load(path: str):
    with open(path, "rb") as fh:
        return parse_picture(fh.read())


def _print_report(report, command: str, timing: bool) -> None:
    w = sys.stdout.write
    mode = f" (complement, padding {report.padding})" if report.complemented else ""
    w(f"picture: {report.dims[0]}x{report.dims[1]}x{report.dims[2]}{mode}, "
      f"{report.n_voxels} voxels\n")
    w(f"cells: Q={report.cells_q}  dQ={report.cells_dq}  K={report.cells_k}  "
      f"interior(K)={report.cells_k - report.cells_dq}\n")
    b = report.betti
    w(f"betti: b0={b[0]}  b1={b[1]}  b2={b[2]}\n")
    if report.flags:
        w(f"flags: {', '.join(report.flags)}\n")
    if report.generators:
        w("generators:\n")
        for g in report.generators:
            cube = g.get("cube")
            where = ""
            if cube is not None:
                where = f"  cube base={tuple(cube['base'])} extent={cube['extent']:03b}"
            w(f"  dim {g['dim']}  cell {g['cell']}  "
              f"cycle size {g['cycle_size']}{where}\n")
    if command == "cup-table" and report.cup is not None:
        cup = report.cup
        if not cup.pairs or not cup.cavities:
            w("cup table: empty (no 1-generator pairs or no cavities)\n")
        else:
            heads = [f"{a}~{b}" for a, b in cup.pairs]
            w("cup table (rows: cavities, columns: 1-generator pairs):\n")
            w("  " + " ".join(f"{h:>12}" for h in ["cavity"] + heads) + "\n")
            for j, cav in enumerate(cup.cavities):
                row = [str(cup.entries[i][j]) for i in range(len(cup.pairs))]
                w("  " + " ".join(f"{v:>12}" for v in [str(cav)] + row) + "\n")
        w(f"cup rank: {cup.rank}\n")
        if cup.asymmetric_pairs:
            w(f"note: order-dependent pairs: {cup.asymmetric_pairs}\n")
    if command == "cycles":
        for c in report.cycles:
            flag = "  [fallback]" if c.fallback_used else ""
            w(f"cycle: generator {c.generator} dim {c.dim}{flag}\n")
            for v in c.voxels:
                w(f"  {v[0]} {v[1]} {v[2]}\n")
    if command == "verify":
        for name, rep in report.verification.items():
            if hasattr(rep, "checks"):
                w(f"[{name}]\n")
                for c in rep.checks:
                    mark = "pass" if c.ok else "FAIL"
                    where = ("" if c.failed_cell is None
                             else f" (first at cell {c.failed_cell})")
                    w(f"  {c.name:>22}: {mark}{where}\n")
            else:
                w(f"[{name}] {'pass' if _report_ok(rep) else 'FAIL'}\n")
        for name, rep in report.oracle.items():
            text = rep if isinstance(rep, str) else (
                "pass" if _report_ok(rep) else "FAIL")
            w(f"[oracle:{name}] {text}\n")
    if timing:
        for stage, secs in report.timings.items():
            w(f"timing: {stage:>16} {secs * 1000:10.2f} ms\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        picture = _load(args.input)
    except FileNotFoundError:
        print(f"error: no such file: {args.input}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    command = args.command
    want_cup = command in ("cup-table", "verify")
    want_cycles = command == "cycles"
    verify = command == "verify"
    oracle = args.oracle or verify
    try:
        report, _ = analyze_picture(
            picture, complement=args.complement, padding=args.padding,
            want_cup=want_cup, want_cycles=want_cycles, verify=verify,
            oracle=oracle,
            rank_check_limit=getattr(args, "rank_limit",
                                     RANK_CHECK_CELL_LIMIT))
    except (PreconditionError, UsageError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION

    if args.as_json:
        payload = report.to_json()
        payload["command"] = command
        if args.timing:
            payload["timings"] = report.timings
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        _print_report(report, command, args.timing)

    if verify and not report.verified_ok:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
