"""Command-line driver: build constructions, run claims, emit reports.

Subcommands:
    construct   build a tower construction and write its node snapshot
    verify      run one registered claim (or all) and print pass/fail lines
    optimize    DP search for the best disjoint-interval partition sum
    report      summarize a previously written claims CSV

Exit codes: 0 all pass, 1 any row failed, 2 usage error, 3 accuracy error.
Defaults may be overridden by a plain key=value config file; explicit
flags win over the file.
"""

import argparse
import sys
from fractions import Fraction

from . import claims, optimizer
from .errors import AccuracyError, UsageError
from .towers import FAMILIES, Schedule, build
from .xreal import fmt

_CONFIG_INT = ("depth", "refine", "seed")
_CONFIG_FLOAT = ("p", "q", "tol")


def _parse_power(text):
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(float(text))


def _load_config(path):
    params = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError("%s:%d: expected key=value" % (path, lineno))
            key, value = (part.strip() for part in line.split("=", 1))
            if key in _CONFIG_INT:
                params[key] = int(value)
            elif key in _CONFIG_FLOAT:
                params[key] = float(value)
            else:
                raise UsageError("%s:%d: unknown key %r (known: %s)"
                                 % (path, lineno, key,
                                    ", ".join(_CONFIG_INT + _CONFIG_FLOAT)))
    return params


def _gather_params(args):
    params = dict(claims.DEFAULTS)
    if getattr(args, "config", None):
        params.update(_load_config(args.config))
    for key in _CONFIG_INT + _CONFIG_FLOAT:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def _build_from_args(args, params):
    custom = None
    if args.family == "custom":
        if not args.custom_s:
            raise UsageError("--custom-s is required for the custom family")
        custom = [float(s) for s in args.custom_s.split(",")]
    sched = Schedule(args.family, params["p"], custom_s=custom)
    power = _parse_power(args.power) if args.power else 1
    return build(sched, params["depth"], power=power)


def _cmd_construct(args):
    params = _gather_params(args)
    ts = _build_from_args(args, params)
    max_level = args.max_level
    if max_level is None:
        max_level = min(params["depth"], 12)
    with open(args.out, "w") as fh:
        ts.serialize(fh, max_level=max_level)
    count = (1 << max_level) - 1
    print("wrote %s: family=%s depth=%d levels<=%d (%d towers)"
          % (args.out, args.family, params["depth"], max_level, count))
    return 0


def _cmd_verify(args):
    params = _gather_params(args)
    if args.claim == "all":
        ids = list(claims.REGISTRY)
    else:
        if args.claim not in claims.REGISTRY:
            raise UsageError("unknown claim %r; registered: %s"
                             % (args.claim, ", ".join(claims.REGISTRY)))
        ids = [args.claim]
    all_rows = []
    failed = 0
    for cid in ids:
        rows = claims.run_claim(cid, params)
        bad = sum(1 for r in rows if not r.ok)
        failed += bad
        all_rows.extend(rows)
        print("%-16s %4d rows  %s" % (cid, len(rows),
                                      "PASS" if bad == 0 else "FAIL(%d)" % bad))
        if bad:
            for r in rows:
                if not r.ok:
                    print("    row %d %s ratio=%.6g %s"
                          % (r.index, claims._param_set(r.params),
                             r.ratio, r.note))
    if args.csv:
        with open(args.csv, "w") as fh:
            claims.write_csv(fh, all_rows)
        print("csv: %s (%d rows)" % (args.csv, len(all_rows)))
    print("total: %d rows, %d failed" % (len(all_rows), failed))
    return 0 if failed == 0 else 1


def _cmd_optimize(args):
    params = _gather_params(args)
    ts = _build_from_args(args, params)
    refine = args.grid_refine if args.grid_refine is not None else params["refine"]
    grid = optimizer.candidate_grid(ts, refine, max_level=args.max_level)
    cap = None
    if args.max_len is not None:
        cap = Fraction(args.max_len)
    value, parts = optimizer.dp_max(ts, params["p"], grid,
                                    max_len=cap, prune=True)
    print("grid: %d breakpoints (refine=%d, levels<=%d)"
          % (len(grid), refine, args.max_level))
    label = "capped at %s" % args.max_len if cap is not None else "uncapped"
    print("search lower bound (%s): %s over %d intervals"
          % (label, fmt(value), len(parts)))
    for J in parts[:8]:
        print("    [%s, %s)" % (fmt(J.lo.to_extreal()), fmt(J.hi.to_extreal())))
    if len(parts) > 8:
        print("    ... %d more" % (len(parts) - 8))
    return 0


def _cmd_report(args):
    with open(args.csv) as fh:
        header = fh.readline().rstrip("\n")
        if header != claims.CSV_HEADER:
            raise UsageError("%s: unexpected header %r" % (args.csv, header))
        counts = {}
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 9:
                raise UsageError("%s:%d: expected 9 fields" % (args.csv, lineno))
            cid, ok = fields[0], fields[8]
            if ok not in ("0", "1"):
                raise UsageError("%s:%d: bad pass flag %r" % (args.csv, lineno, ok))
            total, bad = counts.get(cid, (0, 0))
            counts[cid] = (total + 1, bad + (ok == "0"))
    failed = 0
    for cid in counts:
        total, bad = counts[cid]
        failed += bad
        print("%-16s %4d rows  %s" % (cid, total,
                                      "PASS" if bad == 0 else "FAIL(%d)" % bad))
    print("total: %d rows, %d failed"
          % (sum(t for t, _ in counts.values()), failed))
    return 0 if failed == 0 else 1


def _make_parser():
    parser = argparse.ArgumentParser(
        prog="jnbench",
        description="Tower constructions and oscillation-functional claims.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--q", type=float, default=None)
        sp.add_argument("--depth", type=int, default=None)
        sp.add_argument("--refine", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--config", default=None,
                        help="key=value file overriding defaults")

    sp = sub.add_parser("construct", help="build and snapshot a construction")
    sp.add_argument("--family", required=True, choices=FAMILIES)
    sp.add_argument("--power", default=None,
                    help="pointwise power, e.g. 2/3")
    sp.add_argument("--custom-s", default=None,
                    help="comma-separated s_i for the custom family")
    sp.add_argument("--max-level", type=int, default=None,
                    help="deepest level written (default min(depth, 12))")
    sp.add_argument("--out", required=True)
    add_common(sp)
    sp.set_defaults(fn=_cmd_construct)

    sp = sub.add_parser("verify", help="run registered claims")
    sp.add_argument("claim", help="claim id or 'all'")
    sp.add_argument("--csv", default=None, help="write rows to this path")
    add_common(sp)
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("optimize", help="best disjoint-partition sum (DP)")
    sp.add_argument("--family", default="g0", choices=FAMILIES)
    sp.add_argument("--power", default=None)
    sp.add_argument("--custom-s", default=None)
    sp.add_argument("--max-len", default=None,
                    help="length cap for every interval (exact rational)")
    sp.add_argument("--grid-refine", type=int, default=None)
    sp.add_argument("--max-level", type=int, default=6,
                    help="deepest tower level contributing breakpoints")
    add_common(sp)
    sp.set_defaults(fn=_cmd_optimize)

    sp = sub.add_parser("report", help="summarize a claims CSV")
    sp.add_argument("--csv", required=True)
    sp.set_defaults(fn=_cmd_report)
    return parser


def main(argv=None):
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print("accuracy error: %s" % exc, file=sys.stderr)
        return 3


def entry():
    sys.exit(main())
