"""Command-line surface: eval, gen-tables, verify, bench, bound, oracle.

Exit codes: 0 success, 1 tolerance failure, 2 usage error, 3 table error,
4 oracle convergence failure.  With ``--json`` every report line is a JSON
object with sorted keys, byte-reproducible for a fixed seed (timing fields in
``bench`` output are the one documented exception).
"""

import argparse
import json
import math
import statistics
import sys
import time

import numpy as np

from . import kernels, tables as tables_mod
from .errbound import suggest_params, theorem1_bound
from .errors import ConvergenceError, DomainError, TableError
from .evaluator import DEFAULT_PARAMS, moments
from .quadrature import QuadratureSpec, z_nm_oracle

QUANTITY_NAMES = ("Z00", "Z20/Z00", "Z02/Z00", "Z40/Z00", "Z04/Z00", "Z22/Z00")

# error-histogram decade edges, reported as data
_HIST_EDGES = (1e-10, 1e-9, 1e-8, 1e-7)


def _emit(args, obj, human):
    if args.json:
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    else:
        print(human)


def _load_tables(args):
    return tables_mod.load_tables(getattr(args, "tables", None))


def _sample_regions(rng, per_region, d):
    """Region-stratified (b1, b2) samples: far, mixed, near, in that order.

    Far coordinates are log-uniform in magnitude, |b| = 10^u with u uniform in
    [log10(d), 2.3]; near coordinates are uniform in (-d, 0].
    """
    def far():
        return -10.0 ** rng.uniform(math.log10(d), 2.3)

    def near():
        return -rng.uniform(0.0, d)

    out = []
    for _ in range(per_region):
        out.append(("far", far(), far()))
    for _ in range(per_region):
        if rng.random() < 0.5:
            out.append(("mixed", far(), near()))
        else:
            out.append(("mixed", near(), far()))
    for _ in range(per_region):
        out.append(("near", near(), near()))
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    B = np.array([[args.entries[0], args.entries[3], args.entries[4]],
                  [args.entries[3], args.entries[1], args.entries[5]],
                  [args.entries[4], args.entries[5], args.entries[2]]])
    t = _load_tables(args)
    ms = moments(B, t)
    if args.json:
        obj = {"log_z": ms.log_z,
               "moments": {",".join(map(str, k)): v for k, v in sorted(ms.moments.items())}}
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    else:
        print(f"log_z = {ms.log_z:.12g}")
        for key in sorted(ms.moments):
            print(f"<x1^{key[0]} x2^{key[1]} x3^{key[2]}> = {ms.moments[key]:.12g}")
    return 0


def cmd_gen_tables(args) -> int:
    cfg = dict(tables_mod.TINY_CONFIG) if args.tiny else dict(
        d=args.d, N2=args.n2, dz00=args.dz00, dratio=args.dratio,
        gm_step=args.gm_step)
    quad = QuadratureSpec(abs_tol=args.quad_tol)
    t = tables_mod.generate_tables(**cfg, quad=quad,
                                   progress=lambda msg: print(msg, file=sys.stderr))
    out = args.out if args.out else tables_mod.default_table_path()
    nbytes = tables_mod.save_tables(t, out)
    _emit(args, {"path": str(out), "bytes": nbytes},
          f"wrote {nbytes} bytes to {out}")
    return 0


def cmd_verify(args) -> int:
    t = _load_tables(args)
    d = t.header.d
    tol_z = args.tol if args.tol is not None else 6.1e-8
    tol_ratio = args.tol if args.tol is not None else 5e-8
    rng = np.random.default_rng(args.seed)
    samples = _sample_regions(rng, args.samples, d)
    ka = t.kernel_args()
    spec = QuadratureSpec(abs_tol=args.quad_tol)
    maxima = [0.0] * 6
    hist = [0] * (len(_HIST_EDGES) + 1)
    for idx, (region, b1, b2) in enumerate(samples):
        approx = kernels.z_all_kernel(b1, b2, *ka, DEFAULT_PARAMS.N1, DEFAULT_PARAMS.N2)
        try:
            z00_ref = z_nm_oracle(0, 0, b1, b2, spec)
            refs = [z00_ref]
            for (n, m) in kernels.RATIO_ORDER:
                refs.append(z_nm_oracle(n, m, b1, b2, spec) / z00_ref)
        except ConvergenceError as exc:
            print(f"oracle failure at sample {idx} ({region}, b1={b1!r}, b2={b2!r}): {exc}",
                  file=sys.stderr)
            return 4
        for q in range(6):
            err = abs(float(approx[q]) - refs[q])
            maxima[q] = max(maxima[q], err)
            bucket = 0
            for e, edge in enumerate(_HIST_EDGES):
                if err >= edge:
                    bucket = e + 1
            hist[bucket] += 1
    ok = maxima[0] <= tol_z and all(mx <= tol_ratio for mx in maxima[1:])
    for q, name in enumerate(QUANTITY_NAMES):
        tol = tol_z if q == 0 else tol_ratio
        _emit(args,
              {"quantity": name, "max_abs_error": maxima[q], "tol": tol,
               "pass": maxima[q] <= tol},
              f"{name:10s} max abs error {maxima[q]:.3e} (tol {tol:.1e}) "
              f"{'PASS' if maxima[q] <= tol else 'FAIL'}")
    labels = (["< 1e-10"] + [f"[1e-{10 - e}, 1e-{9 - e})" for e in range(len(_HIST_EDGES) - 1)]
              + [">= 1e-7"])
    _emit(args, {"histogram": dict(zip(labels, hist))},
          "error histogram: " + ", ".join(f"{la}: {c}" for la, c in zip(labels, hist)))
    _emit(args, {"pass": ok, "samples_per_region": args.samples, "seed": args.seed},
          f"overall: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    t = _load_tables(args)
    if args.samples <= 0:
        _emit(args, {"samples": 0}, "no samples requested")
        return 0
    d = t.header.d
    rng = np.random.default_rng(args.seed)
    per_region = max(1, args.samples // 3)
    samples = _sample_regions(rng, per_region, d)
    ka = t.kernel_args()
    n1, n2 = DEFAULT_PARAMS.N1, DEFAULT_PARAMS.N2
    spec = QuadratureSpec(abs_tol=5e-8)
    # warm both paths so jit compilation stays out of the timings
    kernels.z_all_kernel(-1.0, -1.0, *ka, n1, n2)
    kernels.oracle_nm_kernel(0, 0, -1.0, -1.0, spec.abs_tol, spec.max_depth)
    approx_times = []
    for _, b1, b2 in samples:
        t0 = time.perf_counter()
        kernels.z_all_kernel(b1, b2, *ka, n1, n2)
        approx_times.append(time.perf_counter() - t0)
    oracle_times = []
    for _, b1, b2 in samples:
        t0 = time.perf_counter()
        kernels.oracle_nm_kernel(0, 0, b1, b2, spec.abs_tol, spec.max_depth)
        oracle_times.append(time.perf_counter() - t0)
    med_a = statistics.median(approx_times)
    med_o = statistics.median(oracle_times)
    speedup = med_o / med_a
    _emit(args,
          {"samples": len(samples), "seed": args.seed,
           "approx_median_us": med_a * 1e6, "oracle_median_us": med_o * 1e6,
           "speedup": speedup},
          f"{len(samples)} samples: approximator median {med_a * 1e6:.2f} us, "
          f"oracle median {med_o * 1e6:.1f} us, speedup {speedup:.0f}x")
    return 0


def cmd_bound(args) -> int:
    if args.suggest is not None:
        d, n1, n2 = suggest_params(args.suggest)
        _emit(args, {"target": args.suggest, "d": d, "N1": n1, "N2": n2},
              f"target {args.suggest:g}: d={d}, N1={n1}, N2={n2}")
        return 0
    rep = theorem1_bound(args.d, args.N, args.n, args.m)
    _emit(args,
          {"d": rep.d, "N": rep.N, "n": rep.n, "m": rep.m, "bound": rep.bound,
           "term1": rep.term1, "term2": rep.term2, "term3": rep.term3},
          f"bound(d={rep.d:g}, N={rep.N}) = {rep.bound:.4e}\n"
          f"  term1 = {rep.term1:.6e}\n  term2 = {rep.term2:.6e} (subtracted)\n"
          f"  term3 = {rep.term3:.6e}")
    return 0


def cmd_oracle(args) -> int:
    spec = QuadratureSpec(abs_tol=args.tol)
    value = z_nm_oracle(args.n, args.m, args.b1, args.b2, spec)
    _emit(args,
          {"n": args.n, "m": args.m, "b1": args.b1, "b2": args.b2,
           "abs_tol": args.tol, "value": value},
          f"Z_{args.n}{args.m}({args.b1:g}, {args.b2:g}) = {value:.15g}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p, tables_flag=True):
    if tables_flag:
        p.add_argument("--tables", default=None, metavar="PATH",
                       help="table file (default: $BINGHAM_TABLES or the user cache)")
    p.add_argument("--json", action="store_true", help="JSON-lines output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bingham",
        description="Bingham-distribution partition function and moments "
                    "via three-region piecewise approximation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="moments of a symmetric B matrix")
    p.add_argument("entries", type=float, nargs=6, metavar="B",
                   help="six entries: B11 B22 B33 B12 B13 B23")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen-tables", help="generate and save precomputed tables")
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--d", type=float, default=30.0)
    p.add_argument("--n2", type=int, default=5)
    p.add_argument("--dz00", type=float, default=0.025)
    p.add_argument("--dratio", type=float, default=0.1)
    p.add_argument("--gm-step", type=float, default=0.001)
    p.add_argument("--quad-tol", type=float, default=1e-11)
    p.add_argument("--tiny", action="store_true",
                   help="coarse CI parameter set (d=1, 3x3 lattices)")
    _add_common(p, tables_flag=False)
    p.set_defaults(func=cmd_gen_tables)

    p = sub.add_parser("verify", help="approximation-vs-oracle error sweep")
    p.add_argument("--samples", type=int, default=1000, help="samples per region")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=None,
                   help="override tolerance for all quantities")
    p.add_argument("--quad-tol", type=float, default=1e-11)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="approximator vs oracle timing")
    p.add_argument("--samples", type=int, default=3000, help="total samples")
    p.add_argument("--seed", type=int, default=42)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bound", help="far-region truncation error bound")
    p.add_argument("--d", type=float, default=30.0)
    p.add_argument("--N", type=int, default=5)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--suggest", type=float, default=None, metavar="TARGET",
                   help="look up (d, N1, N2) for a target absolute error")
    _add_common(p, tables_flag=False)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("oracle", help="ground-truth Z_nm by adaptive quadrature")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("b1", type=float)
    p.add_argument("b2", type=float)
    p.add_argument("--tol", type=float, default=1e-11)
    _add_common(p, tables_flag=False)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return 4
    except TableError as exc:
        print(f"table error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
