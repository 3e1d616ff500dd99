"""Compare the numba-jitted kernels against the pure-Python fallback.

Runs the hot evaluation path (Z00 plus the five moment ratios) over a
region-stratified sample set in two subprocesses, one per backend, and prints
per-call medians.  Usage:

    python benchmarks/bench_backends.py [--samples N] [--tables PATH]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import time


def run_worker(args):
    import numpy as np

    import bingham_moments as bm
    from bingham_moments import kernels, tables
    from bingham_moments.cli import _sample_regions

    t = tables.load_tables(args.tables)
    ka = t.kernel_args()
    rng = np.random.default_rng(args.seed)
    samples = _sample_regions(rng, args.samples // 3, t.header.d)
    kernels.z_all_kernel(-1.0, -1.0, *ka, 5, 5)  # warm / compile
    times = []
    for _, b1, b2 in samples:
        t0 = time.perf_counter()
        kernels.z_all_kernel(b1, b2, *ka, 5, 5)
        times.append(time.perf_counter() - t0)
    print(json.dumps({
        "backend": "numba" if bm.USING_NUMBA else "python",
        "samples": len(samples),
        "median_us": statistics.median(times) * 1e6,
        "mean_us": statistics.fmean(times) * 1e6,
    }))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=3000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--tables", default=None)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        run_worker(args)
        return

    results = {}
    for no_numba in ("0", "1"):
        env = dict(os.environ, BINGHAM_NO_NUMBA=no_numba)
        cmd = [sys.executable, os.path.abspath(__file__), "--worker",
               "--samples", str(args.samples), "--seed", str(args.seed)]
        if args.tables:
            cmd += ["--tables", args.tables]
        res = subprocess.run(cmd, env=env, capture_output=True, text=True)
        if res.returncode != 0:
            print(res.stderr, file=sys.stderr)
            sys.exit(res.returncode)
        rec = json.loads(res.stdout.strip().splitlines()[-1])
        results[rec["backend"]] = rec
        print(f"{rec['backend']:>7s}: median {rec['median_us']:8.2f} us, "
              f"mean {rec['mean_us']:8.2f} us  ({rec['samples']} samples)")
    if "numba" in results and "python" in results:
        ratio = results["python"]["median_us"] / results["numba"]["median_us"]
        print(f"numba speedup over pure Python: {ratio:.1f}x")


if __name__ == "__main__":
    main()
