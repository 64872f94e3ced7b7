"""Time the rule builders with numba kernels against the pure-NumPy fallback.

    python3 benchmarks/bench_kernels.py --n 1000,10000 --repeat 3

The fallback runs in a child process with HALLEYQUAD_DISABLE_NUMBA=1, since the
backend is fixed at import time.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

CHILD = r"""
import json, sys, time
from halleyquad import backend, compute_rule
degrees = [int(v) for v in sys.argv[1].split(",")]
repeat = int(sys.argv[2])
out = {"backend": backend(), "rows": []}
for fam in ("hermite", "legendre"):
    compute_rule(fam, 5)  # compile / warm caches
    for n in degrees:
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            compute_rule(fam, n)
            times.append(time.perf_counter() - t0)
        out["rows"].append({"family": fam, "n": n, "seconds": min(times)})
print(json.dumps(out))
"""


def run(degrees: str, repeat: int, disable: bool) -> dict:
    env = dict(os.environ)
    if disable:
        env["HALLEYQUAD_DISABLE_NUMBA"] = "1"
    else:
        env.pop("HALLEYQUAD_DISABLE_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", CHILD, degrees, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="1000,10000", help="comma-separated degrees")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    t0 = time.perf_counter()
    fast = run(args.n, args.repeat, disable=False)
    slow = run(args.n, args.repeat, disable=True)
    print(f"{'family':<9} {'n':>8} {fast['backend']:>10} {slow['backend']:>10} {'speedup':>8}")
    for a, b in zip(fast["rows"], slow["rows"]):
        print(f"{a['family']:<9} {a['n']:>8} {a['seconds']:>10.4f} {b['seconds']:>10.4f} "
              f"{b['seconds'] / a['seconds']:>8.1f}")
    print(f"total {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
