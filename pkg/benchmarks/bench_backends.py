"""Compare the compiled kernels with the pure-Python fallback.

Each backend runs in its own process because the choice is fixed at import
time by ``P3C_NO_NUMBA``.  Usage::

    python3 benchmarks/bench_backends.py [--family prism_stack] [--sizes 300 1000 3000]
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import subprocess
import sys


def run(backend: str, family: str, sizes: list[int], repeat: int) -> list[dict]:
    env = dict(os.environ)
    if backend == "python":
        env["P3C_NO_NUMBA"] = "1"
    else:
        env.pop("P3C_NO_NUMBA", None)
    cmd = [sys.executable, "-m", "p3c.cli", "bench", "--family", family, "--repeat", str(repeat),
           "--sizes", *map(str, sizes)]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout
    return list(csv.DictReader(io.StringIO("".join(l for l in out.splitlines(True) if not l.startswith("#")))))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="prism_stack")
    ap.add_argument("--sizes", type=int, nargs="+", default=[300, 1000, 3000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    fast = run("numba", args.family, args.sizes, args.repeat)
    slow = run("python", args.family, args.sizes, args.repeat)
    print("family,n,numba_s,python_s,speedup,same_output")
    for a, b in zip(fast, slow):
        same = all(a[k] == b[k] for k in ("cycles", "conflict_nodes", "conflict_edges", "frames"))
        ta, tb = float(a["seconds"]), float(b["seconds"])
        print(f"{a['family']},{a['n']},{ta:.4f},{tb:.4f},{tb / ta if ta else float('nan'):.1f},{same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
