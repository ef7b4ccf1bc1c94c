"""Time the numba and pure-numpy kernels on the same workloads.

Run with ``python3 benchmarks/bench_kernels.py``. Each path runs in its own
subprocess because the backend is chosen at import time from
``CORONAL_DISABLE_NUMBA``.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, time
import numpy as np
from coronal import kernels
from coronal.codes import parse_code
from coronal.sets import CodeSet
from coronal.solver import TightSystem, solve_tight

def best(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); times.append(time.perf_counter() - t0)
    return min(times)

C = CodeSet(3, [parse_code("0:22121", 3), parse_code("1:212020", 3)])
system = TightSystem(C)
rho = np.array([0.65, 0.83, 1.0])
rhos = np.random.default_rng(0).uniform(0.01, 1.0, size=(100_000, 3))
R = int(__import__("sys").argv[1])
out = {
    "backend": "numba" if kernels.USE_NUMBA else "numpy",
    "jacobian_1e4_calls": best(lambda: [system.jacobian(rho) for _ in range(10_000)], R),
    "batch_values_1e5_rows": best(lambda: C.angle_sums_batch(rhos), R),
    "solve_tight_triple": best(lambda: solve_tight(system), R),
}
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, CORONAL_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    print(f"{'workload':24s} {fast['backend']:>10s} {slow['backend']:>10s} {'speedup':>8s}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:24s} {fast[key]:10.4f} {slow[key]:10.4f} {slow[key] / fast[key]:8.1f}x")


if __name__ == "__main__":
    main()
