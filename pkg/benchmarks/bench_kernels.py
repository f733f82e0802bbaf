"""Compiled versus pure-Python kernels.

Runs each workload in a fresh interpreter, once with numba and once with
ETCENSUS_NO_NUMBA=1, and prints the wall time of each (compile time excluded
by a warm-up call).

    python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
import numpy as np
from etcensus import _accel, kernels
from etcensus.graph import canonical_form, Graph
from etcensus.oracle import connected_graph_rows, orderly_graphs
from etcensus.permgroup import symmetric_group
from etcensus.subgroups import ElementTable

def timed(fn, *a):
    fn(*a)  # warm-up / compile
    t = time.perf_counter()
    fn(*a)
    return time.perf_counter() - t

rng = np.random.default_rng(5)
graphs = []
for _ in range(40):
    n = 30
    A = np.triu(rng.random((n, n)) < 0.2, 1)
    graphs.append(Graph(n, list(zip(*np.nonzero(A)))))

def canon():
    for X in graphs:
        X._cache.clear()
        canonical_form(X)

S6 = ElementTable(symmetric_group(6))
res = {
    "numba": _accel.HAVE_NUMBA,
    "canonical form, 40 graphs on 30 vertices": timed(canon),
    "augmentation, connected graphs of order 6": timed(connected_graph_rows, 6),
    "orderly generation, all graphs of order 6": timed(orderly_graphs, 6),
    "Lehmer rank, all of S_6": timed(kernels.lehmer_rank, S6.E),
}
print(json.dumps(res))
"""


def run(no_numba: bool) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["ETCENSUS_NO_NUMBA"] = "1"
    else:
        env.pop("ETCENSUS_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(out.stdout)


def main():
    fast = run(False)
    slow = run(True)
    width = max(len(k) for k in fast if k != "numba")
    print(f"{'workload':<{width}}  {'numba':>10}  {'python':>10}  {'speed-up':>8}")
    for key in fast:
        if key == "numba":
            continue
        a, b = fast[key], slow[key]
        print(f"{key:<{width}}  {a:>9.4f}s  {b:>9.4f}s  {b / a:>7.1f}x")
    if not fast["numba"]:
        print("numba is not installed; both columns ran the Python path")


if __name__ == "__main__":
    main()
