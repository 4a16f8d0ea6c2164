"""Compare chain throughput on the numba and pure-numpy backends.

The backend is fixed at import time by HTHS_NUMBA, so each timing runs in a
child process.  Usage: python benchmarks/bench_kernels.py [n] [sweeps]
"""
from __future__ import annotations

import json
import os
import subprocess
import sys

_CHILD = """
import json, os, time
import numpy as np
from hths.families import PriorFamily
from hths.mcmc import ChainConfig, run_chain
from hths.backend import backend_name

n = {n}
sweeps = {sweeps}
rng = np.random.default_rng(0)
y = np.where(rng.random(n) < 0.1, rng.uniform(4, 6, n), 0.0) + rng.standard_normal(n)
cfg = ChainConfig(iterations=sweeps, burn_in=sweeps // 5, thinning=2, seed=1)

results = {{}}
for fam in PriorFamily:
    run_chain(y[:4], fam, config=ChainConfig(iterations=20, burn_in=4, thinning=1, seed=1))  # warm JIT
    t0 = time.perf_counter()
    run_chain(y, fam, config=cfg)
    results[fam.label] = time.perf_counter() - t0
print(json.dumps({{"backend": backend_name(), "timings": results}}))
"""


def run_backend(flag: str, n: int, sweeps: int) -> dict:
    env = dict(os.environ, HTHS_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", _CHILD.format(n=n, sweeps=sweeps)],
        env=env,
        check=True,
        capture_output=True,
        text=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 400
    sweeps = int(sys.argv[2]) if len(sys.argv) > 2 else 2000
    print(f"n = {n}, sweeps = {sweeps}")
    numba = run_backend("1", n, sweeps)
    numpy_ = run_backend("0", n, sweeps)
    print(f"{'family':<14}{numba['backend']:>10}{numpy_['backend']:>10}{'speedup':>10}")
    for fam, t_nb in numba["timings"].items():
        t_np = numpy_["timings"][fam]
        print(f"{fam:<14}{t_nb:>9.2f}s{t_np:>9.2f}s{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
