"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 200] [--csv out.csv]

Times each kernel at several subsystem sizes, then times a full
bound-sweep campaign once per backend in a subprocess (the backend is
fixed at import time by UNITALBOUND_NUMBA).
"""

import argparse
import csv
import os
import subprocess
import sys
import time

import numpy as np

from unitalbound import _kernels
from unitalbound.channels import random_unital_channel
from unitalbound.states import random_density

SIZES = ((2, 2), (4, 4), (6, 6), (8, 8), (12, 12), (16, 16))


def best_of(fn, repeat):
    fn()  # warm-up / JIT compile
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def kernel_rows(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n, m in SIZES:
        rho = np.ascontiguousarray(random_density(rng, n * m))
        ea = random_unital_channel(rng, n, "mixed-unitary").stack
        eb = random_unital_channel(rng, m, "mixed-unitary").stack
        cases = {
            "ptrace_keep_alpha": lambda impl: impl.ptrace_keep_alpha(rho, n, m),
            "ptrace_keep_beta": lambda impl: impl.ptrace_keep_beta(rho, n, m),
            "apply_kraus_alpha": lambda impl: impl.apply_kraus_alpha(ea, rho, n, m),
            "apply_kraus_beta": lambda impl: impl.apply_kraus_beta(eb, rho, n, m),
        }
        for name, call in cases.items():
            t_np = best_of(lambda: call(_kernels.numpy_impl), repeat)
            t_nb = best_of(lambda: call(_kernels.numba_impl), repeat) if _kernels.numba_impl else float("nan")
            rows.append({"kernel": name, "n": n, "m": m, "numpy_us": t_np * 1e6,
                         "numba_us": t_nb * 1e6, "speedup": t_np / t_nb})
    return rows


def campaign_seconds(flag, trials):
    env = dict(os.environ, UNITALBOUND_NUMBA=flag)
    code = (
        "import time; from unitalbound.verify import CampaignConfig, run_bound_sweep;"
        f"cfg = CampaignConfig('bound-sweep', trials=20); run_bound_sweep(cfg);"
        f"t = time.perf_counter(); run_bound_sweep(CampaignConfig('bound-sweep', trials={trials}));"
        "print(time.perf_counter() - t)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--csv", help="also write the kernel table here")
    args = parser.parse_args(argv)

    rows = kernel_rows(args.repeat)
    print(f"{'kernel':<20}{'n x m':>8}{'numpy us':>12}{'numba us':>12}{'speedup':>9}")
    for r in rows:
        print(f"{r['kernel']:<20}{r['n']:>4}x{r['m']:<3}{r['numpy_us']:>12.2f}{r['numba_us']:>12.2f}{r['speedup']:>9.2f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)

    t_np = campaign_seconds("0", args.trials)
    t_nb = campaign_seconds("1", args.trials)
    print(f"\nbound-sweep, {args.trials} trials: numpy {t_np:.2f}s  numba {t_nb:.2f}s  speedup {t_np / t_nb:.2f}x")


if __name__ == "__main__":
    main()
