"""Compare the polynomial-multiplication backends.

Runs the same workloads under PSKZ_KERNEL = numba / numpy / python and
prints a timing table.  The workload is the hot path of certificate
construction: truncated products of binomial powers in several variables.

    python benchmarks/bench_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import os
import sys
import time


def workload(label: str, p: int, s: int, g: int):
    from pskz.hyper import HyperParams, construct_solution, verify_kz
    from pskz.padic import RingParams

    params = HyperParams(RingParams(p, s), g, 1)
    t0 = time.perf_counter()
    cert = construct_solution(params)
    t1 = time.perf_counter()
    ok = verify_kz(cert).ok
    t2 = time.perf_counter()
    assert ok
    return {
        "label": label,
        "construct_s": t1 - t0,
        "verify_s": t2 - t1,
        "terms": len(cert.component(1)),
    }


def run_backend(backend: str, cases) -> list:
    os.environ["PSKZ_KERNEL"] = backend
    # fresh import so module-level backend probes see the env var
    for name in [m for m in sys.modules if m.startswith("pskz")]:
        del sys.modules[name]
    from pskz import kernels

    if backend == "numba" and not kernels.HAS_NUMBA:
        return []
    kernels.warmup()
    return [workload(f"p={p} s={s} g={g}", p, s, g) for p, s, g in cases]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller cases only")
    args = parser.parse_args()
    cases = [(7, 1, 2), (5, 2, 2)] if args.quick else [(7, 1, 2), (5, 2, 2), (7, 2, 2)]

    rows = []
    for backend in ("numba", "numpy", "python"):
        results = run_backend(backend, cases)
        if not results:
            print(f"{backend}: unavailable, skipped")
            continue
        for res in results:
            rows.append((backend, res))

    print(f"\n{'backend':8} {'case':16} {'terms':>8} {'construct':>10} {'verify':>10}")
    for backend, res in rows:
        print(
            f"{backend:8} {res['label']:16} {res['terms']:>8} "
            f"{res['construct_s']:>9.2f}s {res['verify_s']:>9.2f}s"
        )


if __name__ == "__main__":
    main()
