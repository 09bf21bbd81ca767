"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Micro benchmarks call both kernel modules directly on the same inputs and
check that they agree.  The end-to-end rows run one analysis in a fresh
interpreter per backend (DIFFSYM_PURE selects the fallback).
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from diffsym.symcore import Q
from diffsym.symcore import _kernels_py as PY

try:
    from diffsym.symcore import _kernels as CY
except ImportError:
    CY = None


def rand_poly(rng, nvars=6, terms=40, maxexp=4):
    p = {}
    for _ in range(terms):
        mono = []
        for v in sorted(rng.sample(range(nvars), rng.randint(1, 3))):
            mono.extend((v, rng.randint(1, maxexp)))
        p[tuple(mono)] = Q(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return p


def rand_matrix(rng, n=24):
    return [[Q(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]


def micro(rng, repeat):
    p, q = rand_poly(rng), rand_poly(rng)
    mat = rand_matrix(rng)
    point = {v: Q(rng.randint(1, 9), rng.randint(1, 5)) for v in range(6)}
    cases = {
        "poly_mul": lambda K: K.poly_mul(p, q),
        "poly_add": lambda K: K.poly_add(p, q),
        "poly_diff": lambda K: K.poly_diff(p, 2),
        "poly_eval": lambda K: K.poly_eval(p, point, Q(1)),
        "rref 24x24": lambda K: K.rref(mat, 24),
    }
    rows = []
    for name, fn in cases.items():
        ref = fn(PY)
        t_py = min(timeit.repeat(lambda: fn(PY), number=repeat, repeat=3)) / repeat
        if CY is None:
            rows.append((name, t_py, None))
            continue
        if fn(CY) != ref:
            raise SystemExit(f"backends disagree on {name}")
        t_cy = min(timeit.repeat(lambda: fn(CY), number=repeat, repeat=3)) / repeat
        rows.append((name, t_py, t_cy))
    return rows


E2E = {
    "flat basis (brunovsky)": "from diffsym.diffiety import load_system; from diffsym.access import flat_basis; "
                              "from diffsym.cli import resolve_path; "
                              "flat_basis(load_system(resolve_path('brunovsky').read_text()))",
    "symmetries (rouchon, order 1, degree 3)": "from diffsym.cli import run; "
                                               "run(['symmetries', 'rouchon', '--order', '1', '--degree', '3', '--json'])",
}


def end_to_end():
    rows = []
    for name, code in E2E.items():
        stmt = f"import time, io, contextlib; t=time.perf_counter()\nwith contextlib.redirect_stdout(io.StringIO()):\n    {code}\nprint(time.perf_counter()-t)"
        times = []
        for pure in ("1", "0"):
            env = dict(os.environ, DIFFSYM_PURE=pure)
            out = subprocess.run([sys.executable, "-c", stmt], env=env, capture_output=True, text=True, check=True)
            times.append(float(out.stdout.strip().splitlines()[-1]))
        rows.append((name, times[0], times[1] if CY is not None else None))
    return rows


def show(title, rows, unit, scale):
    print(title)
    print(f"  {'case':42s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for name, a, b in rows:
        bs = f"{b * scale:12.2f}" if b is not None else f"{'n/a':>12s}"
        sp = f"{a / b:8.1f}" if b else f"{'n/a':>8s}"
        print(f"  {name:42s} {a * scale:12.2f} {bs} {sp}")
    print(f"  (times in {unit})")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-e2e", action="store_true")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    if CY is None:
        print("compiled kernels not available; only the fallback is timed")
    show("kernels", micro(rng, args.repeat), "microseconds", 1e6)
    if not args.no_e2e:
        show("end to end", end_to_end(), "milliseconds", 1e3)


if __name__ == "__main__":
    main()
