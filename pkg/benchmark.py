import time

import numpy as np

from neumann_bessel import EvalBudget, SeriesSpec, SweepConfig, bessel_row, default_catalog, master_lhs, sweep

ITERATIONS = 2_000

def bench(label, fn, iterations=ITERATIONS):
    start = time.perf_counter()
    for _ in range(iterations):
        fn()
    elapsed = time.perf_counter() - start
    print(f"{label:<28} {elapsed:8.4f}s  ({iterations / elapsed:,.0f} ops/sec)")
    return elapsed

print(f"Benchmarking with {ITERATIONS:,} iterations...\n")

zs = np.linspace(0.1, 30.0, ITERATIONS)
state = {"i": 0}

def fresh_row():
    # distinct arguments so the row cache does not hide the recurrence
    state["i"] = (state["i"] + 1) % ITERATIONS
    bessel_row(60, float(zs[state["i"]]) + 1e-9 * state["i"])

bench("bessel_row(60, z)", fresh_row)
bench("bessel_row cached", lambda: bessel_row(60, 12.5))

spec = SeriesSpec(5, 2, 20.0, 0.7)
bench("master_lhs eps=1e-12", lambda: master_lhs(spec))
bench("master_lhs eps=1e-15", lambda: master_lhs(spec, EvalBudget(eps=1e-15)))

catalog = default_catalog()
bench("eval_sides(tri-ground)", lambda: catalog.eval_sides("tri-ground", {"r": 0.8, "theta": 0.4}), 200)

print()
for workers in (1, 4):
    cfg = SweepConfig(ids=("master",), workers=workers)
    start = time.perf_counter()
    report = sweep(cfg, catalog)
    elapsed = time.perf_counter() - start
    print(f"master sweep, {workers} worker(s): {len(report.records)} points in {elapsed:.3f}s")
