"""Compare the compiled subset-sweep kernel with the numpy fallback.

    python3 benchmarks/bench_kernels.py            # S(2,4), SG_3, S(2,5)
    python3 benchmarks/bench_kernels.py --full     # adds S(3,3), 2^27 subsets

Each backend computes the full minimum-boundary profile; the script checks the
two agree and prints wall times and the speedup.
"""

from __future__ import annotations

import argparse
import time

from sierpinski_eip.graphs import quotient_graph, sierpinski_graph
from sierpinski_eip.kernels import available_backends
from sierpinski_eip.oracle import SearchBudget, exact_profile


def best_time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="include the 2^27 sweep of S(3,3)")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)

    cases = [("S(2,4)", sierpinski_graph(2, 4)), ("SG_3", quotient_graph(3, 3)), ("S(2,5)", sierpinski_graph(2, 5))]
    if args.full:
        cases.append(("S(3,3)", sierpinski_graph(3, 3)))
    backends = available_backends()
    budget = SearchBudget(parallel_width=args.jobs)
    print(f"backends: {', '.join(backends)}; jobs={args.jobs}")
    print(f"{'graph':8} {'subsets':>12} " + " ".join(f"{b + ' s':>10}" for b in backends) + f" {'speedup':>8}")
    for name, g in cases:
        times, profiles = [], []
        for b in backends:
            reps = 1 if g.num_vertices > 24 else args.repeat
            t, table = best_time(lambda b=b: exact_profile(g, budget=budget, backend=b), reps)
            times.append(t)
            profiles.append(table.values)
        if any(p != profiles[0] for p in profiles):
            raise SystemExit(f"{name}: backends disagree")
        speed = f"{times[-1] / times[0]:.1f}x" if len(times) > 1 else "-"
        print(f"{name:8} {2 ** g.num_vertices:>12} " + " ".join(f"{t:>10.3f}" for t in times) + f" {speed:>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
