"""Compare the compiled kernels with the pure-Python fallback.

Runs the exponent table, the meet/join tables and the law scan over every
well-behaved space with up to ``--max-points`` points (and, with ``--all``,
every T0 space), checks that both backends agree, and prints timings.

    python3 benchmarks/bench_kernels.py --max-points 6 --repeat 5
"""
import argparse
import json
import statistics
import time

from topocc import _pykernels as py
from topocc.posets import enumerate_spaces

try:
    from topocc import _ckernels as cy
except ImportError:
    cy = None


def _inputs(space):
    return list(space.opens), list(space.down), space.full


def run_backend(mod, spaces):
    out = []
    for sp in spaces:
        opens, down, full = _inputs(sp)
        ex = mod.exp_table(opens, down, full)
        meet, join = mod.meet_join_tables(opens)
        laws = dict(mod.scan_laws(opens, ex, meet, join))
        out.append((list(ex), list(meet), list(join), laws))
    return out


def timed(mod, spaces, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        result = run_backend(mod, spaces)
        times.append(time.perf_counter() - t)
    return result, times


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--max-points", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--all", action="store_true", help="include spaces that are not well behaved")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    spaces = list(enumerate_spaces(args.max_points, require_well_behaved=not args.all))
    n_opens = sum(len(sp.opens) for sp in spaces)
    ref, py_times = timed(py, spaces, args.repeat)
    row = {"spaces": len(spaces), "opens": n_opens,
           "python_s": statistics.median(py_times)}
    if cy is None:
        row.update(cython_s=None, speedup=None, agree=None)
    else:
        got, cy_times = timed(cy, spaces, args.repeat)
        row["cython_s"] = statistics.median(cy_times)
        row["speedup"] = row["python_s"] / row["cython_s"]
        row["agree"] = got == ref
    if args.json:
        print(json.dumps(row))
    else:
        print(f"{row['spaces']} spaces, {row['opens']} opens in total")
        print(f"python  {row['python_s'] * 1000:9.2f} ms (median of {args.repeat})")
        if cy is None:
            print("cython  not built")
        else:
            print(f"cython  {row['cython_s'] * 1000:9.2f} ms  x{row['speedup']:.1f}"
                  f"  results {'agree' if row['agree'] else 'DIFFER'}")
    return 0 if row.get("agree") in (True, None) else 1


if __name__ == "__main__":
    raise SystemExit(main())
