"""Compare the compiled and pure-Python kernels on the workloads that
dominate the exact computations: entry products of generic fermionic
matrices and the rank of evaluated multilinear invariants.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import importlib
import itertools
import time

from supertrace import _kernels
from supertrace.freetrace import Coloring, ColoredPermutation, encode_phi
from supertrace.gmatrix import generic_matrix
from supertrace.identities import Evaluator, generic_assignment
from supertrace.superalg import FERMIONIC, Registry


def _power_operands():
    reg = Registry()
    xi = generic_matrix(reg, FERMIONIC, "X", 3)
    p = xi
    for _ in range(3):
        p = p @ xi
    # pairs of entry polynomials of xi^4 and xi, the inner loop of xi^5
    pairs = [(p._rows[i][k], xi._rows[k][j]) for i in range(3) for j in range(3) for k in range(3)]
    return pairs, reg.guard


def _rank_rows():
    col = Coloring.standard(2, 3)
    reg, assignment = generic_assignment(col.letters, 3)
    ev = Evaluator(assignment, 3, reg)
    return [ev.polynomial(encode_phi(ColoredPermutation(p, col))).terms
            for p in itertools.permutations(range(1, 6))]


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        ck = importlib.import_module("supertrace._ckernels")
    except ImportError:
        print("compiled kernels not built; only the pure-Python backend is available")
        ck = None
    pairs, guard = _power_operands()
    rows = _rank_rows()
    backends = [("python", _kernels)] + ([("cython", ck)] if ck else [])
    results = {}
    for name, mod in backends:
        t_mul = _time(lambda: [mod.poly_mul(a, b, guard) for a, b in pairs * 20], args.repeat)
        t_rank = _time(lambda: mod.rank_exact(rows), args.repeat)
        results[name] = (t_mul, t_rank)
        print(f"{name:7s} poly_mul x{len(pairs) * 20}: {t_mul * 1e3:8.1f} ms   "
              f"rank_exact ({len(rows)} rows): {t_rank * 1e3:8.1f} ms")
    if ck:
        same = all(ck.poly_mul(a, b, guard) == _kernels.poly_mul(a, b, guard) for a, b in pairs)
        same = same and ck.rank_exact(rows) == _kernels.rank_exact(rows)
        (pm, pr), (cm, cr) = results["python"], results["cython"]
        print(f"speedup: poly_mul {pm / cm:.2f}x, rank_exact {pr / cr:.2f}x; identical results: {same}")


if __name__ == "__main__":
    main()
