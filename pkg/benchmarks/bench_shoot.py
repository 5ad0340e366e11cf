"""Compare the compiled and pure-Python shooting kernels.

Run with ``python3 benchmarks/bench_shoot.py [--repeat N]``. Each case times
single shots at the converged eigenvalue and one full solve per backend,
and checks that both backends agree on the result.
"""

import argparse
import math
import timeit

from plapeig import _backend
from plapeig.eigensolver import RadialEigenProblem, shoot_full, solve_first_eigenvalue
from plapeig.geometry import Euclidean, PaperBump, RadialDomain, interval_domain, sharpness_radius

CASES = {
    "interval p=1.5": RadialEigenProblem(1.5, interval_domain(1.0)),
    "ball n=3 p=2": RadialEigenProblem(2.0, RadialDomain(Euclidean(), 3, 1.0)),
    "bump 0.05 p=3": RadialEigenProblem(3.0, RadialDomain(PaperBump(eps=0.05), 3, sharpness_radius(0.05))),
}


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repeats, best is kept (default: %(default)s)")
    args = ap.parse_args(argv)

    backends = sorted(_backend.KERNELS)
    if "cython" not in backends:
        print("compiled kernel not built; timing the pure-Python kernel only")
    print(f"{'case':<16} {'backend':<8} {'shot [us]':>11} {'solve [ms]':>11} {'lambda':>22}")
    for label, prob in CASES.items():
        lam_ref = None
        per_shot = {}
        for name in backends:
            lam = solve_first_eigenvalue(prob, backend=name).lam
            shot = _best(lambda: shoot_full(prob, lam, backend=name), args.repeat, 20 if name == "cython" else 3)
            solve = _best(lambda: solve_first_eigenvalue(prob, backend=name), max(1, args.repeat // 2), 1)
            per_shot[name] = shot
            print(f"{label:<16} {name:<8} {shot * 1e6:>11.1f} {solve * 1e3:>11.1f} {lam:>22.16g}")
            if lam_ref is None:
                lam_ref = lam
            elif not math.isclose(lam, lam_ref, rel_tol=1e-9):
                raise SystemExit(f"backends disagree on {label}: {lam!r} vs {lam_ref!r}")
        if len(per_shot) == 2:
            print(f"{'':<16} speedup  {per_shot['python'] / per_shot['cython']:>10.1f}x")


if __name__ == "__main__":
    main()
