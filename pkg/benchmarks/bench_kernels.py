"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Inputs mirror what the classifier feeds the kernels for the (7,3,1,5)
scheme: codewords over all 343 coefficient vectors, complement keys of
every subset, and the Knill-Laflamme record keys of its largest groups.
"""

import argparse
import timeit

import numpy as np

from rampqss import _kernels
from rampqss.access import all_subsets
from rampqss.scheme import SchemeParams, build_scheme, kl_records

MAX_PAIRS = 2 * 10**7


def workloads(scheme):
    codes = scheme.params.point_codes
    yield "eval_codewords", (scheme.q, scheme.k, codes)
    keys = [scheme.keys(scheme.complement(xs)) for xs in all_subsets(scheme.n)]
    # skip inputs whose pair list would not fit comfortably in memory
    keys = [k for k in keys if np.sum(np.unique(k, return_counts=True)[1].astype(np.int64) ** 2) <= MAX_PAIRS]
    yield "equal_key_pairs", keys
    S, dy = scheme.secret_dim, scheme.q**2
    recs = []
    for xs in all_subsets(scheme.n):
        if len(xs) != 3:
            continue
        if np.sum(np.unique(scheme.keys(xs), return_counts=True)[1].astype(np.int64) ** 2) > MAX_PAIRS:
            continue
        a, b, s, t = kl_records(scheme, xs)
        recs.append((((a * dy + b) * S + s) * S + t).astype(np.int64))
    yield "count_unique", recs


def run(fn, args, name):
    if name == "eval_codewords":
        return fn(*args)
    return [fn(k) for k in args]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--q", type=int, default=7)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--L", type=int, default=1)
    args = p.parse_args()
    scheme = build_scheme(SchemeParams(args.q, args.k, args.L, 2 * args.k - args.L))
    print(f"scheme {scheme}; numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'kernel':<18}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, data in workloads(scheme):
        np_fn = getattr(_kernels, f"{name}_numpy")
        t_np = min(timeit.repeat(lambda: run(np_fn, data, name), number=1, repeat=args.repeat))
        if _kernels.HAVE_NUMBA:
            nb_fn = getattr(_kernels, f"{name}_numba")
            run(nb_fn, data, name)  # compile outside the timed region
            t_nb = min(timeit.repeat(lambda: run(nb_fn, data, name), number=1, repeat=args.repeat))
            print(f"{name:<18}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.2f}")
        else:
            print(f"{name:<18}{t_np * 1e3:>12.3f}{'n/a':>12}{'':>10}")


if __name__ == "__main__":
    main()
