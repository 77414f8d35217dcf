"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--p 5] [--repeat 3]

Both backends must produce identical masks; the script exits non-zero if
they ever disagree.
"""
import argparse
import sys
import time

import numpy as np

from homnovikov import _kernels
from homnovikov.search import all_matrices, all_tensors, general_linear, symmetric_nondegenerate_forms


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is available")
        return 0

    p, n = args.p, 2
    tensors = np.concatenate(list(all_tensors(p, n)))
    eye = np.eye(n, dtype=np.int64)
    gl = general_linear(p, n)
    mats = all_matrices(p, n)
    forms = symmetric_nondegenerate_forms(p, n)
    dual = np.zeros((n, n, n), dtype=np.int64)
    dual[0, 0, 0] = dual[0, 1, 1] = dual[1, 0, 1] = 1

    cases = {
        "hom_novikov (alpha=id)": lambda nb: _kernels.hom_novikov_mask(tensors, eye, p, True, nb),
        "hom_novikov (alpha=gl[1])": lambda nb: _kernels.hom_novikov_mask(tensors, gl[1], p, True, nb),
        "comm_assoc": lambda nb: _kernels.comm_assoc_mask(tensors, p, nb),
        "morphism (dual numbers)": lambda nb: _kernels.morphism_mask(mats, dual, p, nb),
        "form (dual numbers, id)": lambda nb: _kernels.form_mask(dual, eye, forms, p, nb),
    }
    # compile outside the timed region
    for fn in cases.values():
        fn(True)

    print(f"GF({p}), dim {n}: {len(tensors)} tensors, {len(mats)} matrices, {len(forms)} forms")
    print(f"{'kernel':28s} {'numba s':>9s} {'numpy s':>9s} {'speedup':>8s}  hits")
    ok = True
    for name, fn in cases.items():
        t_nb, m_nb = _best(lambda: fn(True), args.repeat)
        t_np, m_np = _best(lambda: fn(False), args.repeat)
        same = np.array_equal(m_nb, m_np)
        ok &= same
        print(f"{name:28s} {t_nb:9.4f} {t_np:9.4f} {t_np / max(t_nb, 1e-9):7.1f}x  {int(m_nb.sum())}"
              + ("" if same else "  MISMATCH"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
