"""Time the numpy and numba kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Outputs are checked for equality before any timing is reported. The first
numba call (compilation, or a cache load) is excluded.
"""
import argparse
import time

import numpy as np

from ftgfmul._kernels import numpy_impl
from ftgfmul.bch_codec import build_code
from ftgfmul.gf_core import build_field
from ftgfmul.pb_multiplier import build_nand_multiplier_netlist

try:
    from ftgfmul._kernels import numba_impl
except ImportError:
    numba_impl = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    ctx = build_field(16)
    a = rng.integers(0, ctx.size, 200_000)
    b = rng.integers(0, ctx.size, 200_000)
    yield "clmul_reduce m=16 x200k", "clmul_reduce", (a, b, 16, ctx.poly)

    code = build_code(10, 8)
    f = code.field
    bits = rng.integers(0, 2, code.n).astype(np.uint8)
    yield f"odd_syndromes ({code.n},{code.k}) t=8", "odd_syndromes", (bits, f.exp, f.log, f.n, code.t)

    coeffs = rng.integers(1, f.size, 9)
    yield "poly_eval_powers deg 8 over GF(2^10)", "poly_eval_powers", (coeffs, f.exp, f.log, f.n)

    net = build_nand_multiplier_netlist(ctx)
    n_in = len(net.inputs)
    words = rng.integers(0, 2**63, size=(n_in, 64), dtype=np.int64).astype(np.uint64)
    none_i = np.zeros(0, dtype=np.int64)
    none_u = np.zeros(0, dtype=np.uint64)
    yield (f"eval_packed m=16 netlist, {len(net.gates)} gates x 4096 vectors", "eval_packed",
           (net._kinds, net._in_ptr, net._in_idx, n_in, words, none_i, none_i, none_u, none_u, none_u))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':58s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for label, name, argv in cases(rng):
        ref = getattr(numpy_impl, name)(*argv)
        t_np = best_of(lambda: getattr(numpy_impl, name)(*argv), args.repeat)
        if numba_impl is None:
            print(f"{label:58s} {t_np * 1e3:9.2f}ms {'n/a':>10s} {'':>8s}")
            continue
        fast = getattr(numba_impl, name)
        got = fast(*argv)  # warm-up
        if not np.array_equal(np.asarray(ref), np.asarray(got)):
            raise SystemExit(f"{name}: backends disagree")
        t_nb = best_of(lambda: fast(*argv), args.repeat)
        print(f"{label:58s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
