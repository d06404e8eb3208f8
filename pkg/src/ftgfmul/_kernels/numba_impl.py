"""numba-compiled kernels. Loop-level twins of ``numpy_impl``."""
import numpy as np
from numba import njit

from .numpy_impl import AND, CONST0, NAND, NOT, WIRE, XOR

_OPTS = dict(cache=True, nogil=True)


@njit(**_OPTS)
def _clmul_reduce_1(a, b, m, poly):
    acc = 0
    for j in range(m):
        if (b >> j) & 1:
            acc ^= a << j
    for d in range(2 * m - 2, m - 1, -1):
        if (acc >> d) & 1:
            acc ^= poly << (d - m)
    return acc


@njit(**_OPTS)
def _clmul_reduce_arr(a, b, m, poly):
    out = np.empty(a.shape[0], dtype=np.int64)
    for i in range(a.shape[0]):
        out[i] = _clmul_reduce_1(a[i], b[i], m, poly)
    return out


def clmul_reduce(a, b, m, poly):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    shape = a.shape
    out = _clmul_reduce_arr(np.ascontiguousarray(a).ravel(), np.ascontiguousarray(b).ravel(),
                            np.int64(m), np.int64(poly))
    return out.reshape(shape)


@njit(**_OPTS)
def _odd_syndromes(bits, exp, log, n, t):
    out = np.zeros(t, dtype=np.int64)
    for idx in range(t):
        i = 2 * idx + 1
        step = exp[i % n]
        lstep = log[step]
        s = 0
        # Horner from the highest coefficient down
        for j in range(bits.shape[0] - 1, -1, -1):
            if s != 0:
                s = exp[(log[s] + lstep) % n]
            if bits[j]:
                s ^= 1
        out[idx] = s
    return out


def odd_syndromes(bits, exp, log, n, t):
    return _odd_syndromes(np.ascontiguousarray(bits, dtype=np.uint8), exp, log,
                          np.int64(n), np.int64(t))


@njit(**_OPTS)
def _poly_eval_powers(coeffs, exp, log, n):
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        acc = 0
        for j in range(coeffs.shape[0]):
            c = coeffs[j]
            if c != 0:
                acc ^= exp[(log[c] + j * i) % n]
        out[i] = acc
    return out


def poly_eval_powers(coeffs, exp, log, n):
    return _poly_eval_powers(np.ascontiguousarray(coeffs, dtype=np.int64), exp, log, np.int64(n))


@njit(**_OPTS)
def _eval_packed(kinds, in_ptr, in_idx, n_inputs, input_words,
                 f_gate, f_word, f_sa0, f_sa1, f_flip):
    n_gates = kinds.shape[0]
    n_words = input_words.shape[1]
    ones = np.uint64(0xFFFFFFFFFFFFFFFF)
    values = np.empty((n_inputs + n_gates, n_words), dtype=np.uint64)
    values[:n_inputs, :] = input_words
    fp = 0
    nf = f_gate.shape[0]
    for g in range(n_gates):
        k = kinds[g]
        lo = in_ptr[g]
        hi = in_ptr[g + 1]
        row = n_inputs + g
        for w in range(n_words):
            if k == WIRE:
                v = values[in_idx[lo], w]
            elif k == NOT:
                v = ~values[in_idx[lo], w]
            elif k == AND or k == NAND:
                v = ones
                for p in range(lo, hi):
                    v &= values[in_idx[p], w]
                if k == NAND:
                    v = ~v
            elif k == XOR:
                v = np.uint64(0)
                for p in range(lo, hi):
                    v ^= values[in_idx[p], w]
            elif k == CONST0:
                v = np.uint64(0)
            else:
                v = ones
            values[row, w] = v
        while fp < nf and f_gate[fp] == g:
            w = f_word[fp]
            values[row, w] = ((values[row, w] & ~f_sa0[fp]) | f_sa1[fp]) ^ f_flip[fp]
            fp += 1
    return values


def eval_packed(kinds, in_ptr, in_idx, n_inputs, input_words,
                f_gate, f_word, f_sa0, f_sa1, f_flip):
    return _eval_packed(kinds, in_ptr, in_idx, np.int64(n_inputs), input_words,
                        f_gate, f_word, f_sa0, f_sa1, f_flip)
