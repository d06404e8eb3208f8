"""Pure-numpy kernels. Same signatures and results as ``numba_impl``."""
import numpy as np

# gate kind codes, shared with numba_impl and netlist.py
WIRE, NOT, AND, NAND, XOR, CONST0, CONST1 = range(7)

_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


def clmul_reduce(a, b, m, poly):
    """Vectorised carry-less product of ``a`` and ``b`` reduced modulo ``poly``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    acc = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    for j in range(m):
        sel = (b >> j) & 1
        acc ^= (a << j) * sel
    for d in range(2 * m - 2, m - 1, -1):
        hit = (acc >> d) & 1
        acc ^= (np.int64(poly) << (d - m)) * hit
    return acc


def odd_syndromes(bits, exp, log, n, t):
    """S_1, S_3, ..., S_{2t-1} of the binary word ``bits`` (bit j = coefficient of x^j)."""
    pos = np.flatnonzero(np.asarray(bits))
    out = np.zeros(t, dtype=np.int64)
    if pos.size == 0:
        return out
    for idx in range(t):
        i = 2 * idx + 1
        out[idx] = np.bitwise_xor.reduce(exp[(i * pos) % n])
    return out


def poly_eval_powers(coeffs, exp, log, n):
    """Evaluate a GF(2^m)-coefficient polynomial at alpha^0 .. alpha^(n-1)."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    i = np.arange(n, dtype=np.int64)
    acc = np.zeros(n, dtype=np.int64)
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        acc ^= exp[(log[c] + j * i) % n]
    return acc


def eval_packed(kinds, in_ptr, in_idx, n_inputs, input_words,
                f_gate, f_word, f_sa0, f_sa1, f_flip):
    """Bit-sliced evaluation of a topologically ordered netlist.

    ``input_words`` has shape (n_inputs, n_words); each uint64 word carries 64
    independent input vectors. Returns the value array for every node.
    Fault arrays must be sorted by gate index.
    """
    n_gates = kinds.shape[0]
    n_words = input_words.shape[1]
    values = np.empty((n_inputs + n_gates, n_words), dtype=np.uint64)
    values[:n_inputs] = input_words
    fp = 0
    nf = f_gate.shape[0]
    for g in range(n_gates):
        k = kinds[g]
        srcs = in_idx[in_ptr[g]:in_ptr[g + 1]]
        if k == WIRE:
            v = values[srcs[0]].copy()
        elif k == NOT:
            v = ~values[srcs[0]]
        elif k == AND or k == NAND:
            v = values[srcs[0]].copy()
            for s in srcs[1:]:
                v &= values[s]
            if k == NAND:
                v = ~v
        elif k == XOR:
            v = values[srcs[0]].copy()
            for s in srcs[1:]:
                v ^= values[s]
        elif k == CONST0:
            v = np.zeros(n_words, dtype=np.uint64)
        else:
            v = np.full(n_words, _ONES, dtype=np.uint64)
        while fp < nf and f_gate[fp] == g:
            w = f_word[fp]
            v[w] = ((v[w] & ~f_sa0[fp]) | f_sa1[fp]) ^ f_flip[fp]
            fp += 1
        values[n_inputs + g] = v
    return values
