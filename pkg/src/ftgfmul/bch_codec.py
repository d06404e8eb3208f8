"""Binary BCH codes: construction, systematic encoding and hard-decision decoding.

Decoding pipeline::

    re-encoding syndromes -> inversion-free Berlekamp-Massey -> root finding
                                                                (BRS for deg <= 2,
                                                                 Chien otherwise)

Word conventions: a codeword is a 0/1 uint8 vector, index j = coefficient of
x^j. Parity sits in the low ``n - k`` positions, the message above it. A root
alpha^i of the error locator marks position ``(n - i) mod n``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import CodeError, LengthMismatch, UnsatisfiableParams
from .gf_core import (DEFAULT_POLYS, MAX_M, BinPoly, FieldContext, FieldElement, build_field,
                      cyclotomic_coset, minimal_polynomial, poly_degree, poly_mod, poly_mul)


# ---------------------------------------------------------------------------
# bit helpers
# ---------------------------------------------------------------------------

def int_to_bits(value: int, length: int) -> np.ndarray:
    if value < 0 or value.bit_length() > length:
        raise LengthMismatch(f"value needs {value.bit_length()} bits, word has {length}")
    raw = value.to_bytes((length + 7) // 8 or 1, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:length].copy()


def bits_to_int(bits) -> int:
    arr = np.asarray(bits, dtype=np.uint8)
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _as_word(bits, length: int, what: str) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.shape[0] != length:
        raise LengthMismatch(f"{what} must have {length} bits, got shape {arr.shape}")
    if arr.size and arr.max() > 1:
        raise LengthMismatch(f"{what} must be a 0/1 vector")
    return arr


# ---------------------------------------------------------------------------
# code construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BchCode:
    field: FieldContext
    n: int
    k: int
    t: int
    g: BinPoly
    cosets: tuple[tuple[int, ...], ...]
    shortened_by: int = 0

    @property
    def length(self) -> int:
        """Transmitted word length n - s."""
        return self.n - self.shortened_by

    @property
    def message_len(self) -> int:
        return self.k - self.shortened_by

    @property
    def parity_len(self) -> int:
        return self.n - self.k

    @property
    def designed_distance(self) -> int:
        return 2 * self.t + 1

    @cached_property
    def _parity_rows(self) -> tuple[int, ...]:
        # x^(n-k+i) mod g for every message bit i; encoding is their XOR
        r = self.parity_len
        rows = []
        cur = poly_mod(1 << r, self.g)
        for _ in range(self.k):
            rows.append(cur)
            cur <<= 1
            if (cur >> r) & 1:
                cur ^= self.g
        return tuple(rows)

    def parity_of(self, msg_bits) -> int:
        rows = self._parity_rows
        p = 0
        for i in np.flatnonzero(msg_bits):
            p ^= rows[i]
        return p

    def describe(self) -> dict:
        return {"m": self.field.m, "poly_hex": format(self.field.poly, "X"), "n": self.n,
                "k": self.k, "t": self.t, "g_hex": format(self.g, "X"),
                "shortened_by": self.shortened_by}

    def to_json(self, **kw) -> str:
        return json.dumps(self.describe(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "BchCode":
        try:
            m, t = int(d["m"]), int(d["t"])
            poly = int(str(d["poly_hex"]), 16) if "poly_hex" in d else None
            s = int(d.get("shortened_by", 0))
        except (KeyError, ValueError, TypeError) as exc:
            raise CodeError(f"malformed code descriptor: {exc}") from exc
        code = _parent_code(m, t, poly)
        code = _shorten(code, s)
        for key in ("n", "k"):
            if key in d and int(d[key]) != getattr(code, key):
                raise CodeError(f"descriptor {key}={d[key]} disagrees with rebuilt code ({getattr(code, key)})")
        if "g_hex" in d and int(str(d["g_hex"]), 16) != code.g:
            raise CodeError("descriptor generator disagrees with rebuilt code")
        return code

    @classmethod
    def from_json(cls, text: str) -> "BchCode":
        return cls.from_dict(json.loads(text))


@lru_cache(maxsize=64)
def _parent_code(m: int, t: int, poly: int | None) -> BchCode:
    if m < 3:
        raise UnsatisfiableParams(f"BCH construction needs m >= 3, got {m}")
    if not 1 <= t < (1 << (m - 1)):
        raise UnsatisfiableParams(f"t must satisfy 1 <= t < 2^(m-1) = {1 << (m - 1)}, got {t}")
    ctx = build_field(m, poly)
    n = ctx.n
    cosets = []
    seen = set()
    g = 1
    for i in range(1, 2 * t + 1):
        if i % n in seen:
            continue
        coset = cyclotomic_coset(i, n)
        seen.update(coset)
        cosets.append(coset)
        g = poly_mul(g, minimal_polynomial(ctx, i % n))
    k = n - poly_degree(g)
    if k < 1:
        raise UnsatisfiableParams(f"no message bits left for m={m}, t={t}")
    return BchCode(ctx, n, k, t, g, tuple(cosets), 0)


def _shorten(code: BchCode, s: int) -> BchCode:
    if not 0 <= s < code.k:
        raise UnsatisfiableParams(f"cannot shorten ({code.n},{code.k}) by {s}")
    if s == code.shortened_by:
        return code
    return BchCode(code.field, code.n, code.k, code.t, code.g, code.cosets, s)


def build_code(m: int, t: int, message_len: int | None = None, poly: BinPoly | None = None) -> BchCode:
    """Narrow-sense binary BCH code; g = lcm of minimal polynomials of alpha^1..alpha^2t.

    With ``message_len`` the code is shortened to exactly that many message
    bits, escalating m first if the parent code at ``m`` is too small.
    """
    code = _parent_code(int(m), int(t), poly)
    if message_len is None:
        return code
    if message_len < 1:
        raise UnsatisfiableParams("message_len must be positive")
    while code.k < message_len:
        m += 1
        if m > MAX_M or m not in DEFAULT_POLYS:
            raise UnsatisfiableParams(f"no BCH code with t={t} carries {message_len} message bits")
        code = _parent_code(m, int(t), None)
    return _shorten(code, code.k - message_len)


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def encode(code: BchCode, message) -> np.ndarray:
    """Systematic codeword: parity (x^(n-k) msg mod g) below the message bits."""
    msg = _as_word(message, code.message_len, "message")
    word = np.zeros(code.length, dtype=np.uint8)
    word[code.parity_len:] = msg
    word[: code.parity_len] = int_to_bits(code.parity_of(msg), code.parity_len)
    return word


def is_codeword(code: BchCode, word) -> bool:
    w = _as_word(word, code.length, "word")
    return poly_mod(bits_to_int(w), code.g) == 0


# ---------------------------------------------------------------------------
# syndromes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyndromeSet:
    """S_1 .. S_2t as integers; ``values[i-1]`` is S_i."""

    values: tuple[int, ...]
    ctx: FieldContext = field(repr=False)

    def __post_init__(self):
        mul = self.ctx.mul
        for j in range(1, len(self.values) // 2 + 1):
            sj = self.values[j - 1]
            if self.values[2 * j - 1] != mul(sj, sj):
                raise CodeError(f"syndrome set violates S_{2 * j} = S_{j}^2")

    def __getitem__(self, i: int) -> int:
        if i < 1:
            raise IndexError("syndromes are 1-indexed")
        return self.values[i - 1]

    def __len__(self):
        return len(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self.ctx) for v in self.values]


def _complete(ctx: FieldContext, odd: Sequence[int], t: int) -> SyndromeSet:
    s = [0] * (2 * t)
    for idx in range(t):
        s[2 * idx] = int(odd[idx])
    for j in range(1, t + 1):
        s[2 * j - 1] = ctx.mul(s[j - 1], s[j - 1])
    return SyndromeSet(tuple(s), ctx)


def _eval_syndromes(code: BchCode, bits: np.ndarray) -> SyndromeSet:
    ctx = code.field
    odd = _kernels.odd_syndromes(bits, ctx.exp, ctx.log, ctx.n, code.t)
    return _complete(ctx, odd, code.t)


def syndromes_direct(code: BchCode, received) -> SyndromeSet:
    """S_i = r(alpha^i): odd i by Horner evaluation, even i by squaring."""
    r = _as_word(received, code.length, "received word")
    return _eval_syndromes(code, r)


def reencode_difference(code: BchCode, received) -> np.ndarray:
    """Received parity XOR the parity recomputed from the received message bits."""
    r = _as_word(received, code.length, "received word")
    p = code.parity_len
    parity = code.parity_of(r[p:])
    return r[:p] ^ int_to_bits(parity, p)


def syndromes_reencode(code: BchCode, received) -> SyndromeSet:
    """Syndromes of r evaluated on the (n-k)-bit re-encoding difference only.

    The re-encoded codeword contributes zero to every syndrome, so the
    result equals ``syndromes_direct`` while only the parity span is evaluated.
    """
    return _eval_syndromes(code, reencode_difference(code, received))


# ---------------------------------------------------------------------------
# error locator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErrorLocator:
    """sigma(x) with sigma(0) = 1; ``coeffs[j]`` multiplies x^j."""

    coeffs: tuple[int, ...]
    ctx: FieldContext = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.ctx.mul(acc, x) ^ c
        return acc

    @classmethod
    def from_coeffs(cls, ctx: FieldContext, coeffs: Sequence[int]) -> "ErrorLocator":
        """Trim leading zeros and scale so the constant term is 1."""
        c = [int(v) for v in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c or c[0] == 0:
            raise CodeError("error locator needs a nonzero constant term")
        if c[0] != 1:
            inv = ctx.inv(c[0])
            c = [ctx.mul(v, inv) for v in c]
        return cls(tuple(c), ctx)

    @classmethod
    def from_positions(cls, ctx: FieldContext, positions: Sequence[int]) -> "ErrorLocator":
        """prod (1 + alpha^j x) over the error positions."""
        c = [1]
        for j in positions:
            x = ctx.alpha_pow(j)
            nxt = c + [0]
            for d in range(len(c)):
                nxt[d + 1] ^= ctx.mul(c[d], x)
            c = nxt
        return cls(tuple(c), ctx)


def berlekamp_massey(code: BchCode, s: SyndromeSet) -> ErrorLocator:
    """Inversion-free Berlekamp-Massey over the 2t syndromes.

    The update ``lam <- gamma*lam + delta*x*b`` never divides; the single
    normalisation at the end makes sigma(0) = 1.
    """
    ctx = code.field
    mul = ctx.mul
    two_t = 2 * code.t
    if len(s) != two_t:
        raise LengthMismatch(f"expected {two_t} syndromes, got {len(s)}")
    if s.is_zero():
        return ErrorLocator((1,), ctx)
    syn = s.values
    lam = [1] + [0] * two_t
    b = [1] + [0] * two_t
    k = 0
    gamma = 1
    for r in range(two_t):
        delta = 0
        for i in range(min(r, two_t) + 1):
            if lam[i]:
                delta ^= mul(lam[i], syn[r - i])
        new = [mul(gamma, v) for v in lam]
        if delta:
            for i in range(two_t):
                new[i + 1] ^= mul(delta, b[i])
        if delta and k >= 0:
            b = lam
            k = -k - 1
            gamma = delta
        else:
            b = [0] + b[:-1]
            k += 1
        lam = new
    return ErrorLocator.from_coeffs(ctx, lam)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def _root_position(ctx: FieldContext, root: int) -> int:
    return (ctx.n - int(ctx.log[root])) % ctx.n


def chien_search(code: BchCode, loc: ErrorLocator) -> list[int]:
    """Evaluate sigma at alpha^0..alpha^(n-1); root alpha^i marks position n - i."""
    ctx = code.field
    if loc.degree == 0:
        return []
    vals = _kernels.poly_eval_powers(np.asarray(loc.coeffs, dtype=np.int64), ctx.exp, ctx.log, ctx.n)
    roots = np.flatnonzero(vals == 0)
    return sorted(int((ctx.n - i) % ctx.n) for i in roots)


def linearized_images(ctx: FieldContext, coeffs: Sequence[int]) -> list[int]:
    """L(alpha^k), k = 0..m-1, for L(y) = sum_i coeffs[i] * y^(2^i)."""
    out = []
    for kk in range(ctx.m):
        basis = 1 << kk
        acc, y = 0, basis
        for c in coeffs:
            acc ^= ctx.mul(int(c), y)
            y = ctx.mul(y, y)
        out.append(acc)
    return out


def linearized_eval(ctx: FieldContext, L_images: Sequence, y) -> FieldElement:
    """sum_k y_k L(alpha^k) over the polynomial-basis coordinates of y."""
    v = int(y)
    acc = 0
    for kk in range(ctx.m):
        if (v >> kk) & 1:
            acc ^= int(L_images[kk])
    return FieldElement(acc, ctx)


def _affine_solve_int(m: int, images: Sequence[int], beta: int) -> list[int]:
    # row i: which unknowns y_k feed coordinate i; Gauss-Jordan over GF(2)
    rows = []
    for i in range(m):
        mask = 0
        for kk in range(m):
            mask |= ((images[kk] >> i) & 1) << kk
        rows.append([mask, (beta >> i) & 1])
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, m) if (rows[i][0] >> col) & 1), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(m):
            if i != r and (rows[i][0] >> col) & 1:
                rows[i][0] ^= rows[r][0]
                rows[i][1] ^= rows[r][1]
        pivots.append(col)
        r += 1
    if any(rows[i][1] for i in range(r, m)):
        return []
    free = [c for c in range(m) if c not in pivots]
    particular = 0
    for i, col in enumerate(pivots):
        if rows[i][1]:
            particular |= 1 << col
    kernel = []
    for fcol in free:
        vec = 1 << fcol
        for i, col in enumerate(pivots):
            if (rows[i][0] >> fcol) & 1:
                vec |= 1 << col
        kernel.append(vec)
    sols = []
    for combo in range(1 << len(kernel)):
        y = particular
        for bit, vec in enumerate(kernel):
            if (combo >> bit) & 1:
                y ^= vec
        sols.append(y)
    return sorted(sols)


def affine_solve(ctx: FieldContext, L_images: Sequence, beta) -> list[FieldElement]:
    """All y with L(y) = beta, by Gaussian elimination on the coordinate matrix.

    Returns an empty list or the whole affine solution space (2^nullity
    elements), each checked by substitution.
    """
    images = [int(v) for v in L_images]
    if len(images) != ctx.m:
        raise LengthMismatch(f"need {ctx.m} basis images, got {len(images)}")
    b = int(beta)
    sols = _affine_solve_int(ctx.m, images, b)
    for y in sols:
        if linearized_eval(ctx, images, y).value != b:
            raise CodeError(f"affine solution {y:#x} fails substitution")
    return [FieldElement(y, ctx) for y in sols]


@lru_cache(maxsize=64)
def _artin_schreier_images(ctx: FieldContext) -> tuple[int, ...]:
    # L(z) = z^2 + z
    return tuple(linearized_images(ctx, (1, 1)))


def quadratic_roots(ctx: FieldContext, b: int, c: int) -> list[int]:
    """Roots of y^2 + b y + c via the substitution y = b z, z^2 + z = c / b^2."""
    if b == 0:
        return [ctx.sqrt(c)]
    beta = ctx.div(c, ctx.mul(b, b))
    zs = _affine_solve_int(ctx.m, _artin_schreier_images(ctx), beta)
    return sorted(ctx.mul(b, z) for z in zs)


def brs_find_roots(code: BchCode, loc: ErrorLocator) -> list[int]:
    """Error positions from sigma: closed form for degree 1, affine solve for
    degree 2, Chien search from degree 3 upwards."""
    ctx = code.field
    nu = loc.degree
    if nu == 0:
        return []
    if nu == 1:
        return [_root_position(ctx, ctx.inv(loc.coeffs[1]))]
    if nu == 2:
        s0, s1, s2 = loc.coeffs
        roots = quadratic_roots(ctx, ctx.div(s1, s2), ctx.div(s0, s2))
        return sorted(_root_position(ctx, x) for x in roots if x)
    return chien_search(code, loc)


ROOT_FINDERS = {"chien": chien_search, "brs": brs_find_roots}


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

class DecodeStatus(str, Enum):
    NO_ERROR = "no_error"
    CORRECTED = "corrected"
    UNCORRECTABLE = "uncorrectable"


@dataclass(frozen=True)
class DecodeOutcome:
    word: np.ndarray
    error: np.ndarray
    status: DecodeStatus
    positions: tuple[int, ...] = ()
    syndrome_nonzero: bool = False
    """True when the returned word still has a nonzero syndrome (uncorrectable)."""

    def message(self, code: BchCode) -> np.ndarray:
        return self.word[code.parity_len:]

    def to_dict(self) -> dict:
        return {"status": self.status.value, "positions": list(self.positions),
                "syndrome_nonzero": self.syndrome_nonzero}


def decode(code: BchCode, received, root_finder: str = "brs") -> DecodeOutcome:
    r = _as_word(received, code.length, "received word")
    zero = np.zeros(code.length, dtype=np.uint8)
    s = syndromes_reencode(code, r)
    if s.is_zero():
        return DecodeOutcome(r.copy(), zero, DecodeStatus.NO_ERROR)
    fail = DecodeOutcome(r.copy(), zero, DecodeStatus.UNCORRECTABLE, (), True)
    loc = berlekamp_massey(code, s)
    if loc.degree > code.t:
        return fail
    positions = ROOT_FINDERS[root_finder](code, loc)
    if len(positions) != loc.degree or any(p >= code.length for p in positions):
        return fail
    err = zero.copy()
    err[positions] = 1
    word = r ^ err
    if not syndromes_direct(code, word).is_zero():
        return fail
    return DecodeOutcome(word, err, DecodeStatus.CORRECTED, tuple(positions), False)
