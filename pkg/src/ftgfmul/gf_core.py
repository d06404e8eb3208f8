"""Binary polynomial arithmetic and GF(2^m) arithmetic in polynomial basis.

Polynomials over GF(2) are plain Python ints: bit j is the coefficient of
x^j (LSB = constant term). The same bit order is used for field elements,
where bit j is the coordinate on alpha^j. Hex strings follow the same
convention, so x^3 + x^2 + 1 is ``"D"``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import ContextMismatch, DegreeMismatch, FieldError, ReduciblePolynomial, ZeroInverse

BinPoly = int

MIN_M = 2
MAX_M = 16

# Primitive polynomials (Lin & Costello table), keyed by degree.
DEFAULT_POLYS = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


# ---------------------------------------------------------------------------
# GF(2)[x]
# ---------------------------------------------------------------------------

def poly_degree(p: BinPoly) -> int:
    """Degree of ``p``; the zero polynomial has degree -1."""
    return p.bit_length() - 1


def poly_mul(a: BinPoly, b: BinPoly) -> BinPoly:
    """Carry-less (GF(2)[x]) product."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def poly_divmod(a: BinPoly, b: BinPoly) -> tuple[BinPoly, BinPoly]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = poly_degree(b)
    q = 0
    while True:
        shift = poly_degree(a) - db
        if shift < 0:
            return q, a
        q |= 1 << shift
        a ^= b << shift


def poly_mod(a: BinPoly, b: BinPoly) -> BinPoly:
    return poly_divmod(a, b)[1]


def poly_gcd(a: BinPoly, b: BinPoly) -> BinPoly:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_lcm(a: BinPoly, b: BinPoly) -> BinPoly:
    return poly_divmod(poly_mul(a, b), poly_gcd(a, b))[0]


def poly_to_hex(p: BinPoly) -> str:
    return format(p, "X")


def poly_from_hex(text: str) -> BinPoly:
    """Parse a hex coefficient string (optional ``0x`` prefix)."""
    s = text.strip()
    if s.lower().startswith("0x"):
        s = s[2:]
    if not s:
        raise ValueError(f"empty hex string: {text!r}")
    return int(s, 16)


def poly_str(p: BinPoly, var: str = "x") -> str:
    if p == 0:
        return "0"
    terms = []
    for j in range(poly_degree(p), -1, -1):
        if (p >> j) & 1:
            terms.append("1" if j == 0 else var if j == 1 else f"{var}^{j}")
    return " + ".join(terms)


def is_irreducible(f: BinPoly) -> bool:
    """Trial division by every polynomial of degree 1 .. deg(f)//2."""
    d = poly_degree(f)
    if d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for q in range(1 << e, 1 << (e + 1)):
            if poly_mod(f, q) == 0:
                return False
    return True


def _order_of(elem: int, f: BinPoly, m: int) -> int:
    """Multiplicative order of ``elem`` modulo ``f`` (f irreducible of degree m)."""
    n = (1 << m) - 1
    x = elem
    for k in range(1, n + 1):
        if x == 1:
            return k
        x = poly_mod(poly_mul(x, elem), f)
    raise FieldError("element has no finite order; modulus is not irreducible")


def is_primitive(f: BinPoly) -> bool:
    m = poly_degree(f)
    return m >= 2 and is_irreducible(f) and _order_of(0b10, f, m) == (1 << m) - 1


def cyclotomic_coset(i: int, n: int) -> tuple[int, ...]:
    """2-cyclotomic coset of ``i`` modulo ``n``, in generation order."""
    i %= n
    coset = [i]
    j = (2 * i) % n
    while j != i:
        coset.append(j)
        j = (2 * j) % n
    return tuple(coset)


# ---------------------------------------------------------------------------
# GF(2^m)
# ---------------------------------------------------------------------------

class FieldContext:
    """A constructed GF(2^m): modulus, exp/log tables over a primitive element.

    ``exp[i]`` is gamma^i for the primitive element gamma (gamma = x whenever the
    modulus is primitive); ``exp`` is stored twice over so sums of two logs can
    index it without a modulo. ``log[0]`` is -1.
    """

    __slots__ = ("m", "poly", "size", "n", "gamma", "primitive_poly", "exp", "log", "_sqrt_exp")

    def __init__(self, m: int, poly: BinPoly):
        self.m = m
        self.poly = poly
        self.size = 1 << m
        self.n = self.size - 1
        self.primitive_poly = _order_of(0b10, poly, m) == self.n
        if self.primitive_poly:
            self.gamma = 0b10
        else:
            self.gamma = next(g for g in range(3, self.size) if _order_of(g, poly, m) == self.n)
        exp = np.empty(2 * self.n, dtype=np.int64)
        log = np.full(self.size, -1, dtype=np.int64)
        x = 1
        for i in range(self.n):
            exp[i] = x
            log[x] = i
            x = poly_mod(poly_mul(x, self.gamma), poly)
        exp[self.n:] = exp[: self.n]
        exp.flags.writeable = False
        log.flags.writeable = False
        self.exp = exp
        self.log = log
        self._sqrt_exp = (self.n + 1) // 2  # a^(2^(m-1)) = sqrt(a)

    def __repr__(self):
        return f"FieldContext(m={self.m}, poly=0x{self.poly:X})"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self):
        return hash((self.m, self.poly))

    def __reduce__(self):
        return (build_field, (self.m, self.poly))

    # int-level arithmetic, used on hot paths across the package
    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def mul_clmul(self, a: int, b: int) -> int:
        return poly_mod(poly_mul(a, b), self.poly)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("zero has no multiplicative inverse")
        return int(self.exp[(self.n - self.log[a]) % self.n])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroInverse("division by zero")
        if a == 0:
            return 0
        return int(self.exp[(self.log[a] - self.log[b]) % self.n])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        return int(self.exp[(self.log[a] * e) % self.n])

    def sqrt(self, a: int) -> int:
        if a == 0:
            return 0
        return int(self.exp[(self.log[a] * self._sqrt_exp) % self.n])

    def alpha_pow(self, i: int) -> int:
        return int(self.exp[i % self.n])

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.size)]

    def trace(self, a: int) -> int:
        """Absolute trace a + a^2 + ... + a^(2^(m-1)), either 0 or 1."""
        acc, x = 0, a
        for _ in range(self.m):
            acc ^= x
            x = self.mul(x, x)
        return acc


@dataclass(frozen=True, slots=True)
class FieldElement:
    """An element of GF(2^m) held as its coordinate bitvector."""

    value: int
    ctx: FieldContext

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.size:
            raise DegreeMismatch(f"value {self.value:#x} does not fit {self.ctx.m} coordinates")

    @property
    def coords(self) -> tuple[int, ...]:
        """(y_0, ..., y_{m-1}), coefficient of alpha^j at index j."""
        return tuple((self.value >> j) & 1 for j in range(self.ctx.m))

    def bits(self) -> str:
        """Coordinates written high to low, e.g. ``'011'`` for alpha + 1 in GF(2^3)."""
        return format(self.value, f"0{self.ctx.m}b")

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value ^ other.value, self.ctx)

    __sub__ = __add__

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx.mul_clmul(self.value, other.value), self.ctx)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx.div(self.value, other.value), self.ctx)

    def __pow__(self, e: int):
        return FieldElement(self.ctx.pow(self.value, e), self.ctx)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx.inv(self.value), self.ctx)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement(0x{self.value:X}, m={self.ctx.m})"


@lru_cache(maxsize=64)
def _build_field_cached(m: int, f: BinPoly) -> FieldContext:
    if not MIN_M <= m <= MAX_M:
        raise DegreeMismatch(f"m must lie in [{MIN_M}, {MAX_M}], got {m}")
    if poly_degree(f) != m:
        raise DegreeMismatch(f"degree of 0x{f:X} is {poly_degree(f)}, expected {m}")
    if not is_irreducible(f):
        raise ReduciblePolynomial(f"{poly_str(f)} is reducible over GF(2)")
    return FieldContext(m, f)


def build_field(m: int, f: BinPoly | None = None) -> FieldContext:
    """Validate ``f`` and build the field tables; ``f`` defaults to a known primitive polynomial."""
    if f is None:
        if m not in DEFAULT_POLYS:
            raise DegreeMismatch(f"no default polynomial for m={m}")
        f = DEFAULT_POLYS[m]
    return _build_field_cached(int(m), int(f))


def gf_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Carry-less product reduced modulo the field polynomial."""
    return a * b


def gf_mul_table(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.ctx.mul(a.value, b.value), a.ctx)


def gf_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def gf_mul_batch(ctx: FieldContext, a, b) -> np.ndarray:
    """Element-wise products of two integer arrays via the active kernel backend."""
    return _kernels.clmul_reduce(a, b, ctx.m, ctx.poly)


def minimal_polynomial(ctx: FieldContext, i: int) -> BinPoly:
    """Minimal polynomial over GF(2) of gamma^i: product of (x + gamma^j) over the coset of i."""
    if not 0 <= i < ctx.n:
        raise ValueError(f"exponent {i} outside [0, {ctx.n})")
    coeffs = [1]  # GF(2^m) coefficients, low degree first
    for j in cyclotomic_coset(i, ctx.n):
        root = ctx.alpha_pow(j)
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] ^= c
            nxt[d] ^= ctx.mul(c, root)
        coeffs = nxt
    out = 0
    for d, c in enumerate(coeffs):
        if c not in (0, 1):
            raise FieldError(f"minimal polynomial of alpha^{i} left GF(2): coefficient {c}")
        out |= c << d
    return out
