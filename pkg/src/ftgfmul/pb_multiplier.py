"""Polynomial-basis GF(2^m) multipliers.

Three functionally equivalent paths:

* ``mul_reference``  - schoolbook product then long division; the oracle.
* ``mul_interleaved`` - MSB-first shift/reduce/add recurrence with trace.
* ``build_nand_multiplier_netlist`` - the same recurrence unrolled into m
  combinational slices whose additions are XOR-free NAND arrays.

Netlist layout, slice k = 1..m (P^(0) = 0)::

    G module:  Q = P^(k-1)*x mod f  =  (P << 1) + p_{m-1} * f
    H module:  P^(k) = Q + b_{m-k} * A

Both modules are the same m-lane conditional adder ``out_j = x_j + (c * v_j)``.
The selection terms ``c * v_j`` live in ``<module>.sel`` groups, the NAND
adder array in the module's own group. Each adder lane uses
t = x NAND s, u = x NAND t, w = t NAND s, o = u NAND w.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContextMismatch
from .gf_core import FieldContext, FieldElement, poly_mod, poly_mul
from .netlist import Netlist, NetlistBuilder, simulate

AND_MODES = ("and", "nand")


def _shared_ctx(a: FieldElement, b: FieldElement) -> FieldContext:
    if a.ctx is not b.ctx and a.ctx != b.ctx:
        raise ContextMismatch(f"{a.ctx!r} vs {b.ctx!r}")
    return a.ctx


def mul_reference_int(ctx: FieldContext, a: int, b: int) -> int:
    return poly_mod(poly_mul(int(a), int(b)), ctx.poly)


def mul_reference(a: FieldElement, b: FieldElement) -> FieldElement:
    ctx = _shared_ctx(a, b)
    return FieldElement(mul_reference_int(ctx, a.value, b.value), ctx)


@dataclass(frozen=True)
class MulTrace:
    """Partial products P^(0..m) and the bit p_{m-1}^(k-1) that drove each reduction."""

    partials: tuple[FieldElement, ...]
    reduce_bits: tuple[int, ...]

    @property
    def product(self) -> FieldElement:
        return self.partials[-1]


def mul_interleaved_int(ctx: FieldContext, a: int, b: int) -> tuple[int, list[int], list[int]]:
    a, b = int(a), int(b)
    m = ctx.m
    mask = ctx.n
    f_low = ctx.poly & mask
    p = 0
    partials = [0]
    reduce_bits = []
    for k in range(1, m + 1):
        top = (p >> (m - 1)) & 1
        reduce_bits.append(top)
        p = ((p << 1) & mask) ^ (f_low if top else 0)
        if (b >> (m - k)) & 1:
            p ^= a
        partials.append(p)
    return p, partials, reduce_bits


def mul_interleaved(a: FieldElement, b: FieldElement) -> tuple[FieldElement, MulTrace]:
    ctx = _shared_ctx(a, b)
    p, partials, bits = mul_interleaved_int(ctx, a.value, b.value)
    trace = MulTrace(tuple(FieldElement(v, ctx) for v in partials), tuple(bits))
    return FieldElement(p, ctx), trace


# ---------------------------------------------------------------------------
# netlist
# ---------------------------------------------------------------------------

def _select(bld: NetlistBuilder, c: str, v: str, prefix: str, j: int, and_mode: str) -> str:
    group = f"{prefix}.sel"
    if and_mode == "and":
        return bld.gate("AND", (c, v), f"{prefix}.s{j}", group)
    n = bld.gate("NAND", (c, v), f"{prefix}.sn{j}", group)
    return bld.gate("NAND", (n, n), f"{prefix}.s{j}", group)


def add_xor_nand(bld: NetlistBuilder, x: str, y: str, prefix: str, j, group: str) -> str:
    """x XOR y from four NAND gates in three levels; returns the output node id."""
    t = bld.gate("NAND", (x, y), f"{prefix}.t{j}", group)
    u = bld.gate("NAND", (x, t), f"{prefix}.u{j}", group)
    w = bld.gate("NAND", (t, y), f"{prefix}.w{j}", group)
    return bld.gate("NAND", (u, w), f"{prefix}.o{j}", group)


def _conditional_add(bld, xs, c, vs, prefix, and_mode):
    sel = [_select(bld, c, v, prefix, j, and_mode) for j, v in enumerate(vs)]
    return [add_xor_nand(bld, x, s, prefix, j, prefix) for j, (x, s) in enumerate(zip(xs, sel))]


def build_nand_multiplier_netlist(ctx: FieldContext, and_mode: str = "and") -> Netlist:
    """Unrolled interleaved multiplier; inputs a0..a{m-1}, b0..b{m-1}, outputs c0..c{m-1}.

    ``and_mode="nand"`` realises every selection AND as NAND followed by a
    NAND inverter so the whole netlist is NAND-only (plus constants).
    """
    if and_mode not in AND_MODES:
        raise ValueError(f"and_mode must be one of {AND_MODES}, got {and_mode!r}")
    m = ctx.m
    a = [f"a{j}" for j in range(m)]
    b = [f"b{j}" for j in range(m)]
    bld = NetlistBuilder(a + b)
    zero = bld.const(0)
    f_bits = [bld.const((ctx.poly >> j) & 1) for j in range(m)]
    p = [zero] * m
    for k in range(1, m + 1):
        q = _conditional_add(bld, [zero] + p[:-1], p[m - 1], f_bits, f"k{k}.G", and_mode)
        p = _conditional_add(bld, q, b[m - k], a, f"k{k}.H", and_mode)
    outs = []
    for j, node in enumerate(p):
        outs.append(bld.gate("WIRE", (node,), f"c{j}", "out"))
    meta = {"kind": "pb_multiplier", "m": m, "poly": format(ctx.poly, "X"), "and_mode": and_mode}
    return bld.build(outs, meta)


def xor_nand_netlist() -> Netlist:
    """Stand-alone four-NAND XOR replacement circuit, inputs (a, b), output o."""
    bld = NetlistBuilder(["a", "b"])
    out = add_xor_nand(bld, "a", "b", "x", "", "xor")
    return bld.build([out])


def module_groups(m: int) -> list[str]:
    """Names of the G and H adder groups, slice by slice."""
    return [f"k{k}.{mod}" for k in range(1, m + 1) for mod in ("G", "H")]


def operand_bits(values, m: int) -> np.ndarray:
    vals = np.asarray(values, dtype=np.int64).reshape(-1)
    return ((vals[:, None] >> np.arange(m)) & 1).astype(np.uint8)


def bits_value(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    return (bits << np.arange(bits.shape[-1])).sum(axis=-1)


def netlist_multiply(net: Netlist, a, b, faults=(), lane_faults=()) -> np.ndarray:
    """Products of the integer arrays ``a`` and ``b`` computed by simulating ``net``."""
    m = len(net.outputs)
    a = np.asarray(a, dtype=np.int64).reshape(-1)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    vectors = np.concatenate([operand_bits(a, m), operand_bits(b, m)], axis=1)
    return bits_value(simulate(net, vectors, faults, lane_faults))
