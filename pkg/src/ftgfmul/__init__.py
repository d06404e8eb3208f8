"""Fault-tolerant GF(2^m) polynomial-basis multiplication.

NAND-only interleaved multiplier netlists, binary BCH protection with a
re-encoding syndrome front end, inversion-free Berlekamp-Massey, Chien and
affine-polynomial root finding, and fault-injection campaigns.
"""
__version__ = "0.1.0"

from ._kernels import BACKEND
from .bch_codec import (BchCode, DecodeOutcome, DecodeStatus, ErrorLocator, SyndromeSet,
                        affine_solve, berlekamp_massey, brs_find_roots, build_code, chien_search,
                        decode, encode, linearized_eval, syndromes_direct, syndromes_reencode)
from .gf_core import (FieldContext, FieldElement, build_field, gf_add, gf_inv, gf_mul,
                      minimal_polynomial)
from .netlist import Fault, Netlist, critical_depth, evaluate, gate_census
from .pb_multiplier import build_nand_multiplier_netlist, mul_interleaved, mul_reference
