"""Command-line front end.

All polynomials, field elements and bit vectors travel as hex strings with
bit j = coefficient of x^j. Output is JSON on stdout; ``--pretty`` indents it.
Exit status: 0 success, 1 computation failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bch_codec import (ROOT_FINDERS, BchCode, DecodeStatus, ErrorLocator, bits_to_int, build_code,
                        decode, encode, int_to_bits)
from .errors import FtgfError
from .fault_campaign import CampaignConfig, run_campaign, run_protected_multiply, write_report
from .gf_core import build_field, poly_from_hex
from .netlist import Netlist, faults_from_json, metrics
from .pb_multiplier import (build_nand_multiplier_netlist, mul_interleaved_int, mul_reference_int,
                            netlist_multiply)


class UsageError(Exception):
    pass


def hex_arg(text: str) -> int:
    try:
        value = poly_from_hex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex string: {text!r}") from None
    return value


def hex_list_arg(text: str) -> list[int]:
    return [hex_arg(part) for part in text.split(",")]


def _emit(obj, args) -> None:
    print(json.dumps(obj, indent=2 if args.pretty else None))


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_code(path: str) -> BchCode:
    try:
        return BchCode.from_json(_read(path))
    except (ValueError, FtgfError) as exc:
        raise UsageError(f"bad code file {path}: {exc}") from exc


def _load_netlist(path: str) -> Netlist:
    try:
        return Netlist.from_json(_read(path))
    except (ValueError, FtgfError) as exc:
        raise UsageError(f"bad netlist file {path}: {exc}") from exc


def _field(args):
    try:
        return build_field(args.m, args.poly)
    except FtgfError as exc:
        raise UsageError(str(exc)) from exc


def _check_element(ctx, value: int, name: str) -> int:
    if value >= ctx.size:
        raise UsageError(f"--{name} 0x{value:X} does not fit GF(2^{ctx.m})")
    return value


# -- subcommands --------------------------------------------------------------

def cmd_mul(args) -> int:
    ctx = _field(args)
    a = _check_element(ctx, args.a, "a")
    b = _check_element(ctx, args.b, "b")
    net = build_nand_multiplier_netlist(ctx)
    results = {
        "ref": mul_reference_int(ctx, a, b),
        "interleaved": mul_interleaved_int(ctx, a, b)[0],
        "netlist": int(netlist_multiply(net, [a], [b])[0]),
    }
    agree = len(set(results.values())) == 1
    _emit({"product": format(results[args.engine], "X"), "engine": args.engine,
           "engines": {k: format(v, "X") for k, v in results.items()}, "agree": agree}, args)
    return 0 if agree else 1


def cmd_code_build(args) -> int:
    try:
        code = build_code(args.m, args.t, args.msg_len, args.poly)
    except FtgfError as exc:
        raise UsageError(str(exc)) from exc
    _emit(code.describe(), args)
    return 0


def _data_bits(value: int, length: int) -> np.ndarray:
    if value.bit_length() > length:
        raise UsageError(f"--data needs {value.bit_length()} bits but the word has {length}")
    return int_to_bits(value, length)


def cmd_encode(args) -> int:
    code = _load_code(args.code)
    word = encode(code, _data_bits(args.data, code.message_len))
    _emit({"codeword": format(bits_to_int(word), "X"), "length": code.length}, args)
    return 0


def cmd_decode(args) -> int:
    code = _load_code(args.code)
    out = decode(code, _data_bits(args.data, code.length), root_finder=args.method)
    report = out.to_dict()
    report["word"] = format(bits_to_int(out.word), "X")
    report["message"] = format(bits_to_int(out.message(code)), "X")
    _emit(report, args)
    return 1 if args.strict and out.status is DecodeStatus.UNCORRECTABLE else 0


def cmd_roots(args) -> int:
    code = _load_code(args.code)
    ctx = code.field
    for v in args.sigma:
        _check_element(ctx, v, "sigma")
    try:
        loc = ErrorLocator.from_coeffs(ctx, args.sigma)
    except FtgfError as exc:
        raise UsageError(str(exc)) from exc
    positions = ROOT_FINDERS[args.method](code, loc)
    roots = [ctx.alpha_pow(ctx.n - p) for p in positions]
    _emit({"method": args.method, "degree": loc.degree, "positions": positions,
           "roots": [format(r, "X") for r in roots],
           "roots_bits": [format(r, f"0{ctx.m}b") for r in roots]}, args)
    return 0


def cmd_inject(args) -> int:
    net = _load_netlist(args.netlist)
    try:
        faults = faults_from_json(_read(args.faults))
    except (ValueError, FtgfError) as exc:
        raise UsageError(f"bad fault file {args.faults}: {exc}") from exc
    m = len(net.outputs)
    for name, v in (("a", args.a), ("b", args.b)):
        if v >> m:
            raise UsageError(f"--{name} 0x{v:X} wider than the {m}-bit netlist operands")
    try:
        clean = int(netlist_multiply(net, [args.a], [args.b])[0])
        faulty = int(netlist_multiply(net, [args.a], [args.b], faults)[0])
    except FtgfError as exc:
        raise UsageError(str(exc)) from exc
    diff = clean ^ faulty
    report = {"fault_free": format(clean, "X"), "faulty": format(faulty, "X"),
              "diff_mask": format(diff, "X"), "error_weight": bin(diff).count("1"),
              "flipped_bits": [j for j in range(m) if (diff >> j) & 1],
              "faults": [f.to_dict() for f in faults]}
    if args.t is not None:
        meta = net.meta
        if "m" not in meta or "poly" not in meta:
            raise UsageError("--t needs a multiplier netlist carrying m/poly metadata")
        ctx = build_field(int(meta["m"]), int(meta["poly"], 16))
        code = build_code(ctx.m, args.t, ctx.m, ctx.poly)
        result, out = run_protected_multiply(ctx, code, ctx.element(args.a), ctx.element(args.b),
                                             faults, net=net)
        report["protected"] = {"result": format(result.value, "X"),
                               "correct": result.value == clean, **out.to_dict()}
    _emit(report, args)
    return 0


def cmd_campaign(args) -> int:
    try:
        cfg = CampaignConfig.from_file(args.config)
    except FtgfError as exc:
        raise UsageError(str(exc)) from exc
    report = run_campaign(cfg)
    if args.out:
        write_report(report, args.out)
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        print(report.to_json(pretty=args.pretty))
    return 0


def cmd_metrics(args) -> int:
    _emit(metrics(_load_netlist(args.netlist)), args)
    return 0


def cmd_netlist(args) -> int:
    ctx = _field(args)
    net = build_nand_multiplier_netlist(ctx, args.and_mode)
    text = net.to_json(indent=2 if args.pretty else None)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        _emit({"written": args.out, "gates": len(net.gates)}, args)
    else:
        print(text)
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent JSON output")

    p = argparse.ArgumentParser(prog="ftgfmul", description="Fault-tolerant GF(2^m) multiplier toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def field_args(sp):
        sp.add_argument("--m", type=int, required=True, help="extension degree")
        sp.add_argument("--poly", type=hex_arg, default=None,
                        help="field polynomial in hex (default: built-in primitive polynomial)")

    sp = sub.add_parser("mul", parents=[common], help="multiply two field elements")
    field_args(sp)
    sp.add_argument("--a", type=hex_arg, required=True)
    sp.add_argument("--b", type=hex_arg, required=True)
    sp.add_argument("--engine", choices=("ref", "interleaved", "netlist"), default="ref")
    sp.set_defaults(func=cmd_mul)

    sp = sub.add_parser("code", help="BCH code construction")
    code_sub = sp.add_subparsers(dest="code_command", required=True)
    cb = code_sub.add_parser("build", parents=[common], help="emit a code descriptor")
    cb.add_argument("--m", type=int, required=True)
    cb.add_argument("--t", type=int, required=True)
    cb.add_argument("--msg-len", type=int, default=None)
    cb.add_argument("--poly", type=hex_arg, default=None)
    cb.set_defaults(func=cmd_code_build)

    sp = sub.add_parser("encode", parents=[common], help="systematically encode a message")
    sp.add_argument("--code", required=True, help="code descriptor JSON file")
    sp.add_argument("--data", type=hex_arg, required=True, help="message bits in hex")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", parents=[common], help="decode a received word")
    sp.add_argument("--code", required=True)
    sp.add_argument("--data", type=hex_arg, required=True, help="received word in hex")
    sp.add_argument("--method", choices=sorted(ROOT_FINDERS), default="brs")
    sp.add_argument("--strict", action="store_true", help="exit 1 when uncorrectable")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("roots", parents=[common], help="error positions from a locator polynomial")
    sp.add_argument("--code", required=True)
    sp.add_argument("--sigma", type=hex_list_arg, required=True,
                    help="comma separated coefficients, constant term first")
    sp.add_argument("--method", choices=sorted(ROOT_FINDERS), default="brs")
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("inject", parents=[common], help="differential fault injection")
    sp.add_argument("--netlist", required=True)
    sp.add_argument("--faults", required=True)
    sp.add_argument("--a", type=hex_arg, required=True)
    sp.add_argument("--b", type=hex_arg, required=True)
    sp.add_argument("--t", type=int, default=None, help="also run the BCH-protected pipeline")
    sp.set_defaults(func=cmd_inject)

    sp = sub.add_parser("campaign", parents=[common], help="run a fault-injection campaign")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=None, help="write JSON here and CSV next to it")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_campaign)

    sp = sub.add_parser("metrics", parents=[common], help="gate census and critical depth")
    sp.add_argument("--netlist", required=True)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("netlist", parents=[common], help="emit the NAND multiplier netlist")
    field_args(sp)
    sp.add_argument("--and-mode", choices=("and", "nand"), default="and")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_netlist)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ftgfmul: error: {exc}", file=sys.stderr)
        return 2
    except FtgfError as exc:
        print(f"ftgfmul: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
