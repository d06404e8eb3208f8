"""BCH-protected multiplication and Monte Carlo fault-injection campaigns.

Dataflow of one protected multiply::

    a, b --> multiplier (netlist, possibly faulty) --> message bits ---+
    a, b --> golden product --> encoder --> parity ------------------+--> decoder --> result

The encoder and decoder are treated as fault-free. Parity comes from the
golden product so that a corrupted multiplier output is visible to the
decoder as a codeword error.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .bch_codec import BchCode, DecodeOutcome, DecodeStatus, build_code, decode, encode
from .errors import ConfigInvalid, FtgfError
from .gf_core import FieldContext, FieldElement, build_field, gf_mul_batch, poly_from_hex
from .netlist import Fault, FaultModel, Netlist, critical_depth, gate_census
from .pb_multiplier import build_nand_multiplier_netlist, mul_reference, netlist_multiply

REPORT_VERSION = 1
RNG_NAME = "numpy.random.PCG64"
OUTCOMES = ("no_error", "corrected_exact", "miscorrected", "uncorrectable")


@dataclass(frozen=True)
class CampaignConfig:
    m: int
    t: int
    trials: int
    seed: int = 0
    poly: str | None = None
    message_len: int | None = None
    source: str = "flips"
    weight: int = 0
    fault_models: tuple[str, ...] = ("sa0", "sa1", "flip")
    faults_per_trial: int = 1
    and_mode: str = "and"
    chunk_size: int = 256
    workers: int = 1
    output: str | None = None
    record_timing: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigInvalid(f"unknown config keys: {sorted(extra)}")
        try:
            kw = dict(d)
            if "fault_models" in kw:
                kw["fault_models"] = tuple(kw["fault_models"])
            cfg = cls(**kw)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path: str) -> "CampaignConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigInvalid("config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fault_models"] = list(self.fault_models)
        return d

    def validate(self) -> None:
        ints = ("m", "t", "trials", "seed", "weight", "faults_per_trial", "chunk_size", "workers")
        for name in ints:
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise ConfigInvalid(f"{name} must be an integer")
        if self.trials < 1:
            raise ConfigInvalid("trials must be >= 1")
        if self.seed < 0:
            raise ConfigInvalid("seed must be non-negative")
        if self.source not in ("flips", "gate"):
            raise ConfigInvalid(f"source must be 'flips' or 'gate', got {self.source!r}")
        if self.chunk_size < 1 or self.workers < 1:
            raise ConfigInvalid("chunk_size and workers must be >= 1")
        if self.faults_per_trial < 1:
            raise ConfigInvalid("faults_per_trial must be >= 1")
        for model in self.fault_models:
            if model not in {fm.value for fm in FaultModel}:
                raise ConfigInvalid(f"unknown fault model {model!r}")
        if not self.fault_models:
            raise ConfigInvalid("fault_models must not be empty")
        if self.message_len is not None and self.message_len < self.m:
            raise ConfigInvalid("message_len must be at least m to carry the product")
        try:
            ctx, code, _ = _setup(self.m, self.poly, self.t, self.message_len, self.and_mode)
        except FtgfError as exc:
            raise ConfigInvalid(str(exc)) from exc
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from exc
        if not 0 <= self.weight <= code.length:
            raise ConfigInvalid(f"weight must lie in [0, {code.length}]")


@lru_cache(maxsize=16)
def _setup(m: int, poly: str | None, t: int, message_len: int | None, and_mode: str):
    ctx = build_field(m, poly_from_hex(poly) if poly else None)
    # the code may escalate to a larger field than the multiplier's
    code = build_code(m, t, message_len if message_len is not None else m, ctx.poly)
    net = build_nand_multiplier_netlist(ctx, and_mode)
    return ctx, code, net


def _message_bits(code: BchCode, value: int, m: int) -> np.ndarray:
    bits = np.zeros(code.message_len, dtype=np.uint8)
    bits[:m] = (value >> np.arange(m)) & 1
    return bits


def _transmit(code: BchCode, golden: int, faulty: int, m: int, flips=()) -> tuple[np.ndarray, np.ndarray]:
    """(transmitted codeword, received word) for one protected multiply."""
    sent = encode(code, _message_bits(code, golden, m))
    recv = sent.copy()
    recv[code.parity_len:code.parity_len + m] = (faulty >> np.arange(m)) & 1
    if len(flips):
        recv[np.asarray(flips, dtype=np.int64)] ^= 1
    return sent, recv


def run_protected_multiply(ctx: FieldContext, code: BchCode, a: FieldElement, b: FieldElement,
                           faults=(), flips=(), net: Netlist | None = None
                           ) -> tuple[FieldElement, DecodeOutcome]:
    """Multiply under faults and return the decoder-corrected product.

    ``faults`` are gate faults applied to the NAND multiplier netlist;
    ``flips`` are codeword positions inverted after encoding.
    """
    if code.message_len < ctx.m:
        raise ConfigInvalid(f"code carries {code.message_len} message bits, product needs {ctx.m}")
    golden = mul_reference(a, b).value
    faulty = golden
    if faults:
        if net is None:
            net = build_nand_multiplier_netlist(ctx)
        faulty = int(netlist_multiply(net, [a.value], [b.value], faults)[0])
    _, recv = _transmit(code, golden, faulty, ctx.m, flips)
    out = decode(code, recv)
    msg = out.message(code)[: ctx.m]
    result = int(np.dot(msg.astype(np.int64), 1 << np.arange(ctx.m)))
    return FieldElement(result, ctx), out


def classify(sent: np.ndarray, out: DecodeOutcome) -> str:
    if out.status is DecodeStatus.UNCORRECTABLE:
        return "uncorrectable"
    exact = bool(np.array_equal(out.word, sent))
    if out.status is DecodeStatus.NO_ERROR:
        return "no_error" if exact else "miscorrected"
    return "corrected_exact" if exact else "miscorrected"


def _empty_tally() -> dict:
    d = {k: 0 for k in OUTCOMES}
    d["product_correct"] = 0
    d["trials"] = 0
    return d


def _run_chunk(cfg: CampaignConfig, seed_seq: np.random.SeedSequence, n: int) -> dict:
    ctx, code, net = _setup(cfg.m, cfg.poly, cfg.t, cfg.message_len, cfg.and_mode)
    m = ctx.m
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    a = rng.integers(0, ctx.size, size=n)
    b = rng.integers(0, ctx.size, size=n)
    golden = gf_mul_batch(ctx, a, b)
    flips = [()] * n
    faulty = golden
    if cfg.source == "gate":
        lane_faults = []
        models = list(cfg.fault_models)
        k = min(cfg.faults_per_trial, len(net.gates))
        for v in range(n):
            gates = rng.choice(len(net.gates), size=k, replace=False)
            picks = rng.integers(0, len(models), size=k)
            for g, p in zip(gates, picks):
                lane_faults.append((v, Fault(net.gates[int(g)].id, models[int(p)])))
        faulty = netlist_multiply(net, a, b, lane_faults=lane_faults)
    elif cfg.weight:
        flips = [rng.choice(code.length, size=cfg.weight, replace=False) for _ in range(n)]
    by_weight: dict[int, dict] = {}
    total = _empty_tally()
    for v in range(n):
        g, f = int(golden[v]), int(faulty[v])
        sent, recv = _transmit(code, g, f, m, flips[v])
        out = decode(code, recv)
        kind = classify(sent, out)
        msg = out.message(code)[:m]
        ok = int(np.dot(msg.astype(np.int64), 1 << np.arange(m))) == g
        w = int(np.count_nonzero(sent != recv))
        bucket = by_weight.setdefault(w, _empty_tally())
        for tally in (bucket, total):
            tally[kind] += 1
            tally["trials"] += 1
            tally["product_correct"] += int(ok)
    return {"total": total, "by_weight": by_weight}


def _merge(parts: list[dict]) -> tuple[dict, dict]:
    total = _empty_tally()
    by_weight: dict[int, dict] = {}
    for part in parts:
        for key, val in part["total"].items():
            total[key] += val
        for w, tally in part["by_weight"].items():
            dst = by_weight.setdefault(w, _empty_tally())
            for key, val in tally.items():
                dst[key] += val
    return total, by_weight


def _decoder_structure(code: BchCode) -> dict:
    # structural proxies for the decoder blocks; no synthesis numbers
    return {
        "odd_syndrome_generators": code.t,
        "syndrome_squarers": code.t,
        "reencode_span_bits": code.parity_len,
        "direct_span_bits": code.length,
        "bm_iterations": 2 * code.t,
        "chien_evaluation_points": code.n,
        "brs_basis_images": code.field.m,
    }


@dataclass
class CampaignReport:
    config: dict
    code: dict
    trials: int
    tallies: dict
    by_weight: dict
    metrics: dict
    rng: str = RNG_NAME
    wall_clock_s: float | None = field(default=None)

    def to_dict(self) -> dict:
        d = {
            "report_version": REPORT_VERSION,
            "rng": self.rng,
            "config": self.config,
            "code": self.code,
            "trials": self.trials,
            "tallies": self.tallies,
            "by_weight": self.by_weight,
            "metrics": self.metrics,
        }
        if self.wall_clock_s is not None:
            d["wall_clock_s"] = self.wall_clock_s
        return d

    def to_json(self, pretty: bool = False) -> str:
        return json.dumps(self.to_dict(), indent=2 if pretty else None, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["weight", *OUTCOMES, "product_correct", "trials"]
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(cols)
        for w, tally in self.by_weight.items():
            wr.writerow([w] + [tally[c] for c in cols[1:]])
        wr.writerow(["all"] + [self.tallies[c] for c in cols[1:]])
        return buf.getvalue()

    def fractions(self) -> dict[str, float]:
        return {k: self.tallies[k] / self.trials for k in OUTCOMES}


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Seeded, chunked campaign. Chunk i draws from child i of SeedSequence(seed),
    so the report does not depend on the worker count."""
    cfg.validate()
    start = time.perf_counter()
    ctx, code, net = _setup(cfg.m, cfg.poly, cfg.t, cfg.message_len, cfg.and_mode)
    sizes = [cfg.chunk_size] * (cfg.trials // cfg.chunk_size)
    if cfg.trials % cfg.chunk_size:
        sizes.append(cfg.trials % cfg.chunk_size)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    if cfg.workers > 1 and len(sizes) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(sizes), os.cpu_count() or 1)) as pool:
            parts = list(pool.map(_run_chunk, [cfg] * len(sizes), seeds, sizes))
    else:
        parts = [_run_chunk(cfg, s, n) for s, n in zip(seeds, sizes)]
    total, by_weight = _merge(parts)
    metrics = {
        "multiplier": {"census": gate_census(net), "total_gates": len(net.gates),
                       "critical_depth": critical_depth(net)},
        "decoder": _decoder_structure(code),
    }
    report = CampaignReport(
        config=cfg.to_dict(),
        code=code.describe(),
        trials=cfg.trials,
        tallies=total,
        by_weight={str(w): by_weight[w] for w in sorted(by_weight)},
        metrics=metrics,
    )
    if cfg.record_timing:
        report.wall_clock_s = round(time.perf_counter() - start, 6)
    if cfg.output:
        write_report(report, cfg.output)
    return report


def write_report(report: CampaignReport, path: str) -> tuple[str, str]:
    """Write ``path`` (JSON) and a sibling ``.csv``; returns both paths."""
    root, _ = os.path.splitext(path)
    csv_path = root + ".csv"
    with open(path, "w") as fh:
        fh.write(report.to_json(pretty=True) + "\n")
    with open(csv_path, "w") as fh:
        fh.write(report.to_csv())
    return path, csv_path
