"""Combinational gate netlists: construction, bit-sliced simulation with
fault injection, gate census and logic depth.

Gates are kept in topological order. Every gate has a stable string id so
fault specs written to disk keep pointing at the same gate across runs.
Simulation packs 64 input vectors per machine word and runs through the
``_kernels`` backend.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from ._kernels.numpy_impl import AND, CONST0, CONST1, NAND, NOT, WIRE, XOR
from .errors import NetlistError, UnknownGate, WidthMismatch

GATE_KINDS = ("NAND", "AND", "XOR", "NOT", "CONST0", "CONST1", "WIRE")
_KIND_CODE = {"WIRE": WIRE, "NOT": NOT, "AND": AND, "NAND": NAND, "XOR": XOR,
              "CONST0": CONST0, "CONST1": CONST1}
_ARITY = {"WIRE": (1, 1), "NOT": (1, 1), "AND": (2, None), "NAND": (1, None),
          "XOR": (2, None), "CONST0": (0, 0), "CONST1": (0, 0)}
_ZERO_DEPTH = {"WIRE", "CONST0", "CONST1"}

NETLIST_FORMAT = "ftgfmul-netlist"
NETLIST_VERSION = 1


@dataclass(frozen=True)
class Gate:
    id: str
    kind: str
    inputs: tuple[str, ...]
    group: str = ""


class FaultModel(str, Enum):
    STUCK_AT_0 = "sa0"
    STUCK_AT_1 = "sa1"
    FLIP = "flip"


class Persistence(str, Enum):
    PERMANENT = "perm"
    SINGLE = "once"


@dataclass(frozen=True)
class Fault:
    """A fault on a gate output.

    ``Persistence.SINGLE`` faults only disturb the first vector of a batch
    evaluation, modelling a transient upset during one evaluation.
    """

    gate: str
    model: FaultModel = FaultModel.STUCK_AT_0
    persist: Persistence = Persistence.PERMANENT

    def __post_init__(self):
        object.__setattr__(self, "model", FaultModel(self.model))
        object.__setattr__(self, "persist", Persistence(self.persist))

    def to_dict(self) -> dict:
        return {"gate": self.gate, "model": self.model.value, "persist": self.persist.value}

    @classmethod
    def from_dict(cls, d: dict) -> "Fault":
        try:
            return cls(str(d["gate"]), d.get("model", "sa0"), d.get("persist", "perm"))
        except (KeyError, ValueError, TypeError) as exc:
            raise NetlistError(f"bad fault spec {d!r}: {exc}") from exc


def faults_from_json(text: str) -> list[Fault]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise NetlistError("fault file must hold a JSON list")
    return [Fault.from_dict(d) for d in data]


def faults_to_json(faults: Iterable[Fault]) -> str:
    return json.dumps([f.to_dict() for f in faults])


class Netlist:
    def __init__(self, inputs: Sequence[str], gates: Sequence[Gate], outputs: Sequence[str],
                 meta: dict | None = None):
        self.inputs = tuple(inputs)
        self.gates = tuple(gates)
        self.outputs = tuple(outputs)
        self.meta = dict(meta or {})
        index = {}
        for name in self.inputs:
            if name in index:
                raise NetlistError(f"duplicate input {name!r}")
            index[name] = len(index)
        kinds = np.empty(len(self.gates), dtype=np.int64)
        in_ptr = np.zeros(len(self.gates) + 1, dtype=np.int64)
        in_idx = []
        for g, gate in enumerate(self.gates):
            if gate.kind not in _KIND_CODE:
                raise NetlistError(f"gate {gate.id!r}: unknown kind {gate.kind!r}")
            lo, hi = _ARITY[gate.kind]
            if len(gate.inputs) < lo or (hi is not None and len(gate.inputs) > hi):
                raise NetlistError(f"gate {gate.id!r}: bad fan-in {len(gate.inputs)} for {gate.kind}")
            for src in gate.inputs:
                if src not in index:
                    raise NetlistError(f"gate {gate.id!r} reads {src!r} before it is defined")
                in_idx.append(index[src])
            if gate.id in index:
                raise NetlistError(f"duplicate node id {gate.id!r}")
            index[gate.id] = len(index)
            kinds[g] = _KIND_CODE[gate.kind]
            in_ptr[g + 1] = len(in_idx)
        for name in self.outputs:
            if name not in index:
                raise NetlistError(f"output {name!r} is not a node")
        self._index = index
        self._kinds = kinds
        self._in_ptr = in_ptr
        self._in_idx = np.asarray(in_idx, dtype=np.int64)
        self._out_idx = np.asarray([index[o] for o in self.outputs], dtype=np.int64)
        self._levels = None

    def __len__(self):
        return len(self.gates)

    def __repr__(self):
        return f"Netlist({len(self.inputs)} inputs, {len(self.gates)} gates, {len(self.outputs)} outputs)"

    def gate_index(self, gate_id: str) -> int:
        pos = self._index.get(gate_id)
        if pos is None or pos < len(self.inputs):
            raise UnknownGate(f"no gate with id {gate_id!r}")
        return pos - len(self.inputs)

    def node_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGate(f"no node named {name!r}") from None

    @property
    def levels(self) -> dict[str, int]:
        """Logic level of every node; inputs, constants and wires add no depth."""
        if self._levels is None:
            lv = {name: 0 for name in self.inputs}
            for gate in self.gates:
                base = max((lv[s] for s in gate.inputs), default=0)
                lv[gate.id] = base if gate.kind in _ZERO_DEPTH else base + 1
            self._levels = lv
        return self._levels

    # -- serialisation -----------------------------------------------------
    def to_dict(self) -> dict:
        lv = self.levels
        gates = []
        for g in self.gates:
            d = {"id": g.id, "kind": g.kind, "inputs": list(g.inputs)}
            if g.group:
                d["group"] = g.group
            gates.append(d)
        return {
            "format": NETLIST_FORMAT,
            "version": NETLIST_VERSION,
            "meta": self.meta,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "gates": gates,
            "levels": {g.id: lv[g.id] for g in self.gates},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Netlist":
        try:
            gates = [Gate(str(g["id"]), str(g["kind"]), tuple(g["inputs"]), g.get("group", ""))
                     for g in d["gates"]]
            return cls(d["inputs"], gates, d["outputs"], d.get("meta"))
        except (KeyError, TypeError) as exc:
            raise NetlistError(f"malformed netlist document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Netlist":
        return cls.from_dict(json.loads(text))


class NetlistBuilder:
    """Incremental construction helper; ids are assigned in call order."""

    def __init__(self, inputs: Sequence[str] = ()):
        self.inputs = list(inputs)
        self.gates: list[Gate] = []
        self._names = set(self.inputs)
        self._const = {}

    def add_input(self, name: str) -> str:
        if name in self._names:
            raise NetlistError(f"duplicate node {name!r}")
        self.inputs.append(name)
        self._names.add(name)
        return name

    def gate(self, kind: str, inputs: Sequence[str], id: str, group: str = "") -> str:
        if id in self._names:
            raise NetlistError(f"duplicate node {id!r}")
        self.gates.append(Gate(id, kind, tuple(inputs), group))
        self._names.add(id)
        return id

    def const(self, bit: int) -> str:
        """Shared CONST0/CONST1 node."""
        bit = int(bool(bit))
        if bit not in self._const:
            self._const[bit] = self.gate("CONST1" if bit else "CONST0", (), f"const{bit}")
        return self._const[bit]

    def build(self, outputs: Sequence[str], meta: dict | None = None) -> Netlist:
        return Netlist(self.inputs, self.gates, outputs, meta)


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------

def _as_matrix(net: Netlist, vectors) -> np.ndarray:
    arr = np.asarray(vectors, dtype=np.uint8)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != len(net.inputs):
        raise WidthMismatch(f"expected {len(net.inputs)} input bits per vector, got shape {arr.shape}")
    if arr.size and arr.max() > 1:
        raise WidthMismatch("input bits must be 0 or 1")
    return arr


def _pack(mat: np.ndarray) -> np.ndarray:
    """(V, k) bit matrix -> (k, ceil(V/64)) uint64 words, vector v in bit v%64 of word v//64."""
    v, k = mat.shape
    n_words = max(1, -(-v // 64))
    padded = np.zeros((k, n_words * 64), dtype=np.uint8)
    padded[:, :v] = mat.T
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").reshape(k, n_words).astype(np.uint64, copy=False)


def _unpack(words: np.ndarray, v: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return np.ascontiguousarray(bits[:, :v].T)


_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
_NONE = np.uint64(0)


def _fault_arrays(net: Netlist, n_vectors: int, faults: Iterable[Fault],
                  lane_faults: Iterable[tuple[int, Fault]]):
    n_words = max(1, -(-n_vectors // 64))
    entries = []
    for f in faults:
        g = net.gate_index(f.gate)
        if f.persist is Persistence.SINGLE:
            entries.append((g, 0, np.uint64(1), f.model))
        else:
            entries.extend((g, w, _ALL, f.model) for w in range(n_words))
    for v, f in lane_faults:
        if not 0 <= v < n_vectors:
            raise WidthMismatch(f"fault lane {v} outside batch of {n_vectors}")
        g = net.gate_index(f.gate)
        entries.append((g, v // 64, np.uint64(1) << np.uint64(v % 64), f.model))
    entries.sort(key=lambda e: (e[0], e[1]))
    k = len(entries)
    f_gate = np.empty(k, dtype=np.int64)
    f_word = np.empty(k, dtype=np.int64)
    sa0 = np.zeros(k, dtype=np.uint64)
    sa1 = np.zeros(k, dtype=np.uint64)
    flip = np.zeros(k, dtype=np.uint64)
    for i, (g, w, mask, model) in enumerate(entries):
        f_gate[i] = g
        f_word[i] = w
        if model is FaultModel.STUCK_AT_0:
            sa0[i] = mask
        elif model is FaultModel.STUCK_AT_1:
            sa1[i] = mask
        else:
            flip[i] = mask
    return f_gate, f_word, sa0, sa1, flip


def simulate(net: Netlist, vectors, faults: Iterable[Fault] = (),
             lane_faults: Iterable[tuple[int, Fault]] = ()) -> np.ndarray:
    """Evaluate ``net`` on a batch of input vectors.

    ``vectors`` is a (V, n_inputs) 0/1 matrix. ``faults`` apply to the whole
    batch (single-evaluation faults to vector 0 only); ``lane_faults`` pairs
    a vector index with a fault that disturbs that vector alone. Returns a
    (V, n_outputs) uint8 matrix.
    """
    mat = _as_matrix(net, vectors)
    v = mat.shape[0]
    words = _pack(mat)
    fa = _fault_arrays(net, v, faults, lane_faults)
    values = _kernels.eval_packed(net._kinds, net._in_ptr, net._in_idx, len(net.inputs), words, *fa)
    return _unpack(values[net._out_idx], v)


def evaluate(net: Netlist, inputs, faults: Iterable[Fault] = ()) -> np.ndarray:
    """Single-vector evaluation; returns the output bitvector."""
    bits = np.asarray(inputs, dtype=np.uint8)
    if bits.ndim != 1:
        raise WidthMismatch("evaluate takes one input vector; use simulate for batches")
    return simulate(net, bits, faults)[0]


def gate_census(net: Netlist, groups: Iterable[str] | None = None) -> dict[str, int]:
    """Gate counts by kind, optionally restricted to the given groups."""
    wanted = None if groups is None else set(groups)
    counts = Counter(g.kind for g in net.gates if wanted is None or g.group in wanted)
    return {k: counts.get(k, 0) for k in GATE_KINDS}


def group_census(net: Netlist) -> dict[str, dict[str, int]]:
    out: dict[str, Counter] = {}
    for g in net.gates:
        out.setdefault(g.group, Counter())[g.kind] += 1
    return {grp: dict(c) for grp, c in out.items()}


def critical_depth(net: Netlist) -> int:
    """Longest input-to-output path counted in gate levels."""
    lv = net.levels
    return max((lv[o] for o in net.outputs), default=0)


def metrics(net: Netlist) -> dict:
    return {"census": gate_census(net), "total_gates": len(net.gates),
            "critical_depth": critical_depth(net)}
