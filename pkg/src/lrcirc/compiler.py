"""Compiler from reversible NOT/CNOT/TOF circuits to leakage-hardened form.

Every logical register becomes a block of seven registers holding a Hamming
codeword whose weight parity is the logical bit.  Logical NOT is the flip on
positions {1,2,3}; logical CNOT is position-wise; the Toffoli is performed
by teleporting through a three-block ancilla prepared with an even-weight
("Shor") block, using the odd-overlap property of the odd codeword class.
Measurements, preparations and corrections follow the classical shadow of
the fault-tolerant gadget set: phase gates vanish on values, preparing a
plus state is a fresh leak-free random bit XORed onto a zeroed wire, and an
X-basis measurement is a fresh random readout plus randomization of the
measured wire (two tape bits per wire).

The emitted circuit is an ordinary netlist circuit; the CompiledCircuit
wrapper carries block structure, a gadget index whose top-level spans
partition the gate list, documented tape costs, and a compile log.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from .circuits import Circuit, Gate, GateKind, Register, Role
from .steane import H_ROWS, LOGICAL_SUPPORT, Word, encode_codeword

# documented tape cost (RAND bits) per gadget
TAPE_COST = {
    "measure-x": 2,          # readout + post-state randomization
    "bare-plus": 4,          # 3 encoder seeds + 1 logical flip
    "prep-zero": 17,         # 3 seeds + verification decode of the encoder ancilla
    "prep-plus": 18,         # prep-zero + flip
    "error-correction": 18,  # bare-plus ancilla + 7 X-measured wires
    "shor-prep": 6,
    "shor-verify": 12,       # 6 X-measured wires; the Z-read wire is free
    "toffoli-ancilla": 72,   # 3 prep-plus + shor-prep + shor-verify
    "toffoli": 86,           # ancilla + X-measurement of the third data block
}


class CompileError(ValueError):
    pass


Block = tuple[int, ...]          # seven register ids, positions 1..7


class CircuitBuilder:
    """Incremental circuit construction with live wire-event accounting.

    Mirrors the event-id assignment of Circuit (inputs first, then one id
    per gate operand) so gadget emitters can condition gates on events they
    just produced.  The finished Circuit re-derives the table; build()
    asserts both agree.
    """

    def __init__(self):
        self.regs: list[Register] = []
        self.gates: list[Gate] = []
        self._names: set[str] = set()
        self._event = 0
        self._tape = 0
        self._gate_started = False
        self.gadgets: list[dict] = []
        self._open: list[dict] = []
        self.blocks: list[tuple[str, Block]] = []
        # 7-wire groups that are not codeword-bearing (the even-weight
        # verification ancilla); excluded from the transversality contract
        self.aux_groups: list[tuple[str, Block]] = []
        self.log: list[str] = []
        self.readout_gates: list[int] = []

    # -- registers ------------------------------------------------------

    def fresh(self, prefix: str) -> str:
        name = prefix
        k = 2
        while name in self._names:
            name = f"{prefix}.{k}"
            k += 1
        return name

    def new_reg(self, name: str, role: Role = Role.INTERNAL, init: int = 0) -> int:
        if name in self._names:
            raise CompileError(f"register name collision: {name}")
        if role in (Role.SECRET, Role.PUBLIC):
            if self._gate_started:
                raise CompileError("inputs must be declared before gates")
            self._event += 1
        self._names.add(name)
        rid = len(self.regs)
        self.regs.append(Register(rid, name, role, init))
        if self._open:
            self._open[-1]["regs_created"] += 1
        return rid

    def new_block(self, base: str, role: Role = Role.INTERNAL,
                  code: bool = True) -> Block:
        block = tuple(self.new_reg(f"{base}.{j}", role) for j in range(1, 8))
        (self.blocks if code else self.aux_groups).append((base, block))
        return block

    # -- gates ----------------------------------------------------------

    def emit(self, kind: GateKind, *args: int, cond: int | None = None) -> tuple[int, ...]:
        self._gate_started = True
        gate = Gate(kind, tuple(args), cond=cond)
        self.gates.append(gate)
        events = tuple(range(self._event, self._event + len(args)))
        self._event += len(args)
        if kind is GateKind.RAND:
            self._tape += 1
        return events

    # -- gadget spans -----------------------------------------------------

    def begin(self, kind: str, source: str) -> None:
        self._open.append({
            "kind": kind,
            "source": source,
            "depth": len(self._open),
            "gates": [len(self.gates), None],
            "events": [self._event, None],
            "tape": [self._tape, None],
            "regs_created": 0,
        })

    def end(self) -> dict:
        span = self._open.pop()
        span["gates"][1] = len(self.gates)
        span["events"][1] = self._event
        span["tape"][1] = self._tape
        if self._open:
            self._open[-1]["regs_created"] += span["regs_created"]
        self.gadgets.append(span)
        return span

    def build(self) -> Circuit:
        if self._open:
            raise CompileError("unbalanced gadget spans")
        circuit = Circuit(self.regs, self.gates)
        assert circuit.num_events == self._event, "event accounting drifted"
        return circuit


# -- primitive translations --------------------------------------------------


def translate_primitive(builder: CircuitBuilder, kind: str, *args: int) -> dict:
    """Emit the classical replacement of one primitive component.

    X/CNOT/TOFFOLI are already classical; Z and CZ keep their identity
    events; preparations and measurements use the leak-free randomness
    translations.  Returns the registers of interest (readouts, targets).
    """
    k = kind.lower()
    if k in ("x", "not"):
        builder.emit(GateKind.NOT, *args)
        return {}
    if k == "cnot":
        builder.emit(GateKind.CNOT, *args)
        return {}
    if k in ("toffoli", "tof"):
        builder.emit(GateKind.TOF, *args)
        return {}
    if k in ("z", "cz"):
        builder.emit(GateKind.Z if k == "z" else GateKind.CZ, *args)
        return {}
    if k == "prepare-zero":
        target = builder.new_reg(builder.fresh("p0"))
        return {"target": target}
    if k == "prepare-plus":
        target = builder.new_reg(builder.fresh("pplus"))
        src = builder.new_reg(builder.fresh("pplus.r"))
        builder.emit(GateKind.RAND, src)
        builder.emit(GateKind.CNOT, src, target)
        return {"target": target, "tape": 1}
    if k == "measure-z":
        (wire,) = args
        ro = builder.new_reg(builder.fresh("mz"))
        events = builder.emit(GateKind.COPY, wire, ro)
        return {"readout": ro, "readout_event": events[1]}
    if k == "measure-x":
        (wire,) = args
        return emit_measure_x(builder, wire)
    raise CompileError(f"unsupported primitive {kind!r}")


def emit_measure_x(builder: CircuitBuilder, wire: int) -> dict:
    """X-basis measurement of one wire: random readout, randomized post-state.

    The readout travels through an ordinary COPY so the outcome is a leaky
    wire like any other measurement record; only the two RAND source events
    are leak-free.
    """
    src = builder.new_reg(builder.fresh("xm.r"))
    builder.emit(GateKind.RAND, src)
    ro = builder.new_reg(builder.fresh("xm.ro"))
    ro_events = builder.emit(GateKind.COPY, src, ro)
    scr = builder.new_reg(builder.fresh("xm.s"))
    builder.emit(GateKind.RAND, scr)
    builder.emit(GateKind.CNOT, scr, wire)
    return {"readout": ro, "readout_event": ro_events[1], "tape": 2}


def emit_parity_readout(builder: CircuitBuilder, block: Block,
                        name: str, role: Role = Role.INTERNAL,
                        whitelist: bool = False) -> tuple[int, int]:
    """Left-to-right CNOT cascade of a block into a fresh readout register.

    Returns (register, final event id); the final event carries the block
    parity, i.e. the logical value.
    """
    ro = builder.new_reg(name, role)
    last = None
    for rid in block:
        start = len(builder.gates)
        events = builder.emit(GateKind.CNOT, rid, ro)
        if whitelist:
            builder.readout_gates.append(start)
        last = events[1]
    return ro, last


# -- gadgets ------------------------------------------------------------------


def emit_codeword_ancilla(builder: CircuitBuilder, base: str) -> tuple[Block, list[int]]:
    """Non-fault-tolerant encoder: three seed bits fanned out by CNOTs.

    The frozen network drives position j from every seed whose check row has
    a 1 there (row-major order), computing the seed combination of the three
    check rows on a zeroed block.
    """
    block = builder.new_block(base)
    seeds = []
    for i in range(3):
        s = builder.new_reg(builder.fresh(f"{base}.seed{i + 1}"))
        builder.emit(GateKind.RAND, s)
        seeds.append(s)
    for i, row in enumerate(H_ROWS):
        for j, bit in enumerate(row):
            if bit:
                builder.emit(GateKind.CNOT, seeds[i], block[j])
    return block, seeds


def emit_logical_flip(builder: CircuitBuilder, block: Block, base: str) -> int:
    """Flip on positions {1,2,3} controlled by a fresh leak-free bit."""
    f = builder.new_reg(builder.fresh(f"{base}.flip"))
    builder.emit(GateKind.RAND, f)
    for j in LOGICAL_SUPPORT:
        builder.emit(GateKind.CNOT, f, block[j - 1])
    return f


def emit_bare_plus(builder: CircuitBuilder, base: str) -> Block:
    """Encoder + random logical flip, no verification.

    Used where the consumer decodes the block itself right afterwards (the
    error-correction ancilla): its own X-measurements are the verification.
    """
    builder.begin("bare-plus", base)
    block, _ = emit_codeword_ancilla(builder, base)
    emit_logical_flip(builder, block, base)
    builder.end()
    return block


def prep_zero_gadget(builder: CircuitBuilder, base: str) -> Block:
    """Zero-class data block: encoder ancilla copied on transversally.

    The ancilla is read out position-wise (the eigenvalue record) and then
    verification-decoded via X-measurements; those readouts are recorded but
    never act on the data, which classically already holds the codeword.
    """
    builder.begin("prep-zero", base)
    data = builder.new_block(base)
    anc, _ = emit_codeword_ancilla(builder, f"{base}.anc")
    for a, d in zip(anc, data):
        builder.emit(GateKind.CNOT, a, d)
    for j, a in enumerate(anc, start=1):
        ro = builder.new_reg(builder.fresh(f"{base}.anc.ro{j}"))
        builder.emit(GateKind.COPY, a, ro)
    for a in anc:
        emit_measure_x(builder, a)
    builder.end()
    return data


def prep_plus_gadget(builder: CircuitBuilder, base: str) -> tuple[Block, int]:
    """Uniform data block over all 16 codewords; logical value = the flip bit."""
    builder.begin("prep-plus", base)
    data = prep_zero_gadget(builder, base)
    flip = emit_logical_flip(builder, data, base)
    builder.end()
    return data, flip


def shor_prep_gadget(builder: CircuitBuilder, base: str) -> Block:
    """Even-weight ancilla block via the frozen preparation schedule.

    Plus-wires everywhere except position 4, then the CNOT chain
    (5,4),(3,4),(6,5),(2,3),(7,6),(1,2); classically the output word is
    (r1, r1^r2, r2^r3, r3^r5, r5^r6, r6^r7, r7), always of even weight and
    uniform over the 64 even words.
    """
    builder.begin("shor-prep", base)
    block = builder.new_block(base, code=False)
    for j in (1, 2, 3, 5, 6, 7):
        builder.emit(GateKind.RAND, block[j - 1])
    for c, t in ((5, 4), (3, 4), (6, 5), (2, 3), (7, 6), (1, 2)):
        builder.emit(GateKind.CNOT, block[c - 1], block[t - 1])
    builder.end()
    return block


def shor_verify_gadget(builder: CircuitBuilder, block: Block, base: str) -> dict:
    """Post-interaction decoder for the even-weight ancilla.

    The frozen CNOT schedule (1,4),(7,3),(6,2),(2,5),(3,4),(4,5) followed by
    X-measurements on wires {1,2,3,4,6,7} and a Z-readout of wire 5.
    """
    builder.begin("shor-verify", base)
    for c, t in ((1, 4), (7, 3), (6, 2), (2, 5), (3, 4), (4, 5)):
        builder.emit(GateKind.CNOT, block[c - 1], block[t - 1])
    readouts = {}
    for j in (1, 2, 3, 4, 6, 7):
        readouts[j] = emit_measure_x(builder, block[j - 1])["readout"]
    ro = builder.new_reg(builder.fresh(f"{base}.z5"))
    builder.emit(GateKind.COPY, block[4], ro)
    readouts[5] = ro
    builder.end()
    return readouts


def toffoli_ancilla_gadget(builder: CircuitBuilder, base: str) -> tuple[Block, Block, Block]:
    """Three-block ancilla with logical triple (a, b, ab), a and b uniform.

    The even-weight block accumulates the third plus-block and the
    position-wise AND of the first two; because odd codewords overlap oddly
    exactly with each other, its parity is c XOR ab, and the conditioned
    flip on the third block turns its logical value into ab.
    """
    builder.begin("toffoli-ancilla", base)
    a1, _ = prep_plus_gadget(builder, f"{base}.a1")
    a2, _ = prep_plus_gadget(builder, f"{base}.a2")
    shor = shor_prep_gadget(builder, f"{base}.s")
    a3, _ = prep_plus_gadget(builder, f"{base}.a3")
    for x, s in zip(a3, shor):
        builder.emit(GateKind.CNOT, x, s)
    for x, y, s in zip(a1, a2, shor):
        builder.emit(GateKind.TOF, x, y, s)
    _, m_event = emit_parity_readout(builder, shor, builder.fresh(f"{base}.m"))
    for j in LOGICAL_SUPPORT:
        builder.emit(GateKind.NOT, a3[j - 1], cond=m_event)
    shor_verify_gadget(builder, shor, f"{base}.s")
    builder.end()
    return a1, a2, a3


def toffoli_gadget(builder: CircuitBuilder, d1: Block, d2: Block, d3: Block,
                   base: str) -> tuple[Block, Block, Block]:
    """Teleported Toffoli: consumes the data blocks, returns the ancilla
    blocks holding (x, y, z XOR xy).

    Correction schedule (fixed, verified exhaustively in the tests): after
    the transversal interactions, the second data block is parity-read (m2),
    flipping the second ancilla block and feeding the first-into-third
    conditioned CNOT while the first ancilla is still uncorrected; then the
    first data block is read (m1), flipping the first ancilla block and
    feeding the second-into-third conditioned CNOT with the second block
    already corrected.  The X-measurement of the third data block yields a
    random record m3 whose phase-type correction drops out on values.
    """
    builder.begin("toffoli", base)
    a1, a2, a3 = toffoli_ancilla_gadget(builder, f"{base}.anc")
    for s, t in zip(a1, d1):
        builder.emit(GateKind.CNOT, s, t)
    for s, t in zip(a2, d2):
        builder.emit(GateKind.CNOT, s, t)
    for s, t in zip(d3, a3):
        builder.emit(GateKind.CNOT, s, t)

    xro = [emit_measure_x(builder, w)["readout"] for w in d3]
    m3 = builder.new_reg(builder.fresh(f"{base}.m3"))
    for j in LOGICAL_SUPPORT:
        builder.emit(GateKind.CNOT, xro[j - 1], m3)

    _, m2 = emit_parity_readout(builder, d2, builder.fresh(f"{base}.m2"))
    for j in LOGICAL_SUPPORT:
        builder.emit(GateKind.NOT, a2[j - 1], cond=m2)
    for s, t in zip(a1, a3):
        builder.emit(GateKind.CNOT, s, t, cond=m2)

    _, m1 = emit_parity_readout(builder, d1, builder.fresh(f"{base}.m1"))
    for j in LOGICAL_SUPPORT:
        builder.emit(GateKind.NOT, a1[j - 1], cond=m1)
    for s, t in zip(a2, a3):
        builder.emit(GateKind.CNOT, s, t, cond=m1)
    builder.end()
    return a1, a2, a3


def steane_ec_gadget(builder: CircuitBuilder, block: Block, base: str) -> None:
    """Syndrome extraction only: a bare plus-ancilla absorbs the data
    transversally and is X-measured wire by wire.  The data block is never
    written; recovery would be phase-type and vanishes on values."""
    builder.begin("error-correction", base)
    anc = emit_bare_plus(builder, f"{base}.anc")
    for d, a in zip(block, anc):
        builder.emit(GateKind.CNOT, d, a)
    for a in anc:
        emit_measure_x(builder, a)
    builder.end()


# -- whole-circuit compilation -------------------------------------------------


@dataclass
class EncodedSecret:
    """Per-bit codewords produced outside the circuit with leak-free
    randomness; entering the circuit they become ordinary input events."""

    blocks: tuple[Word, ...]
    tape_consumed: int

    def flat_bits(self) -> list[int]:
        return [b for w in self.blocks for b in w]


def encode_secret(bits, rng: random.Random) -> EncodedSecret:
    words = []
    used = 0
    for b in bits:
        seeds = (rng.getrandbits(1), rng.getrandbits(1), rng.getrandbits(1))
        used += 3
        words.append(encode_codeword(int(b) & 1, seeds))
    return EncodedSecret(tuple(words), used)


@dataclass
class CompiledCircuit:
    circuit: Circuit
    level: int
    ec: bool
    block_map: dict[str, Block]            # logical register -> final block
    blocks: list[tuple[str, Block]]        # every code block ever created
    secret_blocks: list[Block]             # input blocks, logical order
    gadget_index: list[dict]
    readout_gates: list[int]
    log: list[str]
    logical_stats: dict = field(default_factory=dict)
    aux_groups: list[tuple[str, Block]] = field(default_factory=list)

    @property
    def secret_width(self) -> int:
        return len(self.secret_blocks)

    def encode_inputs(self, secret, rng: random.Random) -> list[int]:
        if len(secret) != self.secret_width:
            raise CompileError(
                f"expected {self.secret_width} logical secret bits"
            )
        return encode_secret(secret, rng).flat_bits()

    def top_level_gadgets(self) -> list[dict]:
        return [g for g in self.gadget_index if g["depth"] == 0]

    def location_counts(self) -> list[tuple[str, str, int]]:
        """(kind, source, locations) per gadget: emitted gates plus the
        registers created in the span (standing in for state preparation)."""
        return [
            (g["kind"], g["source"],
             g["gates"][1] - g["gates"][0] + g["regs_created"])
            for g in self.gadget_index
        ]

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "ec": self.ec,
            "block_map": {k: list(v) for k, v in self.block_map.items()},
            "blocks": [[name, list(regs)] for name, regs in self.blocks],
            "aux_groups": [[name, list(regs)] for name, regs in self.aux_groups],
            "secret_blocks": [list(b) for b in self.secret_blocks],
            "gadgets": self.gadget_index,
            "readout_gates": list(self.readout_gates),
            "log": list(self.log),
            "logical": self.logical_stats,
        }

    @classmethod
    def from_json_dict(cls, circuit: Circuit, d: dict) -> CompiledCircuit:
        return cls(
            circuit=circuit,
            level=d["level"],
            ec=d["ec"],
            block_map={k: tuple(v) for k, v in d["block_map"].items()},
            blocks=[(name, tuple(regs)) for name, regs in d["blocks"]],
            secret_blocks=[tuple(b) for b in d["secret_blocks"]],
            gadget_index=d["gadgets"],
            readout_gates=list(d["readout_gates"]),
            log=list(d["log"]),
            logical_stats=d.get("logical", {}),
            aux_groups=[(name, tuple(regs)) for name, regs in d.get("aux_groups", [])],
        )


_LOGICAL_KINDS = {GateKind.NOT, GateKind.CNOT, GateKind.TOF}
_LEVEL2_GUARD = 2000  # level-1 gates; quadratic blowup beyond this is refused


def compile_circuit(logical: Circuit, level: int = 1, ec: bool = True) -> CompiledCircuit:
    """Compile a reversible logical circuit into leakage-hardened form.

    Phase gates in the input are dropped (identity on values) with a log
    entry; anything outside {NOT, CNOT, TOF, Z, CZ} is rejected.  With ec
    on, every logical gate is followed by syndrome extraction on the blocks
    it touched.  Level 2 re-expands every physical gate of the level-1
    result through the same gadget map (structural only, no EC insertion).
    """
    if level not in (1, 2):
        raise CompileError(f"level must be 1 or 2, got {level}")
    compiled = _compile_logical(logical, ec)
    if level == 1:
        return compiled
    if len(compiled.circuit.gates) > _LEVEL2_GUARD:
        raise CompileError(
            f"level-2 expansion refused: level-1 result has "
            f"{len(compiled.circuit.gates)} gates (> {_LEVEL2_GUARD})"
        )
    return _expand_physical(compiled, logical)


def _compile_logical(logical: Circuit, ec: bool) -> CompiledCircuit:
    for g in logical.gates:
        if g.cond is not None:
            raise CompileError("conditioned gates are not compilable")
        if g.kind not in _LOGICAL_KINDS | {GateKind.Z, GateKind.CZ}:
            raise CompileError(f"unsupported logical gate {g.kind.value}")

    b = CircuitBuilder()
    block_map: dict[str, Block] = {}
    secret_blocks: list[Block] = []
    public_raw: dict[str, int] = {}

    for reg in logical.registers:
        if reg.role is Role.SECRET:
            block = tuple(
                b.new_reg(f"{reg.name}.{j}", Role.SECRET) for j in range(1, 8)
            )
            b.blocks.append((reg.name, block))
            block_map[reg.name] = block
            secret_blocks.append(block)
        elif reg.role is Role.PUBLIC:
            public_raw[reg.name] = b.new_reg(reg.name, Role.PUBLIC)
    out_regs = {
        reg.name: b.new_reg(reg.name, Role.OUTPUT)
        for reg in logical.registers if reg.role is Role.OUTPUT
    }

    for reg in logical.registers:
        if reg.role is Role.PUBLIC:
            b.begin("encode-public", reg.name)
            block = prep_zero_gadget(b, f"{reg.name}.enc")
            for j in LOGICAL_SUPPORT:
                b.emit(GateKind.CNOT, public_raw[reg.name], block[j - 1])
            b.end()
            block_map[reg.name] = block
        elif reg.role in (Role.INTERNAL, Role.OUTPUT):
            b.begin("prep-block", reg.name)
            block = prep_zero_gadget(b, f"{reg.name}.blk")
            if reg.init:
                for j in LOGICAL_SUPPORT:
                    b.emit(GateKind.NOT, block[j - 1])
            b.end()
            block_map[reg.name] = block

    def name_of(rid: int) -> str:
        return logical.registers[rid].name

    for gi, g in enumerate(logical.gates):
        if g.kind in (GateKind.Z, GateKind.CZ):
            b.log.append(
                f"dropped {g.kind.value} gate #{gi} on "
                f"{', '.join(name_of(a) for a in g.args)} (identity on values)"
            )
            continue
        touched = [name_of(a) for a in g.args]
        src = f"gate#{gi} {g.kind.value} {' '.join(touched)}"
        if g.kind is GateKind.NOT:
            b.begin("logical-not", src)
            blk = block_map[touched[0]]
            for j in LOGICAL_SUPPORT:
                b.emit(GateKind.NOT, blk[j - 1])
            b.end()
        elif g.kind is GateKind.CNOT:
            b.begin("logical-cnot", src)
            cb, tb = block_map[touched[0]], block_map[touched[1]]
            for c, t in zip(cb, tb):
                b.emit(GateKind.CNOT, c, t)
            b.end()
        elif g.kind is GateKind.TOF:
            a1, a2, a3 = toffoli_gadget(
                b, block_map[touched[0]], block_map[touched[1]],
                block_map[touched[2]], base=f"g{gi}"
            )
            block_map[touched[0]] = a1
            block_map[touched[1]] = a2
            block_map[touched[2]] = a3
        if ec:
            for name in touched:
                steane_ec_gadget(b, block_map[name], f"g{gi}.ec.{name}")

    for reg in logical.registers:
        if reg.role is Role.OUTPUT:
            b.begin("output-readout", reg.name)
            # decode: block parity lands in the declared output register
            for rid in block_map[reg.name]:
                start = len(b.gates)
                b.emit(GateKind.CNOT, rid, out_regs[reg.name])
                b.readout_gates.append(start)
            b.end()

    circuit = b.build()
    stats = {
        "gates": len(logical.gates),
        "depth": logical.depth(),
        "secret": [r.name for r in logical.secret_regs],
        "public": [r.name for r in logical.public_regs],
        "outputs": [r.name for r in logical.output_regs],
        "compiled_gates": len(circuit.gates),
        "compiled_depth": circuit.depth(),
        "compiled_events": circuit.num_events,
        "tape_bits": circuit.rand_count,
    }
    return CompiledCircuit(
        circuit=circuit, level=1, ec=ec, block_map=block_map,
        blocks=list(b.blocks), secret_blocks=secret_blocks,
        aux_groups=list(b.aux_groups),
        gadget_index=list(b.gadgets), readout_gates=list(b.readout_gates),
        log=list(b.log), logical_stats=stats,
    )


def _expand_physical(level1: CompiledCircuit, logical: Circuit) -> CompiledCircuit:
    """Structural level-2 pass: each level-1 register becomes a block and
    each physical gate goes through the gadget map again.

    Gate conditions are decoded on the spot: a parity readout of the block
    holding the conditioning register supplies the classical bit.  RAND
    becomes a fresh plus-block copied over; COPY copies position-wise.
    """
    src = level1.circuit
    b = CircuitBuilder()
    block_map: dict[int, Block] = {}
    secret_blocks: list[Block] = []

    for reg in src.registers:
        if reg.role is Role.SECRET:
            block = tuple(
                b.new_reg(f"{reg.name}.{j}", Role.SECRET) for j in range(1, 8)
            )
            b.blocks.append((reg.name, block))
            block_map[reg.id] = block
            secret_blocks.append(block)
        elif reg.role is Role.PUBLIC:
            block_map[reg.id] = None  # filled after encode
    out_regs = {
        reg.id: b.new_reg(reg.name, Role.OUTPUT)
        for reg in src.registers if reg.role is Role.OUTPUT
    }

    for reg in src.registers:
        if reg.role is Role.PUBLIC:
            raw = b.new_reg(f"{reg.name}.raw", Role.PUBLIC)
            b.begin("encode-public", reg.name)
            block = prep_zero_gadget(b, f"{reg.name}.enc")
            for j in LOGICAL_SUPPORT:
                b.emit(GateKind.CNOT, raw, block[j - 1])
            b.end()
            block_map[reg.id] = block
        elif reg.role in (Role.INTERNAL, Role.OUTPUT):
            b.begin("prep-block", reg.name)
            block = prep_zero_gadget(b, f"{reg.name}.blk")
            if reg.init:
                for j in LOGICAL_SUPPORT:
                    b.emit(GateKind.NOT, block[j - 1])
            b.end()
            block_map[reg.id] = block

    # map level-1 wire events to the registers that carried them, so gate
    # conditions can be re-decoded from the corresponding block
    event_reg: dict[int, int] = {eid: rid for rid, eid in src.input_events.items()}
    for g, eids in zip(src.gates, src.gate_events):
        for port, ev in enumerate(eids):
            event_reg[ev] = g.args[port]

    for gi, g in enumerate(src.gates):
        cond2 = None
        if g.cond is not None:
            blk = block_map[event_reg[g.cond]]
            _, cond2 = emit_parity_readout(
                b, blk, b.fresh(f"x{gi}.cond"), whitelist=True
            )
        srcdesc = f"phys#{gi} {g.kind.value}"
        if g.kind is GateKind.NOT:
            b.begin("logical-not", srcdesc)
            blk = block_map[g.args[0]]
            for j in LOGICAL_SUPPORT:
                b.emit(GateKind.NOT, blk[j - 1], cond=cond2)
            b.end()
        elif g.kind is GateKind.CNOT:
            b.begin("logical-cnot", srcdesc)
            for c, t in zip(block_map[g.args[0]], block_map[g.args[1]]):
                b.emit(GateKind.CNOT, c, t, cond=cond2)
            b.end()
        elif g.kind is GateKind.TOF:
            if cond2 is not None:
                raise CompileError("conditioned TOF cannot be re-expanded")
            a1, a2, a3 = toffoli_gadget(
                b, block_map[g.args[0]], block_map[g.args[1]],
                block_map[g.args[2]], base=f"x{gi}"
            )
            block_map[g.args[0]], block_map[g.args[1]], block_map[g.args[2]] = a1, a2, a3
        elif g.kind is GateKind.RAND:
            b.begin("encoded-rand", srcdesc)
            fresh = emit_bare_plus(b, f"x{gi}.rand")
            for s, t in zip(fresh, block_map[g.args[0]]):
                b.emit(GateKind.COPY, s, t, cond=cond2)
            b.end()
        elif g.kind is GateKind.COPY:
            b.begin("encoded-copy", srcdesc)
            for s, t in zip(block_map[g.args[0]], block_map[g.args[1]]):
                b.emit(GateKind.COPY, s, t, cond=cond2)
            b.end()
        else:  # Z/CZ never appear in level-1 output
            raise CompileError(f"unexpected physical gate {g.kind.value}")

    for reg in src.registers:
        if reg.role is Role.OUTPUT:
            b.begin("output-readout", reg.name)
            for rid in block_map[reg.id]:
                start = len(b.gates)
                b.emit(GateKind.CNOT, rid, out_regs[reg.id])
                b.readout_gates.append(start)
            b.end()

    circuit = b.build()
    stats = dict(level1.logical_stats)
    stats.update({
        "level1_gates": len(src.gates),
        "compiled_gates": len(circuit.gates),
        "compiled_depth": circuit.depth(),
        "compiled_events": circuit.num_events,
        "tape_bits": circuit.rand_count,
    })
    named_map = {src.registers[rid].name: blk
                 for rid, blk in block_map.items() if blk is not None}
    return CompiledCircuit(
        circuit=circuit, level=2, ec=level1.ec, block_map=named_map,
        blocks=list(b.blocks), secret_blocks=secret_blocks,
        aux_groups=list(b.aux_groups),
        gadget_index=list(b.gadgets), readout_gates=list(b.readout_gates),
        log=list(level1.log) + list(b.log), logical_stats=stats,
    )


# -- reporting -----------------------------------------------------------------


# reference arithmetic for the published crude threshold estimate
_REFERENCE_LOCATIONS = 20


def location_report(compiled: CompiledCircuit) -> dict:
    """Per-gadget location counts and the crude pair-counting threshold.

    A location is an emitted gate or a register created inside the gadget
    span (register creation stands in for zero-state preparation).  The
    largest gadget's pair count gives the reciprocal threshold estimate;
    the published 20-location/190-pair numbers are printed alongside as
    reference arithmetic, not forced to match.
    """
    per_kind: dict[str, dict] = {}
    largest = None
    for g, (kind, _src, locations) in zip(compiled.gadget_index,
                                          compiled.location_counts()):
        gates = g["gates"][1] - g["gates"][0]
        entry = per_kind.setdefault(
            kind, {"count": 0, "locations_min": locations,
                   "locations_max": locations, "gates": 0}
        )
        entry["count"] += 1
        entry["gates"] += gates
        entry["locations_min"] = min(entry["locations_min"], locations)
        entry["locations_max"] = max(entry["locations_max"], locations)
        if g["depth"] == 0 and (largest is None or locations > largest[1]):
            largest = (kind, locations)

    own = None
    if largest is not None:
        pairs = comb(largest[1], 2)
        own = {
            "largest_gadget": largest[0],
            "locations": largest[1],
            "pairs": pairs,
            "threshold_estimate": 1.0 / pairs if pairs else None,
        }
    stats = compiled.logical_stats
    ratios = {}
    if stats.get("gates"):
        ratios["gate_ratio"] = stats["compiled_gates"] / stats["gates"]
    if stats.get("depth"):
        ratios["depth_ratio"] = stats["compiled_depth"] / stats["depth"]
    return {
        "per_gadget": dict(sorted(per_kind.items())),
        "own": own,
        "reference": {
            "locations": _REFERENCE_LOCATIONS,
            "pairs": comb(_REFERENCE_LOCATIONS, 2),
            "threshold_estimate": 1.0 / comb(_REFERENCE_LOCATIONS, 2),
        },
        "size": {
            "logical_gates": stats.get("gates"),
            "logical_depth": stats.get("depth"),
            "compiled_gates": stats.get("compiled_gates"),
            "compiled_depth": stats.get("compiled_depth"),
            "compiled_events": stats.get("compiled_events"),
            "tape_bits": stats.get("tape_bits"),
            **ratios,
        },
    }
