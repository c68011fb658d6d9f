"""Bit-level circuit intermediate representation and evaluators.

A circuit is a register file plus an ordered gate list over the reversible
gate set NOT/CNOT/TOF, the value-transparent phase gates Z/CZ, a leak-free
random-bit source RAND, and a readout fan-out COPY.  Every circuit input
declaration and every gate output port gets one *wire event*: the unit to
which leakage applies.  Event ids are dense and assigned in program order,
inputs first (in declaration order), then one block of ids per gate, ordered
by the gate's operand order.

Gates may carry a classical condition: a wire-event id whose runtime value
gates execution.  A skipped gate updates no register and records no values;
its event slots stay empty (no-op markers), so the skipped branch exposes
nothing to leakage.  A skipped RAND still consumes its tape bit, which keeps
tape consumption a static property of the circuit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np


class Role(Enum):
    SECRET = "secret-input"
    PUBLIC = "public-input"
    INTERNAL = "internal"
    OUTPUT = "output"


class GateKind(Enum):
    NOT = "NOT"
    CNOT = "CNOT"
    TOF = "TOF"
    Z = "Z"
    CZ = "CZ"
    RAND = "RAND"
    COPY = "COPY"


# operand count per kind; every operand is also an output port
_ARITY = {
    GateKind.NOT: 1,
    GateKind.CNOT: 2,
    GateKind.TOF: 3,
    GateKind.Z: 1,
    GateKind.CZ: 2,
    GateKind.RAND: 1,
    GateKind.COPY: 2,
}


class CircuitError(ValueError):
    """Raised for structurally invalid circuits."""


class EvalError(RuntimeError):
    """Raised when evaluation cannot proceed (bad inputs, tape exhausted)."""


@dataclass(frozen=True)
class Register:
    id: int
    name: str
    role: Role
    init: int = 0


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    args: tuple[int, ...]
    cond: int | None = None  # wire-event id; gate runs only if its value is 1

    def __post_init__(self):
        if len(self.args) != _ARITY[self.kind]:
            raise CircuitError(f"{self.kind.value} takes {_ARITY[self.kind]} operands")
        if len(set(self.args)) != len(self.args):
            raise CircuitError(f"duplicate operand in {self.kind.value} gate")


@dataclass(frozen=True)
class RandomTape:
    """Finite bit supply for RAND gates; one bit per RAND, in program order."""

    bits: tuple[int, ...]

    @classmethod
    def of(cls, bits) -> RandomTape:
        return cls(tuple(int(b) & 1 for b in bits))

    def __len__(self):
        return len(self.bits)


@dataclass(frozen=True)
class Trace:
    """One evaluation: a value (or None for a skipped no-op) per wire event."""

    values: tuple[int | None, ...]
    outputs: dict[str, int]
    tape_used: int


class Circuit:
    """Immutable register/gate program with a derived wire-event table."""

    def __init__(self, registers: list[Register], gates: list[Gate]):
        self.registers = tuple(registers)
        self.gates = tuple(gates)
        self._validate_registers()

        self.secret_regs = tuple(r for r in self.registers if r.role is Role.SECRET)
        self.public_regs = tuple(r for r in self.registers if r.role is Role.PUBLIC)
        self.output_regs = tuple(r for r in self.registers if r.role is Role.OUTPUT)

        # event table: inputs first, then one event per gate operand
        self.input_events: dict[int, int] = {}  # register id -> event id
        eid = 0
        for reg in self.registers:
            if reg.role in (Role.SECRET, Role.PUBLIC):
                self.input_events[reg.id] = eid
                eid += 1
        self.gate_events: tuple[tuple[int, ...], ...] = tuple(
            tuple(range(e, e + len(g.args)))
            for g, e in zip(self.gates, _running(eid, self.gates))
        )
        self.num_events = eid + sum(len(g.args) for g in self.gates)
        self.leak_free: frozenset[int] = frozenset(
            ev[0] for g, ev in zip(self.gates, self.gate_events) if g.kind is GateKind.RAND
        )
        self.rand_count = sum(1 for g in self.gates if g.kind is GateKind.RAND)
        self._validate_gates()

    # -- validation -------------------------------------------------------

    def _validate_registers(self):
        names = set()
        for i, reg in enumerate(self.registers):
            if reg.id != i:
                raise CircuitError(f"register ids must be dense, got {reg.id} at {i}")
            if reg.name in names:
                raise CircuitError(f"duplicate register name {reg.name!r}")
            names.add(reg.name)

    def _validate_gates(self):
        nregs = len(self.registers)
        written = set()
        for g, events in zip(self.gates, self.gate_events):
            for a in g.args:
                if not 0 <= a < nregs:
                    raise CircuitError(f"gate references undeclared register {a}")
            if g.cond is not None and not 0 <= g.cond < events[0]:
                raise CircuitError(
                    f"condition event {g.cond} does not precede the gate it controls"
                )
            if g.kind in (GateKind.NOT, GateKind.RAND):
                written.add(g.args[0])
            elif g.kind in (GateKind.CNOT, GateKind.COPY):
                written.add(g.args[1])
            elif g.kind is GateKind.TOF:
                written.add(g.args[2])
        for reg in self.output_regs:
            if reg.id not in written:
                raise CircuitError(f"output register {reg.name!r} is never written")

    # -- introspection ----------------------------------------------------

    def event_listing(self) -> list[str]:
        """Human-readable wire-event table (ids are assigned in program order)."""
        lines = []
        for reg in self.registers:
            if reg.id in self.input_events:
                lines.append(f"{self.input_events[reg.id]:6d}  input {reg.role.value} {reg.name}")
        for i, (g, events) in enumerate(zip(self.gates, self.gate_events)):
            cond = f" if[{g.cond}]" if g.cond is not None else ""
            for port, ev in enumerate(events):
                name = self.registers[g.args[port]].name
                lines.append(f"{ev:6d}  gate#{i} {g.kind.value}{cond} port {port} -> {name}")
        return lines

    def depth(self) -> int:
        """Longest register-dependency chain through the gate list."""
        level = [0] * len(self.registers)
        for g in self.gates:
            d = 1 + max(level[a] for a in g.args)
            for a in g.args:
                level[a] = d
        return max(level, default=0)


def _running(start: int, gates) -> list[int]:
    out = []
    e = start
    for g in gates:
        out.append(e)
        e += len(g.args)
    return out


# -- evaluation ------------------------------------------------------------


def evaluate(circuit: Circuit, secret, public, tape: RandomTape) -> Trace:
    """Run the circuit on explicit inputs and a random tape.

    `secret` and `public` are bit sequences matching the declared input
    registers in declaration order.  The result is a pure function of the
    arguments: NOT/CNOT/TOF act as the usual boolean maps, Z and CZ leave
    values unchanged (their events record the operand values), RAND
    overwrites its target with the next tape bit, COPY duplicates a value.
    """
    vals, events = _run(circuit, secret, public, tape)
    outputs = {r.name: vals[r.id] for r in circuit.output_regs}
    return Trace(tuple(events), outputs, circuit.rand_count)


def register_file(circuit: Circuit, secret, public, tape: RandomTape) -> tuple[int, ...]:
    """Final value of every register after evaluation, in register order."""
    vals, _ = _run(circuit, secret, public, tape)
    return tuple(vals)


def _run(circuit: Circuit, secret, public, tape: RandomTape):
    secret = [int(b) & 1 for b in secret]
    public = [int(b) & 1 for b in public]
    if len(secret) != len(circuit.secret_regs):
        raise EvalError(
            f"expected {len(circuit.secret_regs)} secret bits, got {len(secret)}"
        )
    if len(public) != len(circuit.public_regs):
        raise EvalError(
            f"expected {len(circuit.public_regs)} public bits, got {len(public)}"
        )

    vals = [r.init for r in circuit.registers]
    for reg, bit in zip(circuit.secret_regs, secret):
        vals[reg.id] = bit
    for reg, bit in zip(circuit.public_regs, public):
        vals[reg.id] = bit

    events: list[int | None] = [None] * circuit.num_events
    for rid, eid in circuit.input_events.items():
        events[eid] = vals[rid]

    cursor = 0
    for g, eids in zip(circuit.gates, circuit.gate_events):
        if g.kind is GateKind.RAND:
            if cursor >= len(tape.bits):
                raise EvalError("random tape exhausted")
            fresh = tape.bits[cursor]
            cursor += 1
        if g.cond is not None:
            c = events[g.cond]
            if c is None:
                raise EvalError(f"condition references skipped event {g.cond}")
            if c == 0:
                continue  # no-op marker: event slots stay None
        a = g.args
        if g.kind is GateKind.NOT:
            vals[a[0]] ^= 1
        elif g.kind is GateKind.CNOT:
            vals[a[1]] ^= vals[a[0]]
        elif g.kind is GateKind.TOF:
            vals[a[2]] ^= vals[a[0]] & vals[a[1]]
        elif g.kind is GateKind.RAND:
            vals[a[0]] = fresh
        elif g.kind is GateKind.COPY:
            vals[a[1]] = vals[a[0]]
        # Z and CZ: identity on values
        for port, ev in enumerate(eids):
            events[ev] = vals[a[port]]

    return vals, events


def evaluate_batch(circuit: Circuit, secret, public, tapes: np.ndarray) -> np.ndarray:
    """Vectorized evaluation over a batch of tapes.

    `tapes` has shape (batch, rand_count).  `secret`/`public` are either one
    bit row shared by the whole batch or (batch, k) arrays of per-row input
    bits.  Returns an int8 event matrix of shape (batch, num_events) where
    -1 marks a skipped no-op event.  The scalar `evaluate` is the reference
    semantics and the two are cross-checked in the tests.
    """
    tapes = np.asarray(tapes, dtype=np.int8)
    if tapes.ndim != 2 or tapes.shape[1] != circuit.rand_count:
        raise EvalError(f"tape batch must have shape (n, {circuit.rand_count})")
    batch = tapes.shape[0]
    secret = _input_matrix(secret, len(circuit.secret_regs), batch, "secret")
    public = _input_matrix(public, len(circuit.public_regs), batch, "public")

    vals = np.empty((len(circuit.registers), batch), dtype=np.int8)
    for r in circuit.registers:
        vals[r.id] = r.init
    for k, reg in enumerate(circuit.secret_regs):
        vals[reg.id] = secret[:, k]
    for k, reg in enumerate(circuit.public_regs):
        vals[reg.id] = public[:, k]

    events = np.full((circuit.num_events, batch), -1, dtype=np.int8)
    for rid, eid in circuit.input_events.items():
        events[eid] = vals[rid]

    cursor = 0
    for g, eids in zip(circuit.gates, circuit.gate_events):
        if g.kind is GateKind.RAND:
            fresh = tapes[:, cursor]
            cursor += 1
        if g.cond is None:
            run = None
        else:
            c = events[g.cond]
            if (c < 0).any():
                raise EvalError(f"condition references skipped event {g.cond}")
            run = c.astype(np.int8)
        a = g.args
        if g.kind is GateKind.NOT:
            vals[a[0]] ^= 1 if run is None else run
        elif g.kind is GateKind.CNOT:
            vals[a[1]] ^= vals[a[0]] if run is None else vals[a[0]] & run
        elif g.kind is GateKind.TOF:
            t = vals[a[0]] & vals[a[1]]
            vals[a[2]] ^= t if run is None else t & run
        elif g.kind is GateKind.RAND:
            if run is None:
                vals[a[0]] = fresh
            else:
                vals[a[0]] = np.where(run == 1, fresh, vals[a[0]])
        elif g.kind is GateKind.COPY:
            if run is None:
                vals[a[1]] = vals[a[0]]
            else:
                vals[a[1]] = np.where(run == 1, vals[a[0]], vals[a[1]])
        for port, ev in enumerate(eids):
            if run is None:
                events[ev] = vals[a[port]]
            else:
                events[ev] = np.where(run == 1, vals[a[port]], np.int8(-1))
    return events.T


def _input_matrix(bits, width: int, batch: int, label: str) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    arr = np.asarray(bits, dtype=np.int8) & 1
    if arr.ndim == 1:
        if arr.shape[0] != width:
            raise EvalError(f"expected {width} {label} bits, got {arr.shape[0]}")
        return np.broadcast_to(arr, (batch, width))
    if arr.shape != (batch, width):
        raise EvalError(f"{label} matrix must have shape ({batch}, {width})")
    return arr


def batch_outputs(circuit: Circuit, events: np.ndarray) -> np.ndarray:
    """Final output-register values for an event matrix from evaluate_batch.

    Requires every output register's last touch to be unconditioned (true
    for parsed netlists ending in plain writes and for compiled circuits,
    whose outputs end with an unconditional readout cascade).
    """
    batch = events.shape[0]
    out = np.empty((batch, len(circuit.output_regs)), dtype=np.int8)
    last_event = _last_write_events(circuit)
    for k, reg in enumerate(circuit.output_regs):
        ev = last_event[reg.id]
        if ev is None:
            out[:, k] = reg.init
        else:
            col = events[:, ev]
            if (col < 0).any():
                raise EvalError("output register written only by a skipped gate")
            out[:, k] = col
    return out


def _last_write_events(circuit: Circuit):
    """Map register id -> event id of the last unconditioned touch, or None.

    Only safe for reading registers whose final write is unconditioned; the
    compiled circuits produced here always end output registers with an
    unconditional cascade.
    """
    last: list[int | None] = [None] * len(circuit.registers)
    for g, eids in zip(circuit.gates, circuit.gate_events):
        for port, ev in enumerate(eids):
            if g.cond is None:
                last[g.args[port]] = ev
    return last


def truth_table(circuit: Circuit, tape_policy: str = "exhaustive",
                tape: RandomTape | None = None):
    """Exact output distribution per (secret, public) input, by enumeration.

    With the exhaustive policy every tape of length rand_count is enumerated,
    giving the exact distribution; with the fixed policy the supplied tape is
    used and every distribution is a point mass.  Guard rails: at most 20
    total input bits, and at most 20 tape bits under the exhaustive policy.
    """
    ns, npub = len(circuit.secret_regs), len(circuit.public_regs)
    if ns + npub > 20:
        raise EvalError("truth_table limited to 20 input bits")
    if tape_policy == "exhaustive":
        if circuit.rand_count > 20:
            raise EvalError("truth_table limited to 20 tape bits")
        tapes = [RandomTape.of(bits) for bits in product((0, 1), repeat=circuit.rand_count)]
    elif tape_policy == "fixed":
        if tape is None:
            raise EvalError("fixed tape policy needs a tape")
        tapes = [tape]
    else:
        raise EvalError(f"unknown tape policy {tape_policy!r}")

    table = {}
    for sec in product((0, 1), repeat=ns):
        for pub in product((0, 1), repeat=npub):
            counts: dict[tuple[int, ...], int] = {}
            for t in tapes:
                tr = evaluate(circuit, sec, pub, t)
                key = tuple(tr.outputs[r.name] for r in circuit.output_regs)
                counts[key] = counts.get(key, 0) + 1
            total = len(tapes)
            table[(sec, pub)] = {k: v / total for k, v in counts.items()}
    return table


def strip_phase_gates(circuit: Circuit) -> Circuit:
    """Drop all Z/CZ gates (event ids renumber; values are untouched)."""
    remap: dict[int, int] = dict(
        zip(sorted(circuit.input_events.values()), sorted(circuit.input_events.values()))
    )
    eid = len(circuit.input_events)
    kept: list[Gate] = []
    for g, eids in zip(circuit.gates, circuit.gate_events):
        if g.kind in (GateKind.Z, GateKind.CZ):
            continue
        for ev in eids:
            remap[ev] = eid
            eid += 1
        kept.append(g)
    out: list[Gate] = []
    for g in kept:
        if g.cond is None:
            out.append(g)
        elif g.cond in remap:
            out.append(Gate(g.kind, g.args, cond=remap[g.cond]))
        else:
            raise CircuitError("a condition references a dropped phase-gate event")
    return Circuit(list(circuit.registers), out)
