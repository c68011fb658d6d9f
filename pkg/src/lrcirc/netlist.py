"""Line-oriented netlist text format for circuits.

Grammar (UTF-8, one statement per line, '#' starts a comment):

    in secret <name>
    in public <name>
    reg <name> [init 0|1]
    out <name>
    gate NOT <a> | gate CNOT <c> <t> | gate TOF <c1> <c2> <t>
    gate Z <a>  | gate CZ <a> <b>   | gate RAND <t> | gate COPY <s> <t>
    cgate <event-ref> <GATE...>

All declarations must precede all gates, so wire-event ids (inputs first,
then gate ports in program order) match line order.  `cgate` prefixes any
gate form with the wire-event id whose runtime value conditions execution.
Serialization emits the canonical form: declarations in register order, then
gates; parse/serialize round-trip on canonical text.
"""

from __future__ import annotations

import re

from .circuits import Circuit, CircuitError, Gate, GateKind, Register, Role

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")

_GATE_ARITY = {"NOT": 1, "CNOT": 2, "TOF": 3, "Z": 1, "CZ": 2, "RAND": 1, "COPY": 2}


class NetlistError(ValueError):
    """Syntax or structural error in netlist text, with a line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_netlist(text: str) -> Circuit:
    registers: list[Register] = []
    names: dict[str, int] = {}
    gates: list[Gate] = []
    seen_gate = False

    def declare(line_no: int, name: str, role: Role, init: int = 0) -> None:
        nonlocal seen_gate
        if seen_gate:
            raise NetlistError(line_no, "declarations must precede gates")
        if not _NAME.match(name):
            raise NetlistError(line_no, f"bad register name {name!r}")
        if name in names:
            raise NetlistError(line_no, f"duplicate register name {name!r}")
        names[name] = len(registers)
        registers.append(Register(len(registers), name, role, init))

    def resolve(line_no: int, name: str) -> int:
        if name not in names:
            raise NetlistError(line_no, f"reference to undeclared register {name!r}")
        return names[name]

    def parse_gate(line_no: int, tok: list[str], cond: int | None) -> None:
        nonlocal seen_gate
        kind = tok[0]
        if kind not in _GATE_ARITY:
            raise NetlistError(line_no, f"unknown gate kind {kind!r}")
        if len(tok) - 1 != _GATE_ARITY[kind]:
            raise NetlistError(
                line_no,
                f"{kind} takes {_GATE_ARITY[kind]} operand(s), got {len(tok) - 1}",
            )
        args = tuple(resolve(line_no, t) for t in tok[1:])
        if len(set(args)) != len(args):
            raise NetlistError(line_no, f"duplicate operand in {kind} gate")
        seen_gate = True
        gates.append(Gate(GateKind(kind), args, cond=cond))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        if head == "in":
            if len(tok) != 3 or tok[1] not in ("secret", "public"):
                raise NetlistError(line_no, "expected: in secret|public <name>")
            declare(line_no, tok[2], Role.SECRET if tok[1] == "secret" else Role.PUBLIC)
        elif head == "reg":
            if len(tok) == 2:
                declare(line_no, tok[1], Role.INTERNAL)
            elif len(tok) == 4 and tok[2] == "init" and tok[3] in ("0", "1"):
                declare(line_no, tok[1], Role.INTERNAL, int(tok[3]))
            else:
                raise NetlistError(line_no, "expected: reg <name> [init 0|1]")
        elif head == "out":
            if len(tok) != 2:
                raise NetlistError(line_no, "expected: out <name>")
            declare(line_no, tok[1], Role.OUTPUT)
        elif head == "gate":
            if len(tok) < 2:
                raise NetlistError(line_no, "expected: gate <KIND> <operands>")
            parse_gate(line_no, tok[1:], cond=None)
        elif head == "cgate":
            if len(tok) < 3:
                raise NetlistError(line_no, "expected: cgate <event> <KIND> <operands>")
            try:
                cond = int(tok[1])
            except ValueError:
                raise NetlistError(line_no, f"bad event reference {tok[1]!r}") from None
            if cond < 0:
                raise NetlistError(line_no, f"bad event reference {tok[1]!r}")
            parse_gate(line_no, tok[2:], cond=cond)
        else:
            raise NetlistError(line_no, f"unknown statement {head!r}")

    try:
        return Circuit(registers, gates)
    except CircuitError as exc:
        raise NetlistError(0, str(exc)) from exc


def serialize_netlist(circuit: Circuit) -> str:
    """Canonical netlist text: declarations in register order, then gates."""
    lines = []
    for reg in circuit.registers:
        if reg.role is Role.SECRET:
            lines.append(f"in secret {reg.name}")
        elif reg.role is Role.PUBLIC:
            lines.append(f"in public {reg.name}")
        elif reg.role is Role.OUTPUT:
            lines.append(f"out {reg.name}")
        elif reg.init:
            lines.append(f"reg {reg.name} init 1")
        else:
            lines.append(f"reg {reg.name}")
    for g in circuit.gates:
        ops = " ".join(circuit.registers[a].name for a in g.args)
        if g.cond is None:
            lines.append(f"gate {g.kind.value} {ops}")
        else:
            lines.append(f"cgate {g.cond} {g.kind.value} {ops}")
    return "\n".join(lines) + "\n"
