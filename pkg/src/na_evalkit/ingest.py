"""Adapter from a restricted flat QASM gate list to staged circuit text.

This is deliberately not a compiler: no routing, no transpilation, no moves.
The input must already be expressed in the native gate set
{cz, rx, ry, rz, h, s, t}; logical qubit i lands on the i-th placed cell in
row-major order, and gates are packed into stages either one per stage or
greedily (earliest stage whose cells are all free, never crossing a
barrier fence or per-qubit program order).

``barrier`` statements are recognised and recorded but are never gates; in
particular a barrier is never treated as a two-qubit operation, so it
contributes nothing to gate counts or fidelity. Rotation angles must be
numeric literals (radians).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .arch import ArchitectureSpec
from .errors import RsqasmSyntaxError, TooManyQubits, UnsupportedConstruct
from .rsqasm import (
    Gate,
    NATIVE_GATES,
    ONE_PARAM_GATES,
    Program,
    Stage,
    gate_arity,
)

ONE_PER_STAGE = "one-per-stage"
GREEDY = "greedy"

_UNSUPPORTED_KEYWORDS = ("creg", "measure", "reset", "if", "gate", "opaque")

_QREG_RE = re.compile(r"qreg\s+([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")
_OPERAND_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?:\[\s*(\d+)\s*\])?$")
_GATE_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s+(.+)$")
_NUMBER_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?$")


@dataclass(frozen=True)
class FlatGate:
    name: str
    params: tuple[float, ...]
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class FlatBarrier:
    qubits: tuple[int, ...]  # empty = whole register


@dataclass(frozen=True)
class FlatCircuit:
    """Flat gate list over logical qubits; barriers kept but semantically inert."""

    qubit_count: int
    ops: tuple[FlatGate | FlatBarrier, ...]

    @property
    def gates(self) -> tuple[FlatGate, ...]:
        return tuple(op for op in self.ops if isinstance(op, FlatGate))


def _strip_comments(document: str) -> str:
    return "\n".join(line.split("//", 1)[0] for line in document.split("\n"))


def _parse_operands(text: str, register: str | None) -> tuple[list[int], bool]:
    """Parse a comma-separated operand list; returns (indices, saw_bare_register)."""
    indices: list[int] = []
    bare = False
    for part in text.split(","):
        m = _OPERAND_RE.match(part.strip())
        if m is None:
            raise RsqasmSyntaxError(f"malformed operand {part.strip()!r}")
        name, idx = m.group(1), m.group(2)
        if register is not None and name != register:
            raise UnsupportedConstruct(f"unknown register {name!r}")
        if idx is None:
            bare = True
        else:
            indices.append(int(idx))
    return indices, bare


def parse_flat_qasm(document: str) -> FlatCircuit:
    """Parse the restricted flat QASM subset.

    Accepted statements: an ``OPENQASM`` header, ``include "qelib1.inc"``,
    at most one ``qreg``, native-gate applications, and ``barrier``.
    Everything else (measurement, classical registers, other includes,
    multiple qregs, non-native gates) raises UnsupportedConstruct. When no
    qreg is declared, the qubit count is inferred from the highest index
    used.
    """
    register: str | None = None
    declared: int | None = None
    ops: list[FlatGate | FlatBarrier] = []
    max_index = -1

    for raw in _strip_comments(document).split(";"):
        stmt = " ".join(raw.split())
        if not stmt:
            continue
        keyword = stmt.split(" ", 1)[0].split("(", 1)[0]

        if keyword == "OPENQASM":
            continue
        if keyword == "include":
            if '"qelib1.inc"' not in stmt:
                raise UnsupportedConstruct(f"unsupported include: {stmt!r}")
            continue
        if keyword == "qreg":
            m = _QREG_RE.match(stmt)
            if m is None:
                raise RsqasmSyntaxError(f"malformed qreg declaration {stmt!r}")
            if register is not None:
                raise UnsupportedConstruct("multiple quantum registers are not supported")
            register, declared = m.group(1), int(m.group(2))
            continue
        if keyword in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstruct(f"unsupported statement: {stmt!r}")

        if keyword == "barrier":
            rest = stmt[len("barrier"):].strip()
            if rest:
                indices, bare = _parse_operands(rest, register)
                ops.append(FlatBarrier(() if bare else tuple(indices)))
                max_index = max(max_index, *indices) if indices else max_index
            else:
                ops.append(FlatBarrier(()))
            continue

        if keyword not in NATIVE_GATES:
            raise UnsupportedConstruct(f"non-native gate {keyword!r}")
        m = _GATE_RE.match(stmt)
        if m is None:
            raise RsqasmSyntaxError(f"malformed gate statement {stmt!r}")
        name, param_text, operand_text = m.group(1), m.group(2), m.group(3)
        params: tuple[float, ...] = ()
        if param_text is not None:
            pieces = [p.strip() for p in param_text.split(",")]
            for piece in pieces:
                if not _NUMBER_RE.match(piece):
                    raise UnsupportedConstruct(
                        f"non-numeric gate parameter {piece!r} (literals only)"
                    )
            params = tuple(float(p) for p in pieces)
        want = 1 if name in ONE_PARAM_GATES else 0
        if len(params) != want:
            raise RsqasmSyntaxError(f"{name} takes {want} parameter(s), got {len(params)}")
        indices, bare = _parse_operands(operand_text, register)
        if bare:
            raise UnsupportedConstruct("gates on a whole register are not supported")
        if len(indices) != gate_arity(name):
            raise RsqasmSyntaxError(
                f"{name} takes {gate_arity(name)} operand(s), got {len(indices)}"
            )
        if len(set(indices)) != len(indices):
            raise RsqasmSyntaxError(f"{name} operands must be distinct qubits")
        ops.append(FlatGate(name, params, tuple(indices)))
        max_index = max(max_index, *indices)

    count = declared if declared is not None else max_index + 1
    if max_index >= count:
        raise RsqasmSyntaxError(
            f"qubit index {max_index} exceeds the declared register size {count}"
        )
    return FlatCircuit(count, tuple(ops))


def to_rsqasm(circuit: FlatCircuit, spec: ArchitectureSpec, packing: str = GREEDY) -> Program:
    """Embed a flat circuit onto the spec's placed cells and stage it.

    ``one-per-stage`` gives every gate its own stage. ``greedy`` packs each
    gate into the earliest stage whose cells are untouched, scanning back
    from the end until a dependency, which preserves per-qubit program
    order; barriers fence their qubits so nothing packs across them.
    """
    if packing not in (GREEDY, ONE_PER_STAGE):
        raise ValueError(f"unknown packing {packing!r}")
    placed = sorted(q.y * spec.grid_side + q.x for q in spec.qubits)
    if circuit.qubit_count > len(placed):
        raise TooManyQubits(
            f"circuit uses {circuit.qubit_count} qubits, architecture places {len(placed)}"
        )

    stages: list[list[Gate]] = []
    stage_cells: list[set[int]] = []
    fence: dict[int, int] = {}

    for op in circuit.ops:
        if isinstance(op, FlatBarrier):
            targets = op.qubits if op.qubits else range(circuit.qubit_count)
            for q in targets:
                fence[placed[q]] = len(stages)
            continue
        cells = tuple(placed[q] for q in op.qubits)
        gate = Gate(op.name, op.params, cells)
        if packing == ONE_PER_STAGE:
            stages.append([gate])
            stage_cells.append(set(cells))
            continue
        k = len(stages)
        while k > 0 and not stage_cells[k - 1].intersection(cells):
            k -= 1
        k = max([k] + [fence.get(c, 0) for c in cells])
        if k == len(stages):
            stages.append([])
            stage_cells.append(set())
        stages[k].append(gate)
        stage_cells[k].update(cells)

    return Program(1, 0, tuple(Stage(tuple(ops)) for ops in stages))
