"""Unified fidelity model over a program and a hardware description.

The approximate success probability of a circuit is the product of three
factors:

    asp = f_decoherence * f_gates * f_movements

    f_decoherence = exp(-t_idle / t_eff),   t_eff = t1*t2 / (t1 + t2)
    f_gates       = product of the average fidelity of every executed gate
    f_movements   = transfer_fidelity ** (2 * move_count)

with the total idle time summed over all qubits,

    t_idle = n * T - sum of executed gate durations  (each gate once)

where n is the number of declared qubits and T is the total run time: the
sum over stages of the longest operation in the stage. A gate lasts its
configured duration; a move lasts ``2 * aod_transfer_time + distance /
move_speed`` with the physical distance ``cell_distance * inter_qubit_
distance``. Movement durations are never subtracted from idle time: shuttling
stretches the circuit and therefore costs decoherence, while its direct cost
is the pair of trap transfers per move counted in f_movements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from . import grid
from .arch import ArchitectureSpec, effective_coherence_time
from .errors import NegativeIdleTime, UnknownGate
from .rsqasm import Gate, Instruction, Move, Program

UNIFIED = "unified"


class StageKind(Enum):
    GATE = "gate"
    MOVE = "move"
    MIXED = "mixed"


@dataclass(frozen=True)
class StageTiming:
    duration_us: float
    kind: StageKind


@dataclass(frozen=True)
class FidelityBreakdown:
    """Per-circuit metrics shared by every model (``model`` names which one)."""

    model: str
    f_decoherence: float
    f_gates: float
    f_movements: float
    asp: float
    t_total_us: float
    t_idle_us: float
    gate_count: int
    one_qubit_gate_count: int
    two_qubit_gate_count: int
    move_count: int
    total_move_distance_cells: float
    stage_count: int
    busy_us: dict[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class GateFact:
    name: str
    atoms: tuple[int, ...]


@dataclass(frozen=True)
class StageFacts:
    """Model-independent facts about one stage of a legal execution."""

    gates: tuple[GateFact, ...]
    move_distances_cells: tuple[float, ...]

    @property
    def kind(self) -> StageKind:
        if self.gates and self.move_distances_cells:
            return StageKind.MIXED
        return StageKind.GATE if self.gates else StageKind.MOVE


@dataclass(frozen=True)
class ProgramTrace:
    stages: tuple[StageFacts, ...]
    final_state: grid.GridState


def trace_program(program: Program, spec: ArchitectureSpec) -> ProgramTrace:
    """Simulate a program, collecting which atoms each gate touched and how
    far each move traveled. Raises IllegalStage on the first illegal stage."""
    state = grid.initial_state(spec)
    stages: list[StageFacts] = []
    for index, stage in enumerate(program.stages):
        gates: list[GateFact] = []
        moves: list[float] = []
        next_state = grid.apply_stage(state, stage, index)
        for op in stage.ops:
            if isinstance(op, Gate):
                atoms = tuple(state.occupancy[c] for c in op.operands)
                gates.append(GateFact(op.name, atoms))
            else:
                moves.append(grid.cell_distance(op.src, op.dst, state.side))
        stages.append(StageFacts(tuple(gates), tuple(moves)))
        state = next_state
    return ProgramTrace(tuple(stages), state)


def gate_duration(name: str, spec: ArchitectureSpec) -> float:
    try:
        return spec.gate_times[name]
    except KeyError:
        raise UnknownGate(f"no duration configured for gate {name!r}") from None


def gate_fidelity(name: str, spec: ArchitectureSpec) -> float:
    try:
        return spec.gate_fidelities[name]
    except KeyError:
        raise UnknownGate(f"no fidelity configured for gate {name!r}") from None


def move_duration(distance_cells: float, spec: ArchitectureSpec) -> float:
    """2 transfers plus travel time, linear in physical distance."""
    travel = distance_cells * spec.inter_qubit_distance / spec.move_speed
    return 2.0 * spec.aod_transfer_time + travel


def instruction_duration(instruction: Instruction, spec: ArchitectureSpec) -> float:
    """Duration of a single instruction in microseconds."""
    if isinstance(instruction, Move):
        d = grid.cell_distance(instruction.src, instruction.dst, spec.grid_side)
        return move_duration(d, spec)
    return gate_duration(instruction.name, spec)


def _stage_duration(facts: StageFacts, spec: ArchitectureSpec) -> float:
    durations = [gate_duration(g.name, spec) for g in facts.gates]
    durations += [move_duration(d, spec) for d in facts.move_distances_cells]
    return max(durations)


def total_runtime(program: Program, spec: ArchitectureSpec) -> tuple[float, list[StageTiming]]:
    """Total run time and per-stage timings under the unified duration model.

    The program must be legal under grid simulation; IllegalStage propagates.
    """
    trace = trace_program(program, spec)
    timings = [StageTiming(_stage_duration(f, spec), f.kind) for f in trace.stages]
    return sum(t.duration_us for t in timings), timings


def decoherence_fidelity(t_idle_us: float, t_eff_us: float) -> float:
    """exp(-t_idle / t_eff); raises NegativeIdleTime for t_idle < 0."""
    if t_idle_us < 0:
        raise NegativeIdleTime(f"idle time {t_idle_us} us is negative")
    return math.exp(-t_idle_us / t_eff_us)


def movement_fidelity(move_count: int, transfer_fidelity: float) -> float:
    """Two trap transfers per move: transfer_fidelity ** (2 * move_count)."""
    return transfer_fidelity ** (2 * move_count)


def busy_times(trace: ProgramTrace, spec: ArchitectureSpec) -> dict[int, float]:
    """Per-atom time spent executing gates, in microseconds.

    A two-qubit gate counts its full duration toward both participants;
    movement never counts (only gate participation is busy time).
    """
    busy = {q.id: 0.0 for q in spec.qubits}
    for facts in trace.stages:
        for g in facts.gates:
            dur = gate_duration(g.name, spec)
            for atom in g.atoms:
                busy[atom] += dur
    return busy


def evaluate_unified(program: Program, spec: ArchitectureSpec) -> FidelityBreakdown:
    """Evaluate the unified model; see the module docstring for the formulas."""
    trace = trace_program(program, spec)
    n = spec.qubit_count

    t_total = 0.0
    gate_time_sum = 0.0
    f_gates = 1.0
    g1 = g2 = 0
    move_count = 0
    move_distance = 0.0
    for facts in trace.stages:
        t_total += _stage_duration(facts, spec)
        for g in facts.gates:
            gate_time_sum += gate_duration(g.name, spec)
            f_gates *= gate_fidelity(g.name, spec)
            if len(g.atoms) == 2:
                g2 += 1
            else:
                g1 += 1
        move_count += len(facts.move_distances_cells)
        move_distance += sum(facts.move_distances_cells)

    t_idle = n * t_total - gate_time_sum
    f_decoherence = decoherence_fidelity(t_idle, effective_coherence_time(spec))
    f_movements = movement_fidelity(move_count, spec.transfer_fidelity)

    return FidelityBreakdown(
        model=UNIFIED,
        f_decoherence=f_decoherence,
        f_gates=f_gates,
        f_movements=f_movements,
        asp=f_decoherence * f_gates * f_movements,
        t_total_us=t_total,
        t_idle_us=t_idle,
        gate_count=g1 + g2,
        one_qubit_gate_count=g1,
        two_qubit_gate_count=g2,
        move_count=move_count,
        total_move_distance_cells=move_distance,
        stage_count=len(trace.stages),
        busy_us=busy_times(trace, spec),
    )
