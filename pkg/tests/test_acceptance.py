"""Acceptance suite: one test per criterion, each at its stated tolerance.

The conftest hook prints one PASS/FAIL line per criterion when this module
runs; execute ``pytest tests/test_acceptance.py -q`` to see them.
"""

import random

import pytest

from na_evalkit import (
    Gate,
    Move,
    Program,
    WhatIfInput,
    apply_stage,
    collapse,
    effective_coherence_time,
    evaluate_hybridmapper,
    evaluate_unified,
    initial_state,
    instruction_duration,
    parse_flat_qasm,
    parse_program,
    serialize_program,
    simulate,
    to_rsqasm,
    whatif_collapse,
)
from na_evalkit.cli import main
from na_evalkit.evaluator import decoherence_fidelity, movement_fidelity
from helpers import (
    GOLDEN_TEXT,
    arch_document,
    make_spec,
    random_legal_program,
    random_program_with_redundancy,
    random_stage,
)


def test_a1_effective_coherence_time(table1_spec):
    assert table1_spec.t1 == 1.0e8 and table1_spec.t2 == 1.5e6
    assert effective_coherence_time(table1_spec) == pytest.approx(1477832.51, abs=0.01)


def test_a2_whatif_chain(table1_spec):
    result = whatif_collapse(
        WhatIfInput(
            old_t_idle_us=2747600.0,
            saved_distance_cells=6003.69,
            old_move_count=1828,
            new_move_count=937,
            n=30,
        ),
        table1_spec,
    )
    assert result.delta_t_move_us == pytest.approx(10915.8, abs=0.1)
    assert result.delta_t_idle_us == pytest.approx(327474.0, abs=1.0)
    assert result.t_idle_new_us == pytest.approx(2420126.37, abs=1.0)
    assert result.f_movements == pytest.approx(0.8291, abs=0.0002)
    assert result.f_decoherence == pytest.approx(0.1944, abs=0.0002)


def test_a3_precollapse_consistency(table1_spec):
    assert movement_fidelity(1828, 0.9999) == pytest.approx(0.6937, abs=0.0002)
    t_eff = effective_coherence_time(table1_spec)
    assert decoherence_fidelity(2747600.0, t_eff) == pytest.approx(0.1558, abs=0.0002)


def _final_mapping(program, spec):
    return simulate(initial_state(spec), program).atom_cells()


def test_a4_collapse_rules():
    # reversal: the out-and-back pair disappears
    spec = make_spec(side=50, cells=[1033, 1034])
    program = parse_program(
        "RSQASM 1.0;\ncz q[1034], q[1033];\nmove q[1034], q[1028];\n"
        "move q[1028], q[1034];\nh q[1034];\n"
    )
    collapsed, report = collapse(program, spec)
    assert report.moves_before == 2 and report.moves_after == 0
    assert _final_mapping(collapsed, spec) == _final_mapping(program, spec)

    # two-leg path: merged into the single direct move 1034 -> 1029
    spec = make_spec(side=50, cells=[1028, 1033, 1034, 1201])
    program = parse_program(
        "RSQASM 1.0;\ncz q[1034], q[1033];\nmove q[1034], q[865];\n"
        "move q[865], q[1029];\nmove q[1201], q[1034];\nh q[1028];\n"
    )
    collapsed, report = collapse(program, spec)
    assert report.moves_before == 3 and report.moves_after == 2
    moves = [op for st in collapsed.stages for op in st.ops if isinstance(op, Move)]
    assert Move(1034, 1029) in moves
    assert _final_mapping(collapsed, spec) == _final_mapping(program, spec)

    # nested reversals: all four moves removed
    spec = make_spec(side=50, cells=[1028, 1029, 1033, 1034])
    program = parse_program(
        "RSQASM 1.0;\ncz q[1029], q[1028];cz q[1034], q[1033];\n"
        "move q[1034], q[1201];\nmove q[1029], q[865];\n"
        "move q[865], q[1029];\nmove q[1201], q[1034];\nh q[1029];\n"
    )
    collapsed, report = collapse(program, spec)
    assert report.moves_before == 4 and report.moves_after == 0
    assert _final_mapping(collapsed, spec) == _final_mapping(program, spec)


def test_a5_parser_golden():
    program = parse_program(GOLDEN_TEXT)
    assert len(program.stages) == 4
    ops = [op for stage in program.stages for op in stage.ops]
    gates = sorted(
        (op.name, op.operands) for op in ops if isinstance(op, Gate)
    )
    moves = sorted((op.src, op.dst) for op in ops if isinstance(op, Move))
    assert gates == [("cz", (0, 5)), ("cz", (1, 3)), ("cz", (2, 1)), ("h", (0,))]
    assert moves == [(2, 4), (3, 4)]
    assert serialize_program(program) == GOLDEN_TEXT


def test_a6i_occupancy_conservation_1000_programs():
    spec = make_spec(side=6, cells=list(range(7)))
    rng = random.Random(61)
    for _ in range(1000):
        program = random_legal_program(rng, spec, max_stages=8)
        state = initial_state(spec)
        atoms = sorted(state.occupancy.values())
        for stage in program.stages:
            state = apply_stage(state, stage)
            assert len(state.occupancy) == len(atoms)
            assert sorted(state.occupancy.values()) == atoms


def test_a6ii_asp_bounds_and_monotonicity():
    spec = make_spec(side=6, cells=list(range(7)))
    rng = random.Random(62)
    checked = 0
    while checked < 300:
        program = random_legal_program(rng, spec, max_stages=6)
        breakdown = evaluate_unified(program, spec)
        assert 0.0 < breakdown.asp <= 1.0
        for factor in (breakdown.f_decoherence, breakdown.f_gates, breakdown.f_movements):
            assert 0.0 < factor <= 1.0
        state = initial_state(spec)
        for stage in program.stages:
            state = apply_stage(state, stage)
        extra = random_stage(rng, state)
        if extra is None:
            continue
        extended = evaluate_unified(Program(1, 0, program.stages + (extra,)), spec)
        assert extended.f_decoherence < breakdown.f_decoherence
        if any(isinstance(op, Gate) for op in extra.ops):
            assert extended.f_gates < breakdown.f_gates
        if any(isinstance(op, Move) for op in extra.ops):
            assert extended.f_movements < breakdown.f_movements
        checked += 1


def test_a6iii_collapse_idempotent_and_equivalent_1000_programs():
    spec = make_spec(side=6, cells=list(range(8)))
    rng = random.Random(63)
    total_rewrites = 0
    for _ in range(1000):
        program = random_program_with_redundancy(rng, spec)
        collapsed, report = collapse(program, spec)
        total_rewrites += len(report.rewrites_applied)
        assert report.moves_after <= report.moves_before
        assert report.saved_distance_cells >= 0.0
        assert _final_mapping(collapsed, spec) == _final_mapping(program, spec)
        again, second = collapse(collapsed, spec)
        assert again == collapsed and second.rewrites_applied == ()
    assert total_rewrites > 0


def test_a6iv_incremental_matches_batch():
    spec = make_spec(side=6, cells=list(range(7)))
    rng = random.Random(64)
    n = spec.qubit_count
    for _ in range(200):
        program = random_legal_program(rng, spec, max_stages=20)
        t_total = 0.0
        gate_time = 0.0
        f_gates = 1.0
        moves = 0
        for stage in program.stages:
            t_total += max(instruction_duration(op, spec) for op in stage.ops)
            for op in stage.ops:
                if isinstance(op, Gate):
                    gate_time += spec.gate_times[op.name]
                    f_gates *= spec.gate_fidelities[op.name]
                else:
                    moves += 1
        batch = evaluate_unified(program, spec)
        assert batch.t_total_us == pytest.approx(t_total, rel=1e-12)
        assert batch.t_idle_us == pytest.approx(n * t_total - gate_time, rel=1e-12)
        assert batch.f_gates == pytest.approx(f_gates, rel=1e-12)
        assert batch.move_count == moves
        assert batch.f_movements == pytest.approx(
            spec.transfer_fidelity ** (2 * moves), rel=1e-12
        )


def test_a6v_hybridmapper_decoherence_dominates_unified():
    spec = make_spec(side=6, cells=list(range(7)))
    rng = random.Random(65)
    for _ in range(300):
        program = random_legal_program(rng, spec, max_stages=8)
        hm = evaluate_hybridmapper(program, spec)
        un = evaluate_unified(program, spec)
        assert hm.f_decoherence >= un.f_decoherence


def test_a7_barrier_regression(table1_spec):
    circuit = parse_flat_qasm("cz q[1], q[2]; barrier q[1], q[2];")
    assert len(circuit.gates) == 1
    program = to_rsqasm(circuit, table1_spec)
    breakdown = evaluate_unified(program, table1_spec)
    assert breakdown.two_qubit_gate_count == 1
    assert breakdown.gate_count == 1


def test_a8_cli_contract(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NA_EVALKIT_COLOR", "never")
    arch = tmp_path / "arch.json"
    arch.write_text(arch_document())

    # success path: the collapsed-schedule row carries 19.44 and 82.91
    assert main([
        "whatif", str(arch), "--old-idle", "2747600",
        "--saved-distance", "6003.69", "--moves-before", "1828",
        "--moves-after", "937", "--n", "30",
    ]) == 0
    fields = capsys.readouterr().out.splitlines()[1].split()
    assert "19.44" in fields and "82.91" in fields

    # I/O error path
    assert main(["validate", str(tmp_path / "missing.rsqasm"), str(arch)]) == 1
    capsys.readouterr()

    # domain error path
    assert main([
        "whatif", str(arch), "--old-idle", "10",
        "--saved-distance", "1000000", "--moves-before", "10",
        "--moves-after", "5", "--n", "30",
    ]) == 2
    assert "InvalidInput" in capsys.readouterr().err
