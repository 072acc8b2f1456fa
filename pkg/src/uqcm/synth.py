"""End-to-end cloner synthesis: preparation stage + cloning stage + roles.

Register layout of a synthesized circuit (qubit 0 first):
    [ input (N) | blank (M-N) | machine (M-N) | aux (n_aux) | ancilla-flag ]
After the circuit runs, the clones are the first M qubits and the machine
register the next M-N; auxiliary and flag qubits end disentangled in |0>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Control, Gate, cnot_cost
from .cloner_math import CloneSpec, FeasibilityCheck, feasibility
from .perm import (PermutationPlan, PermutationSpec, ScheduleError,
                   build_permutation, compile_moves, schedule, validate_plan)
from .prep import BasisLayout, PrepTarget, emit_prep_circuit, prep_for_spec, solve_angles


@dataclass(frozen=True)
class SynthesisResult:
    spec: CloneSpec
    circuit: Circuit
    prep_circuit: Circuit
    clone_circuit: Circuit
    prep_target: PrepTarget
    layout: BasisLayout
    permutation: PermutationSpec
    plan: PermutationPlan
    feasibility: FeasibilityCheck

    @property
    def n_aux(self) -> int:
        return self.layout.n_aux

    @property
    def universal(self) -> bool:
        """True iff the routing reproduces the ideal transformation for
        arbitrary superposition inputs, not only computational ones."""
        return self.permutation.universal_routing

    def gate_counts(self, aux_available: bool = False) -> dict[str, int]:
        prep = cnot_cost(self.prep_circuit, aux_available)
        clone = cnot_cost(self.clone_circuit, aux_available)
        return {"prep": prep, "clone": clone, "total": prep + clone}


def synthesize_cloner(spec: CloneSpec, allow_aux: bool = True,
                      layout: BasisLayout | None = None) -> SynthesisResult:
    """Build the full cloning circuit for ``spec``.

    With ``allow_aux`` the preparation register grows beyond 2(M-N) qubits
    when the populated bases would not otherwise fit, or would leave no free
    basis for the move scheduler.  With ``allow_aux=False`` such cases raise.
    """
    check = feasibility(spec)
    if layout is None:
        layout = BasisLayout.packed(spec, allow_aux=allow_aux)
    target = prep_for_spec(spec, layout)
    prep_core = emit_prep_circuit(solve_angles(target))

    perm = build_permutation(spec, layout)
    try:
        plan = schedule(perm)
    except ScheduleError:
        if not allow_aux or layout.n_aux > 0:
            raise
        # counting condition holds with equality: every basis is populated,
        # so cycle-breaking needs one auxiliary qubit of headroom
        layout = BasisLayout.custom(spec, layout.placements, n_aux=1,
                                    machine_complement=layout.machine_complement)
        target = prep_for_spec(spec, layout)
        prep_core = emit_prep_circuit(solve_angles(target))
        perm = build_permutation(spec, layout)
        plan = schedule(perm)
    validate_plan(perm, plan)

    n, m = spec.n_in, spec.m_out
    n_data = n + layout.prep_qubits
    n_total = n_data + 1
    prep_embedded = prep_core.remapped(n_total, offset=n)
    clone_stage = compile_moves(plan, n_data)
    roles = {
        "input": tuple(range(n)),
        "blank": tuple(range(n, m)),
        "machine": tuple(range(m, 2 * m - n)),
        "ancilla-flag": (n_data,),
    }
    if layout.n_aux:
        roles["aux"] = tuple(range(2 * m - n, n_data))
    circuit = Circuit(n_total, prep_embedded.gates + clone_stage.gates, roles)
    prep_only = Circuit(n_total, prep_embedded.gates, roles)
    clone_only = Circuit(n_total, clone_stage.gates, roles)
    return SynthesisResult(
        spec=spec, circuit=circuit, prep_circuit=prep_only, clone_circuit=clone_only,
        prep_target=target, layout=layout, permutation=perm, plan=plan,
        feasibility=check)


def reference_one_to_two() -> Circuit:
    """Hand-optimized three-qubit 1->2 cloning network (six CNOTs).

    Two rotation-entangle rounds prepare the blank and machine qubits, then
    four CNOTs distribute the input.  Kept as an independent route to the
    same transformation for cross-checking synthesized circuits.
    """
    t1 = math.acos(1 / math.sqrt(5)) / 2
    t2 = math.acos(math.sqrt(5) / 3) / 2
    t3 = math.acos(2 / math.sqrt(5)) / 2
    gates = (
        Gate("roty", 1, (), t1),
        Gate("cnot", 2, (Control(1, True),)),
        Gate("roty", 2, (), t2),
        Gate("cnot", 1, (Control(2, True),)),
        Gate("roty", 1, (), t3),
        Gate("cnot", 1, (Control(0, True),)),
        Gate("cnot", 2, (Control(0, True),)),
        Gate("cnot", 0, (Control(1, True),)),
        Gate("cnot", 0, (Control(2, True),)),
    )
    roles = {"input": (0,), "blank": (1,), "machine": (2,)}
    return Circuit(3, gates, roles)
