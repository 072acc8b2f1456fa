"""Acceptance suite: one test per acceptance criterion, one verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.

Two criteria fail by design of the underlying physics and are left red on
purpose rather than loosened; see the project README:
  * criterion 6: the Ba+ minimum-emission reference value 0.017 is a
    two-significant-figure rounding of the exact 0.0174757, which sits 2.8%
    away, outside the required 2%;
  * criterion 7: with two or more input qubits no preparation+basis-shuffle
    circuit can clone arbitrary superpositions (a shuffle cannot merge
    amplitudes), so the universality requirement is only attainable for the
    single-input specs.  Synthesis reports this via ``universal_routing``.
"""
import math
import time
from itertools import combinations

import numpy as np
import pytest

from uqcm import (BasisLayout, CloneSpec, PermutationSpec, PrepTarget,
                  StateVector, TrapParams, apply, basis_count, cnot_cost,
                  emit_prep_circuit, feasibility, feasibility_threshold,
                  haar_random_qubit, ideal_output, lhs_mmax, load_species,
                  min_emission_probability, partial_trace,
                  reference_one_to_two, schedule, solve_angles,
                  synthesize_cloner, tensor_power, theoretical_fidelity,
                  validate_plan, verify)
from uqcm.cloner_math import AMP_EPS

from test_ion_budget import numeric_min_over_x


def report(num: int, ok: bool, detail: str) -> None:
    print(f"\nCRITERION {num}: {'PASS' if ok else 'FAIL'} -- {detail}")


def run_cloner(circuit, spec, psi):
    reg = tensor_power(psi, spec.n_in) if spec.n_in > 1 else psi
    return apply(circuit, reg.tensor(StateVector.basis(circuit.n_qubits - spec.n_in, 0)))


def test_criterion_1_one_to_two_fidelity():
    start = time.perf_counter()
    spec = CloneSpec(1, 2)
    circuits = {"reference": reference_one_to_two(),
                "synthesized": synthesize_cloner(spec).circuit}
    stats = {}
    for name, circuit in circuits.items():
        fids = []
        for i in range(100):
            psi = haar_random_qubit(101, i)
            out = run_cloner(circuit, spec, psi)
            rho = partial_trace(out, {0})
            fids.append(float(np.real(psi.amps.conj() @ rho.elements @ psi.amps)))
        stats[name] = (float(np.mean(fids)), float(np.std(fids)))
    elapsed = time.perf_counter() - start
    ok = all(abs(mean - 5 / 6) < 1e-9 and std < 1e-9 for mean, std in stats.values())
    ok = ok and elapsed < 1.0
    report(1, ok, f"fidelities {stats}, elapsed {elapsed:.2f}s")
    for name, (mean, std) in stats.items():
        assert abs(mean - 5 / 6) < 1e-9, name
        assert std < 1e-9, name
    assert elapsed < 1.0


def test_criterion_2_two_to_four_exact_state():
    start = time.perf_counter()
    spec = CloneSpec(2, 4)
    result = synthesize_cloner(spec)
    out = run_cloner(result.circuit, spec, StateVector.basis(1, 0))
    # the worked 2->4 construction complements the machine bits
    ideal = ideal_output(spec, StateVector.basis(1, 0), machine_complement=True).amps
    ext = np.zeros(2 ** result.circuit.n_qubits, dtype=complex)
    ext[np.arange(ideal.size) << 1] = ideal
    err = float(np.max(np.abs(out.amps - ext)))
    nonzero = np.sort(np.abs(out.amps[np.abs(out.amps) > AMP_EPS]))
    expected = np.sort([math.sqrt(3 / 5)] + [math.sqrt(3 / 80)] * 8 + [math.sqrt(1 / 60)] * 6)
    elapsed = time.perf_counter() - start
    multiset_ok = nonzero.size == 15 and np.max(np.abs(nonzero - expected)) < 1e-9
    ok = err < 1e-9 and multiset_ok and elapsed < 5.0
    report(2, ok, f"state error {err:.2e}, {nonzero.size} bases, elapsed {elapsed:.2f}s")
    assert err < 1e-9
    assert multiset_ok
    assert elapsed < 5.0


def test_criterion_3_clone_symmetry_and_ancilla_cleanup(sweep_results):
    worst_sym, worst_anc, worst_flag = 0.0, 0.0, 0.0
    for nm, result in sweep_results.items():
        spec, circuit = result.spec, result.circuit
        m = spec.m_out
        anc_qubits = list(range(spec.total_qubits, circuit.n_qubits))
        flag = circuit.role_qubits("ancilla-flag")[0]
        inputs = [StateVector.basis(1, 0), StateVector.basis(1, 1)]
        inputs += [haar_random_qubit(303, i) for i in range(5)]
        for which, psi in enumerate(inputs):
            out = run_cloner(circuit, spec, psi)
            # the flag returns to |0> for every input
            flag_rho = partial_trace(out, {flag}).elements
            worst_flag = max(worst_flag, float(abs(flag_rho[1, 1])))
            if which < 2:
                # on the computational inputs the whole trailing register
                # (aux + flag) disentangles and the clone marginals agree
                anc = partial_trace(out, anc_qubits).elements.copy()
                anc[0, 0] -= 1.0
                worst_anc = max(worst_anc, float(np.max(np.abs(anc))))
                rhos = [partial_trace(out, {q}).elements for q in range(m)]
                for i, j in combinations(range(m), 2):
                    worst_sym = max(worst_sym, float(np.max(np.abs(rhos[i] - rhos[j]))))
    ok = worst_sym < 1e-10 and worst_anc < 1e-12 and worst_flag < 1e-12
    report(3, ok, f"clone marginal spread {worst_sym:.2e}, aux+flag residue {worst_anc:.2e}, "
                  f"flag residue {worst_flag:.2e} across {len(sweep_results)} specs")
    assert worst_sym < 1e-10
    assert worst_anc < 1e-12
    assert worst_flag < 1e-12


def test_criterion_4_feasibility_condition():
    single_ok = all(feasibility(CloneSpec(1, m)).feasible_without_aux for m in range(2, 13))
    c24 = feasibility(CloneSpec(2, 4))
    c36 = feasibility(CloneSpec(3, 6))
    ok = (single_ok and (c24.lhs, c24.rhs, c24.feasible_without_aux) == (15, 16, True)
          and (c36.lhs, c36.rhs, c36.feasible_without_aux) == (84, 64, False)
          and basis_count(CloneSpec(2, 4)) == 15 and basis_count(CloneSpec(3, 6)) == 84)
    report(4, ok, f"1->M fits for M<=12: {single_ok}; 2->4: {c24}; 3->6: {c36}")
    assert ok


def test_criterion_5_threshold_table():
    params = TrapParams(eta=0.01, epsilon=100.0, delta2=1e13)
    species = load_species()
    printed = {"Ca+": 0.72, "Hg+": 0.084, "Ba+": 2.58}
    got = {name: feasibility_threshold(species[name], params) for name in printed}
    lhs = lhs_mmax(CloneSpec(1, 2))
    ok = all(abs(got[k] / v - 1) < 0.01 for k, v in printed.items())
    ok = ok and abs(lhs / 31.15 - 1) < 0.002
    report(5, ok, f"thresholds {({k: round(v, 4) for k, v in got.items()})}, lhs(1,2)={lhs:.4f}")
    for name, want in printed.items():
        assert abs(got[name] / want - 1) < 0.01, name
    assert abs(lhs / 31.15 - 1) < 0.002


def test_criterion_6_minimum_emission_reproduction():
    params = TrapParams(eta=0.01, delta2=1e13, gamma1=1.0)
    species = load_species()
    failures = []
    got = {}
    for name, printed in (("Ca+", 0.062), ("Ba+", 0.017)):
        value = min_emission_probability(CloneSpec(1, 2), species[name], params,
                                         gate_count_override=6)
        got[name] = value
        if abs(value / printed - 1) >= 0.02:
            failures.append(f"{name}: {value:.6f} vs printed {printed} "
                            f"({abs(value / printed - 1) * 100:.2f}% off)")
    worst_rel = 0.0
    for sp in species.values():
        for n in (1, 2, 3):
            for m in range(n + 1, 7):
                spec = CloneSpec(n, m)
                analytic = min_emission_probability(spec, sp, params)
                numeric = numeric_min_over_x(spec, sp, params)
                worst_rel = max(worst_rel, abs(numeric / analytic - 1))
    if worst_rel >= 1e-9:
        failures.append(f"analytic vs numeric optimum off by {worst_rel:.2e}")
    ok = not failures
    report(6, ok, f"p_min {({k: round(v, 6) for k, v in got.items()})}, "
                  f"optimum agreement {worst_rel:.2e}"
                  + ("" if ok else f"; failures: {failures}"))
    assert not failures, failures


def test_criterion_7_universality_suite(sweep_results):
    f24 = theoretical_fidelity(CloneSpec(2, 4))
    out24 = ideal_output(CloneSpec(2, 4), StateVector.basis(1, 0))
    rho = partial_trace(out24, {0})
    cross_ok = abs(f24 - 7 / 8) < 1e-12 and abs(
        float(np.real(rho.elements[0, 0])) - 7 / 8) < 1e-10
    failures = []
    for nm, result in sweep_results.items():
        rep = verify(result.spec, result.circuit, n_samples=50, seed=707,
                     gate_counts=result.gate_counts())
        want = theoretical_fidelity(result.spec)
        var = rep.clone_fidelity_std ** 2
        if abs(rep.clone_fidelity_mean - want) >= 1e-9 or var >= 1e-18:
            failures.append(f"{nm}: mean {rep.clone_fidelity_mean:.6f} vs {want:.6f}, "
                            f"variance {var:.2e}")
    ok = cross_ok and not failures
    report(7, ok, f"2->4 fidelity cross-check {'ok' if cross_ok else 'BAD'}"
                  + ("" if not failures else f"; non-universal: {failures}"))
    assert cross_ok
    assert not failures, failures


def test_criterion_8_prep_round_trip_and_scaling():
    rng = np.random.default_rng(808)
    worst = 0.0
    for trial in range(200):
        n = int(rng.integers(2, 7))
        c = rng.normal(size=2 ** n)
        c /= np.linalg.norm(c)
        target = PrepTarget(c)
        circ = emit_prep_circuit(solve_angles(target))
        out = apply(circ, StateVector.basis(n, 0))
        worst = max(worst, float(np.max(np.abs(out.amps.real - c))))
    counts, bounds = [], []
    for n in range(2, 9):
        c = np.full(2 ** n, 1 / math.sqrt(2 ** n))
        circ = emit_prep_circuit(solve_angles(PrepTarget(c)))
        counts.append(cnot_cost(circ, aux_available=True))
        bound = 2 * sum(2 ** (lev - 1) * (lev - 1) ** 2 for lev in range(1, n + 1))
        bounds.append(cnot_cost(circ, aux_available=False) <= bound)
    # exponent of d after dividing out the (log2 d)^2 factor
    xs = np.arange(2, 9, dtype=float)
    ys = np.log2(np.array(counts, dtype=float)) - 2 * np.log2(xs)
    gamma = float(np.polyfit(xs, ys, 1)[0])
    ok = worst < 1e-10 and all(bounds) and 0.9 <= gamma <= 1.1
    report(8, ok, f"round-trip error {worst:.2e}, fitted exponent {gamma:.3f}")
    assert worst < 1e-10
    assert all(bounds)
    assert 0.9 <= gamma <= 1.1


def test_criterion_9_scheduler_oracle():
    rng = np.random.default_rng(909)
    checked = 0
    for _ in range(500):
        n_items = int(rng.integers(1, 16))
        sources = rng.choice(16, size=n_items, replace=False)
        dests = rng.choice(16, size=n_items, replace=False)
        perm = PermutationSpec(4, {int(s): int(d) for s, d in zip(sources, dests)})
        validate_plan(perm, schedule(perm))
        checked += 1
    # the reference five-move order for the 1->2 shuffle, verbatim
    table = {0b000: 0b000, 0b001: 0b101, 0b011: 0b011,
             0b100: 0b111, 0b101: 0b010, 0b111: 0b100}
    moves = ((0b101, 0b010), (0b001, 0b101), (0b111, 0b001),
             (0b100, 0b111), (0b001, 0b100))
    validate_plan(PermutationSpec(3, table), moves)
    report(9, True, f"{checked} random partial shuffles replayed; five-move order accepted")
    assert checked == 500
