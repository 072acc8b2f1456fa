"""Gate-level circuit representation with polarity-annotated controls.

Gate kinds:
  roty(theta)  -- |0> -> cos t |0> + sin t |1>,  |1> -> -sin t |0> + cos t |1>
  utheta(theta)-- rows (cos t, sin t; sin t, -cos t); an involution
  x / cnot / mcx -- bit flip; cnot carries one control, mcx any number
Every gate may carry controls.  A positive control (filled circle) fires on
bit value 1, a negative control (open circle) fires on bit value 0.

Cost accounting is in CNOT-equivalents: single-qubit gates are free, a
1-control flip costs 1, a c-control flip costs c^2 (or c when an auxiliary
workspace qubit is assumed available), and a c-controlled rotation costs two
c-control flips.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .statevec import StateVector

CIRCUIT_SCHEMA = "uqcm-circuit/1"

ROTATION_KINDS = ("roty", "utheta")
FLIP_KINDS = ("x", "cnot", "mcx")
KINDS = ROTATION_KINDS + FLIP_KINDS

ROLE_NAMES = ("input", "blank", "machine", "aux", "ancilla-flag")

_X_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


class Control(NamedTuple):
    q: int
    positive: bool


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple[Control, ...] = ()
    theta: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        controls = tuple(Control(int(q), bool(p)) for q, p in self.controls)
        object.__setattr__(self, "controls", controls)
        qs = [c.q for c in controls]
        if len(set(qs)) != len(qs):
            raise ValueError(f"duplicate control qubits in {qs}")
        if self.target in qs:
            raise ValueError(f"target {self.target} also appears as a control")
        if self.kind in ROTATION_KINDS:
            if self.theta is None:
                raise ValueError(f"{self.kind} gate requires theta")
        elif self.theta is not None:
            raise ValueError(f"{self.kind} gate takes no theta")
        if self.kind == "cnot" and len(controls) != 1:
            raise ValueError("cnot requires exactly one control")

    def matrix(self) -> np.ndarray:
        """2x2 matrix applied to the target (controls handled separately)."""
        if self.kind == "roty":
            c, s = math.cos(self.theta), math.sin(self.theta)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == "utheta":
            c, s = math.cos(self.theta), math.sin(self.theta)
            return np.array([[c, s], [s, -c]], dtype=complex)
        return _X_MATRIX

    def inverse(self) -> "Gate":
        if self.kind == "roty":
            return Gate("roty", self.target, self.controls, -self.theta)
        return self  # utheta and all flips are involutions

    def max_qubit(self) -> int:
        return max([self.target] + [c.q for c in self.controls])

    def cnot_cost(self, aux_available: bool = False) -> int:
        c = len(self.controls)
        if c == 0:
            return 0
        flips = 1 if c == 1 else (c if aux_available else c * c)
        return 2 * flips if self.kind in ROTATION_KINDS else flips


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``n_qubits`` qubits, with optional qubit roles."""

    n_qubits: int
    gates: tuple[Gate, ...]
    roles: dict[str, tuple[int, ...]] | None = field(default=None)

    def __post_init__(self) -> None:
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        for g in gates:
            if g.max_qubit() >= self.n_qubits:
                raise ValueError(f"gate {g} exceeds register of {self.n_qubits} qubits")
        if self.roles is not None:
            roles = {name: tuple(qs) for name, qs in self.roles.items()}
            object.__setattr__(self, "roles", roles)
            claimed = [q for qs in roles.values() for q in qs]
            if sorted(claimed) != list(range(self.n_qubits)):
                raise ValueError(f"roles {roles} do not partition qubits 0..{self.n_qubits - 1}")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.n_qubits, self.gates + other.gates, self.roles or other.roles)

    def apply(self, state: StateVector) -> StateVector:
        return apply(self, state)

    def remapped(self, n_qubits: int, offset: int) -> "Circuit":
        """Embed into a wider register, shifting every qubit index by ``offset``."""
        gates = tuple(
            Gate(g.kind, g.target + offset,
                 tuple(Control(c.q + offset, c.positive) for c in g.controls), g.theta)
            for g in self.gates
        )
        return Circuit(n_qubits, gates)

    def role_qubits(self, name: str) -> tuple[int, ...]:
        if self.roles is None or name not in self.roles:
            return ()
        return self.roles[name]


def apply(circuit: Circuit, state: StateVector) -> StateVector:
    """Apply gates in order; returns a new state (unitary, norm-preserving)."""
    if state.n_qubits != circuit.n_qubits:
        raise ValueError(
            f"dimension mismatch: circuit on {circuit.n_qubits} qubits, "
            f"state on {state.n_qubits}")
    n = circuit.n_qubits
    amps = state.amps.copy()
    idx = np.arange(2 ** n)
    for g in circuit.gates:
        sel = np.ones(2 ** n, dtype=bool)
        for q, positive in g.controls:
            bit = (idx >> (n - 1 - q)) & 1
            sel &= bit == (1 if positive else 0)
        tmask = 1 << (n - 1 - g.target)
        i0 = idx[sel & ((idx & tmask) == 0)]
        i1 = i0 | tmask
        m = g.matrix()
        a0 = amps[i0]
        a1 = amps[i1]
        amps[i0] = m[0, 0] * a0 + m[0, 1] * a1
        amps[i1] = m[1, 0] * a0 + m[1, 1] * a1
    return StateVector(amps)


def cnot_cost(circuit: Circuit, aux_available: bool = False) -> int:
    """Total CNOT-equivalent cost; additive over concatenation."""
    return sum(g.cnot_cost(aux_available) for g in circuit.gates)


def inverse(circuit: Circuit) -> Circuit:
    """Reversed gate order with each gate inverted."""
    return Circuit(circuit.n_qubits, tuple(g.inverse() for g in reversed(circuit.gates)),
                   circuit.roles)


def to_dict(circuit: Circuit) -> dict:
    return {
        "schema": CIRCUIT_SCHEMA,
        "n_qubits": circuit.n_qubits,
        "roles": {name: list(qs) for name, qs in (circuit.roles or {}).items()},
        "gates": [
            {
                "kind": g.kind,
                **({"theta": g.theta} if g.theta is not None else {}),
                "target": g.target,
                "controls": [
                    {"q": c.q, "polarity": "positive" if c.positive else "negative"}
                    for c in g.controls
                ],
            }
            for g in circuit.gates
        ],
    }


def from_dict(data: dict) -> Circuit:
    if data.get("schema") != CIRCUIT_SCHEMA:
        raise ValueError(f"unsupported circuit schema {data.get('schema')!r}")
    gates = tuple(
        Gate(
            gd["kind"],
            gd["target"],
            tuple(Control(cd["q"], cd["polarity"] == "positive") for cd in gd["controls"]),
            gd.get("theta"),
        )
        for gd in data["gates"]
    )
    roles = {name: tuple(qs) for name, qs in data.get("roles", {}).items()} or None
    return Circuit(data["n_qubits"], gates, roles)


def to_json(circuit: Circuit) -> str:
    return json.dumps(to_dict(circuit), indent=2, sort_keys=True)


def from_json(text: str) -> Circuit:
    return from_dict(json.loads(text))
