"""Preparation-stage synthesis: map |00...0> to an arbitrary real superposition.

The circuit is a binary amplitude-splitting tree: the level-L rotation acts
on qubit L-1 and is controlled on all earlier qubits selecting one branch,
so each basis prefix routes probability weight left (bit 0, cosine) or right
(bit 1, sine).  Levels above the leaves use nonnegative magnitudes; the leaf
level uses signed angles, which lets targets with negative coefficients
round-trip without extra sign-correction gates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Control, Gate
from .cloner_math import AMP_EPS, CloneSpec, basis_count, feasibility, weight_components
from .statevec import StateVector, qubit_count_for


@dataclass(frozen=True, eq=False)
class PrepTarget:
    """Real coefficient vector c over 2^n bases with sum c_k^2 = 1."""

    coeffs: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=float)
        n = qubit_count_for(c.size)
        total = float(np.sum(c * c))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"target not normalized: sum of squares = {total!r}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "n_qubits", n)

    def as_state(self) -> StateVector:
        return StateVector(self.coeffs.astype(complex))


@dataclass(frozen=True)
class AngleTree:
    """Rotation angles per level and branch; level L has 2^(L-1) branches."""

    levels: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        for lev, branch in enumerate(self.levels, start=1):
            if len(branch) != 2 ** (lev - 1):
                raise ValueError(f"level {lev} must have {2 ** (lev - 1)} angles")

    @property
    def n_qubits(self) -> int:
        return len(self.levels)

    def reconstruct(self) -> np.ndarray:
        """Coefficient vector produced by the tree (signs included)."""
        coeffs = np.array([1.0])
        for angles in self.levels:
            out = np.empty(2 * coeffs.size)
            for b, t in enumerate(angles):
                out[2 * b] = coeffs[b] * math.cos(t)
                out[2 * b + 1] = coeffs[b] * math.sin(t)
            coeffs = out
        return coeffs


def solve_angles(target: PrepTarget) -> AngleTree:
    """Binary-split angles: tan(theta) = sqrt(right weight / left weight).

    The cosine carries the bit-0 subtree.  Branches with no weight get angle
    0.  The leaf level uses atan2 of the raw (signed) coefficient pair.
    """
    c = target.coeffs
    if not np.any(np.abs(c) > 0):
        raise ValueError("all-zero target")
    n = target.n_qubits
    weights = c * c
    levels: list[tuple[float, ...]] = []
    for lev in range(1, n + 1):
        branches = []
        if lev < n:
            sub = weights.reshape(2 ** lev, -1).sum(axis=1)
            for b in range(2 ** (lev - 1)):
                w0, w1 = sub[2 * b], sub[2 * b + 1]
                branches.append(0.0 if w0 + w1 == 0.0 else math.atan2(math.sqrt(w1), math.sqrt(w0)))
        else:
            for b in range(2 ** (lev - 1)):
                c0, c1 = c[2 * b], c[2 * b + 1]
                branches.append(0.0 if c0 == 0.0 and c1 == 0.0 else math.atan2(c1, c0))
        levels.append(tuple(branches))
    return AngleTree(tuple(levels))


def emit_prep_circuit(angles: AngleTree) -> Circuit:
    """Branch-controlled rotation circuit realizing the angle tree.

    2^n - 1 rotations in total; the level-L branch-b rotation is controlled
    on qubits 0..L-2 matching the binary expansion of b (negative controls
    for 0 bits).
    """
    n = angles.n_qubits
    gates = []
    for lev in range(1, n + 1):
        for b, theta in enumerate(angles.levels[lev - 1]):
            controls = tuple(
                Control(q, bool((b >> (lev - 2 - q)) & 1)) for q in range(lev - 1)
            )
            gates.append(Gate("utheta", lev - 1, controls, theta))
    return Circuit(n, tuple(gates))


@dataclass(frozen=True)
class BasisLayout:
    """Placement of the required output amplitudes onto preparation bases.

    ``placements`` pairs each populated preparation basis with the amplitude
    it must carry; ``n_aux`` counts auxiliary qubits appended beyond the
    2(M-N) baseline (the enlarged register still ends disentangled at |0>).
    ``machine_complement`` selects which of the two equivalent machine-bit
    conventions the cloning stage targets; the default matches the worked
    2->4 construction, the other one the hand-made 1->2 network.
    """

    spec: CloneSpec
    n_aux: int
    placements: tuple[tuple[int, float], ...]
    machine_complement: bool = True

    def __post_init__(self) -> None:
        seen = set()
        for k, v in self.placements:
            if k in seen:
                raise ValueError(f"basis {k} placed twice")
            if not 0 <= k < 2 ** self.prep_qubits:
                raise ValueError(f"basis {k} out of range for {self.prep_qubits} prep qubits")
            if v <= 0:
                raise ValueError("placed amplitudes must be positive")
            seen.add(k)

    @property
    def prep_qubits(self) -> int:
        return self.spec.prep_qubits + self.n_aux

    def coefficients(self) -> np.ndarray:
        c = np.zeros(2 ** self.prep_qubits)
        for k, v in self.placements:
            c[k] = v
        return c

    @classmethod
    def packed(cls, spec: CloneSpec, allow_aux: bool = False,
               machine_complement: bool = True) -> "BasisLayout":
        """Amplitudes in descending order onto the smallest basis indices.

        Without auxiliary qubits this requires the counting condition to
        hold; with them, the register grows one qubit at a time until a
        strictly free basis remains (needed later as a permutation buffer).
        """
        values = _required_values(spec)
        n_aux = 0
        if allow_aux:
            while len(values) >= 2 ** (spec.prep_qubits + n_aux):
                n_aux += 1
            if spec.prep_qubits + n_aux > spec.total_qubits:
                raise ValueError(f"{spec}: auxiliary register would exceed {spec.total_qubits} qubits")
        else:
            check = feasibility(spec)
            if not check.feasible_without_aux:
                raise ValueError(
                    f"{spec} is infeasible without auxiliary qubits: "
                    f"{check.lhs} > {check.rhs} bases; re-run with the aux variant")
        placements = tuple((k, v) for k, v in enumerate(values))
        return cls(spec=spec, n_aux=n_aux, placements=placements,
                   machine_complement=machine_complement)

    @classmethod
    def custom(cls, spec: CloneSpec, placements, n_aux: int = 0,
               machine_complement: bool = True) -> "BasisLayout":
        """Explicit placement; the amplitude multiset must match the ideal one."""
        placements = tuple((int(k), float(v)) for k, v in placements)
        got = sorted(v for _, v in placements)
        want = sorted(_required_values(spec))
        if len(got) != len(want) or max(
            abs(g - w) for g, w in zip(got, want)
        ) > 1e-9:
            raise ValueError("placement amplitudes do not match the required multiset")
        return cls(spec=spec, n_aux=n_aux, placements=placements,
                   machine_complement=machine_complement)


def _required_values(spec: CloneSpec) -> list[float]:
    """Ideal output amplitudes for the all-zeros input, descending."""
    comp0 = weight_components(spec)[0]
    vals = sorted((float(v) for v in comp0 if v > AMP_EPS), reverse=True)
    assert len(vals) == basis_count(spec)
    return vals


def prep_for_spec(spec: CloneSpec, layout: BasisLayout | None = None,
                  allow_aux: bool = False) -> PrepTarget:
    """Preparation target carrying every amplitude of the ideal output."""
    if layout is None:
        layout = BasisLayout.packed(spec, allow_aux=allow_aux)
    return PrepTarget(layout.coefficients())
