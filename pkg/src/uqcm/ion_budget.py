"""Spontaneous-emission budget of a trapped-ion cloning run.

Three-level model: the qubit lives on a metastable 0-1 transition driven at
Rabi frequency Omega_1; the drive laser also couples level 0 to a fast-
decaying auxiliary level 2 (rate Gamma_2, detuning Delta_2).  Emission from
level 1 falls with laser intensity while emission through level 2 grows with
it, so the total has an intensity-independent minimum.  That minimum, not
any laser parameter, decides which (N, M) cloners are feasible.

All quantities are SI: angular frequencies and rates in 1/s, times in s,
probabilities dimensionless.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, replace
from importlib import resources

from .cloner_math import CloneSpec

SPECIES_ENV_VAR = "UQCM_SPECIES_DB"
DEFAULT_FEASIBLE_THRESHOLD = 0.1


@dataclass(frozen=True)
class IonSpecies:
    """Atomic constants of one candidate ion."""

    name: str
    omega1: float             # 0-1 transition angular frequency [1/s]
    omega2: float             # 0-2 transition angular frequency [1/s]
    gamma2: float             # decay rate of level 2 [1/s]
    level0: str = ""
    level1: str = ""
    level2: str = ""

    def __post_init__(self) -> None:
        if min(self.omega1, self.omega2, self.gamma2) <= 0:
            raise ValueError(f"{self.name}: rates and frequencies must be positive")


@dataclass(frozen=True)
class TrapParams:
    """Trap and drive parameters.

    ``gamma1`` (decay of the qubit's upper level) is needed only for
    intensity-resolved emission curves; the optimal-intensity minimum is
    independent of it.  ``epsilon`` is the proportionality factor between
    the asymptotic gate-count formula and actual circuit sizes.
    """

    eta: float = 0.01          # Lamb-Dicke parameter
    epsilon: float = 100.0     # gate-count proportionality factor
    delta2: float = 1e13       # detuning from level 2 [1/s]
    gamma1: float | None = None
    omega_rabi_x: float | None = None   # operating point x = Omega_1 / sqrt(Gamma_1)

    def __post_init__(self) -> None:
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        if self.epsilon <= 0 or self.delta2 <= 0:
            raise ValueError("epsilon and delta2 must be positive")


def load_species(path: str | os.PathLike | None = None) -> dict[str, IonSpecies]:
    """Species database; packaged data unless a path or env override is given."""
    if path is None:
        path = os.environ.get(SPECIES_ENV_VAR)
    if path is None:
        text = resources.files("uqcm.data").joinpath("ion_species.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    if data.get("schema") != "uqcm-species/1":
        raise ValueError(f"unsupported species schema {data.get('schema')!r}")
    out = {}
    for row in data["species"]:
        out[row["name"]] = IonSpecies(
            name=row["name"],
            omega1=row["omega1_per_s"],
            omega2=row["omega2_per_s"],
            gamma2=row["gamma2_per_s"],
            level0=row.get("level0", ""),
            level1=row.get("level1", ""),
            level2=row.get("level2", ""),
        )
    return out


def elementary_gate_time(spec: CloneSpec, params: TrapParams, omega1_rabi: float) -> float:
    """Duration of one two-qubit gate: 4 pi sqrt(2M-N) / (eta Omega_1).

    The sqrt factor is the Rabi-frequency dilution over the 2M-N ions
    sharing the vibrational bus.
    """
    if omega1_rabi <= 0:
        raise ValueError("omega1_rabi must be positive")
    return 4 * math.pi * math.sqrt(spec.total_qubits) / (params.eta * omega1_rabi)


def formula_gate_count(spec: CloneSpec, epsilon: float) -> float:
    """Asymptotic CNOT count epsilon 2^(2M+2) (M-N)^2 (2^-2N + 1/sqrt(pi M))."""
    n, m = spec.n_in, spec.m_out
    return (epsilon * 2 ** (2 * m + 2) * (m - n) ** 2
            * (2.0 ** (-2 * n) + 1.0 / math.sqrt(math.pi * m)))


def cloning_time(spec: CloneSpec, params: TrapParams, omega1_rabi: float,
                 gate_count_override: int | float | None = None) -> float:
    """Total sequential run time: elementary gate time times the gate count."""
    count = formula_gate_count(spec, params.epsilon) if gate_count_override is None \
        else gate_count_override
    if count < 0:
        raise ValueError("gate count must be nonnegative")
    return elementary_gate_time(spec, params, omega1_rabi) * count


@dataclass(frozen=True)
class EmissionProbabilities:
    p1: float       # emission from the qubit's upper level during the run
    p2: float       # emission via the off-resonant auxiliary level
    p_total: float


def emission_probability(spec: CloneSpec, species: IonSpecies, params: TrapParams,
                         x: float | None = None, omega1_rabi: float | None = None,
                         gate_count_override: int | float | None = None) -> EmissionProbabilities:
    """Spontaneous-emission probabilities at operating point x = Omega_1/sqrt(Gamma_1).

    p1 = (1/2) 2 Gamma_1 (2M-N) T  (half the qubits sit in the upper level),
    p2 = (Omega_2^2 / 8 Delta_2^2) 2 Gamma_2 T, with Omega_2 eliminated via
    Omega_1^2/Gamma_1 = (omega_2/omega_1)^3 Omega_2^2/Gamma_2.
    """
    if params.gamma1 is None:
        raise ValueError("params.gamma1 is required for intensity-resolved probabilities")
    gamma1 = params.gamma1
    if x is None:
        x = params.omega_rabi_x
    if x is None and omega1_rabi is not None:
        x = omega1_rabi / math.sqrt(gamma1)
    if x is None or x <= 0:
        raise ValueError("need a positive operating point x or omega1_rabi")
    omega1_rabi = x * math.sqrt(gamma1)
    t_run = cloning_time(spec, params, omega1_rabi, gate_count_override)
    p1 = gamma1 * spec.total_qubits * t_run
    omega2_sq = omega1_rabi ** 2 * (species.omega1 / species.omega2) ** 3 \
        * species.gamma2 / gamma1
    p2 = omega2_sq / (8 * params.delta2 ** 2) * 2 * species.gamma2 * t_run
    return EmissionProbabilities(p1=p1, p2=p2, p_total=p1 + p2)


def min_emission_probability(spec: CloneSpec, species: IonSpecies, params: TrapParams,
                             gate_count_override: int | float | None = None) -> float:
    """Intensity-optimal total emission probability (independent of Gamma_1).

    With the asymptotic gate count:
      (pi eps / eta) (w1/w2)^(3/2) (Gamma_2/Delta_2)
        * 2^(2M+4) (2M-N) (M-N)^2 (2^-2N + 1/sqrt(pi M));
    with an explicit count G the circuit factor collapses to
      (4 pi / eta) G (2M-N) (w1/w2)^(3/2) (Gamma_2/Delta_2).
    """
    count = formula_gate_count(spec, params.epsilon) if gate_count_override is None \
        else gate_count_override
    ratio = (species.omega1 / species.omega2) ** 1.5
    return (4 * math.pi / params.eta) * count * spec.total_qubits \
        * ratio * species.gamma2 / params.delta2


def feasibility_threshold(species: IonSpecies, params: TrapParams) -> float:
    """Species-side bound that the circuit factor must stay below.

    (eta / (2^4 pi epsilon)) (omega_2/omega_1)^(3/2) (Delta_2/Gamma_2).
    """
    return (params.eta / (2 ** 4 * math.pi * params.epsilon)
            * (species.omega2 / species.omega1) ** 1.5
            * params.delta2 / species.gamma2)


def lhs_mmax(spec: CloneSpec) -> float:
    """Circuit-side factor 2^(2M) (2M-N) (M-N)^2 (2^-2N + 1/sqrt(pi M))."""
    n, m = spec.n_in, spec.m_out
    return (2.0 ** (2 * m) * spec.total_qubits * (m - n) ** 2
            * (2.0 ** (-2 * n) + 1.0 / math.sqrt(math.pi * m)))


@dataclass(frozen=True)
class ScanRow:
    species: str
    n_in: int
    m_out: int
    eta: float
    p_min_formula: float
    feasible_formula: bool
    gates_measured: int | None = None
    p_min_measured: float | None = None
    feasible_measured: bool | None = None
    aux_cost_model: bool = False

    def to_dict(self) -> dict:
        return {
            "species": self.species, "n_in": self.n_in, "m_out": self.m_out,
            "eta": self.eta, "p_min_formula": self.p_min_formula,
            "feasible_formula": self.feasible_formula,
            "gates_measured": self.gates_measured,
            "p_min_measured": self.p_min_measured,
            "feasible_measured": self.feasible_measured,
            "aux_cost_model": self.aux_cost_model,
        }


def feasibility_scan(species_list, params: TrapParams, specs, aux: bool = False,
                     etas=(None,), measured_counts=None,
                     threshold: float = DEFAULT_FEASIBLE_THRESHOLD) -> list[ScanRow]:
    """Minimum emission probability per (species, spec, eta) cell.

    ``measured_counts`` optionally maps (N, M) to a measured circuit size in
    CNOT-equivalents; cells with a measured count also report the measured
    variant.  ``aux`` records which multi-control cost model (quadratic or,
    with a workspace qubit, linear) produced those counts.  Feasible means
    p_min below ``threshold``.
    """
    measured_counts = measured_counts or {}
    rows: list[ScanRow] = []
    for eta in etas:
        cell_params = params if eta is None else replace(params, eta=eta)
        for species in species_list:
            for spec in specs:
                p_formula = min_emission_probability(spec, species, cell_params)
                row = ScanRow(
                    species=species.name, n_in=spec.n_in, m_out=spec.m_out,
                    eta=cell_params.eta, p_min_formula=p_formula,
                    feasible_formula=p_formula < threshold)
                key = (spec.n_in, spec.m_out)
                if key in measured_counts:
                    g = measured_counts[key]
                    p_meas = min_emission_probability(spec, species, cell_params,
                                                      gate_count_override=g)
                    row = replace(row, gates_measured=g, p_min_measured=p_meas,
                                  feasible_measured=p_meas < threshold,
                                  aux_cost_model=aux)
                rows.append(row)
    return rows


def render_scan_table(rows: list[ScanRow]) -> str:
    """Aligned-column text table of a feasibility scan."""
    header = ["ion", "N", "M", "eta", "p_min(formula)", "ok",
              "gates", "p_min(measured)", "ok"]
    body = []
    for r in rows:
        body.append([
            r.species, str(r.n_in), str(r.m_out), f"{r.eta:g}",
            f"{r.p_min_formula:.6g}", "yes" if r.feasible_formula else "no",
            "-" if r.gates_measured is None else str(r.gates_measured),
            "-" if r.p_min_measured is None else f"{r.p_min_measured:.6g}",
            "-" if r.feasible_measured is None else ("yes" if r.feasible_measured else "no"),
        ])
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for row in body:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines)


def scan_to_json(rows: list[ScanRow]) -> str:
    return json.dumps({"schema": "uqcm-scan/1", "rows": [r.to_dict() for r in rows]},
                      indent=2, sort_keys=True)
