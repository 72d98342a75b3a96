"""Surface-code overhead model: distance selection, tile layout, T-state
factories, physical qubit totals and runtime.

The algorithm is modeled as T-consumption limited: one logical cycle per
T state, so the cycle count equals the T count. Constants here (error
prefactor, tile layout, factory footprint and period) were calibrated
once against published fragment estimates for the superconducting
"qubit_gate_ns_e4" parameter set and are documented design choices of
this artifact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DistanceSaturationError, FactoryBudgetError,
                     ValidationError)
from .logicalcost import EstimationConfig

MAX_DISTANCE = 99

# 15-to-1 distillation constants: acceptance-counting output error per
# round, residual Clifford error locations per output T state (used to
# size stage distances), factory footprint in tiles, and output period in
# logical cycles of the final stage.
DISTILL_REDUCTION = 35.0
FACTORY_CLIFFORD_LOCATIONS = 7e4
FACTORY_TILES = 36
FACTORY_CYCLES_PER_OUTPUT = Fraction(72, 5)  # 14.4
MAX_DISTILL_ROUNDS = 3


@dataclass(frozen=True)
class QubitParams:
    name: str = "qubit_gate_ns_e4"
    t_gate: float = 50e-9
    t_meas: float = 100e-9
    p_gate: float = 1e-4
    p_meas: float = 1e-4

    def __post_init__(self):
        if not (self.t_gate > 0 and self.t_meas > 0):
            raise ValidationError("gate and measurement times must be positive")
        for p in (self.p_gate, self.p_meas):
            if not 0 <= p < 1:
                raise ValidationError("error probabilities must lie in [0, 1)")

    @property
    def syndrome_round_time(self) -> float:
        """Seconds per syndrome extraction round: 4 gates + 2 measurements."""
        return 4.0 * self.t_gate + 2.0 * self.t_meas


PRESETS = {"qubit_gate_ns_e4": QubitParams()}


def get_preset(name: str) -> QubitParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValidationError(f"unknown qubit preset {name!r}") from None


@dataclass(frozen=True)
class CodeParams:
    a_coeff: float = 0.03
    p_threshold: float = 0.01
    d_min: int = 3

    def __post_init__(self):
        if not self.a_coeff > 0:
            raise ValidationError("a_coeff must be positive")
        if not 0 < self.p_threshold < 1:
            raise ValidationError("p_threshold must lie in (0, 1)")
        if self.d_min < 1 or self.d_min % 2 == 0:
            raise ValidationError("d_min must be a positive odd integer")

    def cycle_time(self, qp: QubitParams, d: int) -> float:
        """Logical cycle: d syndrome rounds."""
        return qp.syndrome_round_time * d


def logical_error_rate(d: int, p: float, code: CodeParams | None = None) -> float:
    """Per-tile per-cycle logical failure: a * (p / p_th)^((d+1)/2)."""
    code = code or CodeParams()
    if d < code.d_min or d % 2 == 0:
        raise ValidationError(f"distance must be odd and >= {code.d_min}")
    if not 0 <= p < code.p_threshold:
        raise ValidationError(
            f"physical error rate {p} at or above threshold {code.p_threshold}")
    return code.a_coeff * (p / code.p_threshold) ** ((d + 1) / 2)


def layout_tiles(n_alg_qubits: int) -> int:
    """Tiles for a 2D lattice-surgery layout: algorithmic plus routing.

    2n + ceil(sqrt(8n)) + 1, an n-qubit core with an ancilla/routing
    corridor that grows with the perimeter.
    """
    if n_alg_qubits < 1:
        raise ValidationError("need at least one algorithmic qubit")
    return 2 * n_alg_qubits + _ceil_sqrt(8 * n_alg_qubits) + 1


def _ceil_sqrt(value: int) -> int:
    root = math.isqrt(value)
    return root if root * root == value else root + 1


def select_distance(n_alg_qubits: int, cycles: int, qp: QubitParams,
                    code: CodeParams | None = None,
                    eps_logical: float = 0.01 / 3) -> int:
    """Smallest odd distance keeping total logical failure within budget.

    The budget check is tiles * cycles * logical_error_rate(d), i.e. every
    tile is assumed active on every cycle.
    """
    code = code or CodeParams()
    if cycles < 1:
        raise ValidationError("cycles must be >= 1")
    if not 0 < eps_logical < 1:
        raise ValidationError("eps_logical must lie in (0, 1)")
    tiles = layout_tiles(n_alg_qubits)
    d = code.d_min
    while d <= MAX_DISTANCE:
        if tiles * cycles * logical_error_rate(d, qp.p_gate, code) <= eps_logical:
            return d
        d += 2
    raise DistanceSaturationError(
        f"no distance <= {MAX_DISTANCE} meets logical budget {eps_logical:g}")


@dataclass(frozen=True)
class FactoryDesign:
    """A pipelined multi-round 15-to-1 distillation unit.

    ``duration`` is the steady-state period between output T states;
    earlier rounds run concurrently inside the same tile block, so the
    footprint and period follow the final stage.
    """

    rounds: int
    stage_distances: tuple[int, ...]
    qubits_per_factory: int
    duration: float               # seconds per output T state
    output_error: float           # acceptance-counting error per T state
    duration_fs: int              # exact femtoseconds, for ratio arithmetic

    def __post_init__(self):
        if self.rounds < 1 or len(self.stage_distances) != self.rounds:
            raise ValidationError("stage count must match rounds")
        if self.qubits_per_factory < 1 or self.duration <= 0:
            raise ValidationError("factory qubits and duration must be positive")


def design_factories(qp: QubitParams, per_t_error_budget: float,
                     code: CodeParams | None = None) -> FactoryDesign:
    """Search 15-to-1 rounds for the smallest design meeting the budget.

    Round k takes the previous round's output as input; acceptance
    counting gives output 35 * p_in^3 per round. Stage distances are sized
    so residual Clifford error stays below half of each stage's input
    error, which fixes the footprint independently of how far below
    35 p^3 chains the budget sits.
    """
    code = code or CodeParams()
    if not 0 < per_t_error_budget < 1:
        raise ValidationError("per-T error budget must lie in (0, 1)")

    chain = [qp.p_gate]
    for _ in range(MAX_DISTILL_ROUNDS):
        chain.append(DISTILL_REDUCTION * chain[-1] ** 3)
    rounds = next((k for k in range(1, MAX_DISTILL_ROUNDS + 1)
                   if chain[k] <= per_t_error_budget), None)
    if rounds is None:
        raise FactoryBudgetError(
            f"budget {per_t_error_budget:g} unreachable in "
            f"{MAX_DISTILL_ROUNDS} rounds of 15-to-1 distillation")

    distances = tuple(_stage_distance(chain[k], qp, code) for k in range(rounds))
    d_last = distances[-1]
    qubits = FACTORY_TILES * 2 * d_last * d_last
    round_fs = round(qp.syndrome_round_time * 1e15)
    duration_fs = int(FACTORY_CYCLES_PER_OUTPUT * d_last * round_fs)
    return FactoryDesign(rounds=rounds, stage_distances=distances,
                         qubits_per_factory=qubits,
                         duration=duration_fs * 1e-15,
                         output_error=chain[rounds],
                         duration_fs=duration_fs)


def _stage_distance(input_error: float, qp: QubitParams, code: CodeParams) -> int:
    d = code.d_min
    while d <= MAX_DISTANCE:
        residual = FACTORY_CLIFFORD_LOCATIONS * logical_error_rate(d, qp.p_gate, code)
        if residual <= input_error / 2.0:
            return d
        d += 2
    raise FactoryBudgetError("no stage distance suppresses Clifford error enough")


def count_factories(t_count: int, cycles: int, d: int, qp: QubitParams,
                    fd: FactoryDesign) -> int:
    """Parallel factories sustaining one T state per consuming cycle:
    ceil(t_count * duration / (cycles * t_cycle(d)))."""
    if t_count < 1 or cycles < 1 or d < 1:
        raise ValidationError("t_count, cycles and d must be positive")
    round_fs = round(qp.syndrome_round_time * 1e15)
    cycle_fs = d * round_fs
    return -(-(t_count * fd.duration_fs) // (cycles * cycle_fs))


@dataclass(frozen=True)
class PhysicalEstimate:
    distance: int
    tiles: int
    n_factories: int
    factory_qubits_total: int
    n_physical_qubits: int
    runtime_s: float
    cycles: int
    factory: FactoryDesign | None = None
    eps_logical: float = 0.0
    logical_failure: float = 0.0

    def to_json_dict(self) -> dict:
        data = {
            "distance": self.distance,
            "tiles": self.tiles,
            "n_factories": self.n_factories,
            "factory_qubits_total": self.factory_qubits_total,
            "n_physical_qubits": self.n_physical_qubits,
            "runtime_s": self.runtime_s,
            "cycles": self.cycles,
        }
        if self.factory is not None:
            data["factory"] = {
                "rounds": self.factory.rounds,
                "stage_distances": list(self.factory.stage_distances),
                "qubits_per_factory": self.factory.qubits_per_factory,
                "duration_s": self.factory.duration,
                "output_error": self.factory.output_error,
            }
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1)


def estimate_physical(n_alg_qubits: int, t_count: int,
                      qp: QubitParams | None = None,
                      code: CodeParams | None = None,
                      config: EstimationConfig | None = None
                      ) -> PhysicalEstimate:
    """Map (logical qubits, T count) to physical resources.

    Logical depth is taken equal to the T count (one T consumed per
    lattice-surgery cycle); the error budget splits across logical
    storage, distillation and rotation synthesis per the config.
    """
    qp = qp or get_preset("qubit_gate_ns_e4")
    code = code or CodeParams()
    config = config or EstimationConfig()
    if n_alg_qubits < 1:
        raise ValidationError("n_alg_qubits must be positive")
    if t_count < 0:
        raise ValidationError("t_count must be non-negative")

    tiles = layout_tiles(n_alg_qubits)
    if t_count == 0:
        return PhysicalEstimate(
            distance=code.d_min, tiles=tiles, n_factories=0,
            factory_qubits_total=0,
            n_physical_qubits=tiles * 2 * code.d_min**2,
            runtime_s=0.0, cycles=0, factory=None,
            eps_logical=config.budget_split.logical, logical_failure=0.0)

    cycles = t_count
    d = select_distance(n_alg_qubits, cycles, qp, code,
                        eps_logical=config.budget_split.logical)
    fd = design_factories(qp, config.budget_split.t_states / t_count, code)
    n_factories = count_factories(t_count, cycles, d, qp, fd)
    factory_total = n_factories * fd.qubits_per_factory
    n_physical = tiles * 2 * d * d + factory_total
    runtime = cycles * code.cycle_time(qp, d)
    failure = tiles * cycles * logical_error_rate(d, qp.p_gate, code)
    return PhysicalEstimate(distance=d, tiles=tiles, n_factories=n_factories,
                            factory_qubits_total=factory_total,
                            n_physical_qubits=n_physical, runtime_s=runtime,
                            cycles=cycles, factory=fd,
                            eps_logical=config.budget_split.logical,
                            logical_failure=failure)


def budget_audit(est: PhysicalEstimate, t_count: int,
                 config: EstimationConfig | None = None) -> dict:
    """Post-hoc soundness check of the error accounting."""
    config = config or EstimationConfig()
    audit = {
        "logical_failure": est.logical_failure,
        "logical_share": config.budget_split.logical,
        "logical_ok": est.logical_failure <= config.budget_split.logical,
    }
    if est.factory is not None and t_count > 0:
        per_t_budget = config.budget_split.t_states / t_count
        audit.update({
            "t_state_error": est.factory.output_error,
            "per_t_budget": per_t_budget,
            "t_states_ok": est.factory.output_error <= per_t_budget,
        })
    return audit
