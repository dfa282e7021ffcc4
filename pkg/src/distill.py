"""
One-way distillation: Alice encodes half of a K-dimensional maximally
entangled state with a code, teleports the n carrier systems over the
noisy shared pairs, and Bob decodes. The final fidelity with the
maximally entangled state on R (x) B is compared against the code's
entanglement fidelity on the teleportation channel.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Union

import numpy as np

from src.channels import (
    bell_diagonal_state,
    receiver_marginal,
    teleport_branches,
    teleport_channel,
    teleport_full,
    teleport_sample,
)
from src.codes import (
    SymplecticCode,
    choose_reps,
    code_entanglement_fidelity,
    corollary1_bounds,
    decoder,
)
from src.constants import DISTILL_DENSE_LIMIT, FIDELITY_GAP_TOL, PURE_STATE_LIMIT
from src.error_handler import DimensionError, InvalidInputError, ResourceGuardError
from src.noise import BoundReport, PauliDistribution, distribution_bound
from src.quantum_state import DensityMatrix, apply
from src.zd_symplectic import ZdVec

logger = logging.getLogger("teledistill.distill")

DENSE = "dense"
PURE = "pure"


@dataclass(frozen=True, eq=False)
class DistillationRun:
    """Final R (x) B state of one protocol run and its fidelity"""
    sigma_AB: DensityMatrix = field(repr=False)
    code: SymplecticCode = field(repr=False)
    result: DensityMatrix = field(repr=False)
    fidelity: float
    mode: str


def _ensure_reps(sigma_AB: DensityMatrix, code: SymplecticCode) -> SymplecticCode:
    if code.reps:
        return code
    return code.with_reps(choose_reps(code, teleport_channel(sigma_AB, code.d).probs))


def entangled_target(code: SymplecticCode) -> np.ndarray:
    """(1/sqrt K) sum_j |j>_R (x) |c_j>, reference first, unit norm"""
    return (code.code_basis().T / math.sqrt(code.K)).reshape(-1)


def distill(sigma_AB: DensityMatrix, code: SymplecticCode) -> DistillationRun:
    """Run the protocol on sigma_AB (d^{2n}) with the given code.

    Uses the dense teleportation process while K d^{3n} fits
    DISTILL_DENSE_LIMIT and pure-state branch accumulation beyond it.
    """
    d, n, K = code.d, code.n, code.K
    dim = d ** n
    if sigma_AB.dim != dim * dim:
        raise DimensionError(f"shared state has dim {sigma_AB.dim}, code needs {dim * dim}")
    size = K * dim ** 3
    if size > PURE_STATE_LIMIT:
        raise ResourceGuardError("distillation run", size, PURE_STATE_LIMIT)
    code = _ensure_reps(sigma_AB, code)
    phi = entangled_target(code)
    if size <= DISTILL_DENSE_LIMIT:
        mode = DENSE
        full = teleport_full(DensityMatrix(np.outer(phi, phi.conj()), validate=False), sigma_AB, d, ref_dim=K)
        received = receiver_marginal(full, d, n, ref_dim=K)
    else:
        mode = PURE
        acc = np.zeros((K * dim, K * dim), dtype=complex)
        for weight, _, u in teleport_branches(phi, sigma_AB, d, ref_dim=K):
            acc += weight * np.outer(u, u.conj())
        received = DensityMatrix(acc, validate=False)
    result = apply(decoder(code).extend(K), received)
    fidelity = float(np.real(np.vdot(phi, result.matrix @ phi)))
    fidelity = min(max(fidelity, 0.0), 1.0)
    logger.debug("distill d=%d n=%d K=%d mode=%s fidelity=%.12f", d, n, K, mode, fidelity)
    return DistillationRun(sigma_AB, code, result, fidelity, mode)


@dataclass
class Theorem1Report:
    """Both sides of the fidelity identity for one (sigma, code) pair"""
    protocol_fidelity: float
    code_fidelity: float
    p_j: float
    mode: str

    @property
    def gap(self) -> float:
        return abs(self.protocol_fidelity - self.code_fidelity)

    @property
    def passed(self) -> bool:
        return self.gap < FIDELITY_GAP_TOL


def sample_runs(sigma_AB: DensityMatrix, code: SymplecticCode, rng: np.random.Generator,
                runs: int) -> np.ndarray:
    """Fidelities of `runs` single protocol runs, each with one sampled outcome.

    Their mean estimates the outcome-summed fidelity returned by distill().
    """
    if runs < 1:
        raise InvalidInputError(f"runs={runs} must be >= 1", field="runs")
    code = _ensure_reps(sigma_AB, code)
    phi = entangled_target(code)
    rho = DensityMatrix(np.outer(phi, phi.conj()), validate=False)
    recover = decoder(code).extend(code.K)
    out = np.empty(runs)
    for i in range(runs):
        _, received = teleport_sample(rho, sigma_AB, code.d, rng, ref_dim=code.K)
        out[i] = np.real(np.vdot(phi, apply(recover, received).matrix @ phi))
    return np.clip(out, 0.0, 1.0)


def theorem1_check(sigma_AB: DensityMatrix, code: SymplecticCode) -> Theorem1Report:
    """Protocol simulation against F_e(Pi/K, decoder o teleport_channel(sigma))"""
    code = _ensure_reps(sigma_AB, code)
    run = distill(sigma_AB, code)
    way1, way2 = code_entanglement_fidelity(code, teleport_channel(sigma_AB, code.d).probs)
    return Theorem1Report(run.fidelity, way1, way2, run.mode)


@dataclass
class RateRow:
    """One code's entry in a rate report"""
    name: str
    n: int
    K: int
    rate: float
    p_j: float
    fidelity: float
    infidelity_bound: float
    infidelity_bound_symplectic: float


@dataclass
class RateReport:
    rows: List[RateRow]
    bound: BoundReport


def rate_report(dist: PauliDistribution,
                codes: Union[Sequence[SymplecticCode], Dict[str, SymplecticCode]]) -> RateReport:
    """Rate, P_n(J), fidelity and bounds per code plus the asymptotic bound of dist"""
    named = codes.items() if isinstance(codes, dict) else ((f"code{i}", c) for i, c in enumerate(codes))
    rows = []
    for name, code in named:
        if (code.d, code.n) != (dist.d, dist.n):
            raise DimensionError(f"{name}: code on (d={code.d}, n={code.n}) vs noise (d={dist.d}, n={dist.n})")
        if not code.reps:
            code = code.with_reps(choose_reps(code, dist))
        way1, p_j = code_entanglement_fidelity(code, dist)
        loose, tight = corollary1_bounds(p_j)
        rows.append(RateRow(name, code.n, code.K, math.log(code.K, code.d) / code.n, p_j, way1, loose, tight))
    return RateReport(rows, distribution_bound(dist))


# =============================================================================
# THEOREM 1 BATTERY
# =============================================================================

PERFECT = "perfect"
BELL_DIAGONAL = "bell_diagonal"
GENERIC = "generic"
RESOURCE_KINDS = (PERFECT, BELL_DIAGONAL, GENERIC)


@dataclass(frozen=True)
class Scenario:
    """One battery entry: a shared state recipe and a code"""
    name: str
    kind: str
    code_name: str
    d: int
    n: int
    seed: int


def make_resource(kind: str, d: int, n: int, rng: np.random.Generator) -> DensityMatrix:
    """Shared state of the requested kind on d^{2n} dims"""
    dim = d ** (2 * n)
    if kind == PERFECT:
        return bell_diagonal_state(PauliDistribution.point_mass(ZdVec.zero(d, n)))
    if kind == BELL_DIAGONAL:
        probs = rng.dirichlet(np.ones(dim))
        return bell_diagonal_state(PauliDistribution.explicit(d, n, probs / probs.sum()))
    if kind == GENERIC:
        return DensityMatrix.random(dim, rng)
    raise InvalidInputError(f"unknown resource kind {kind!r}", field="kind")


def run_scenario(scenario: Scenario, codes: Dict[str, SymplecticCode]) -> Theorem1Report:
    rng = np.random.default_rng(scenario.seed)
    sigma = make_resource(scenario.kind, scenario.d, scenario.n, rng)
    return theorem1_check(sigma, codes[scenario.code_name])


def battery(codes: Dict[str, SymplecticCode], seed: int, samples: int = 1) -> List[Scenario]:
    """Scenario list {perfect, Bell-diagonal, generic} x codes.

    Random kinds get `samples` entries each with seeds derived from `seed`;
    the perfect resource is deterministic and listed once per code.
    """
    scenarios = []
    seq = np.random.SeedSequence(seed)
    for code_name, code in codes.items():
        for kind in RESOURCE_KINDS:
            count = 1 if kind == PERFECT else samples
            for i in range(count):
                child = int(seq.spawn(1)[0].generate_state(1)[0])
                scenarios.append(Scenario(f"{kind}/{code_name}/{i}", kind, code_name, code.d, code.n, child))
    return scenarios

