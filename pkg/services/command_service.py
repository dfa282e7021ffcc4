"""
Command Service
One function per CLI command. Each returns a CommandResult holding report
rows, a pass/fail verdict and the lines printed to stdout; all numbers
come from the library modules.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from services.battery_service import BatteryService
from services.report_service import ReportRow
from src.channels import (
    PauliChannel,
    apply_pauli,
    bell_diagonal_state,
    bell_projection,
    channel_distance,
    choi_state,
    receiver_marginal,
    teleport_channel,
    teleport_full,
    twirl,
)
from src.codes import (
    SymplecticCode,
    choose_reps,
    code_entanglement_fidelity,
    corollary1_bounds,
    correctable_set,
    kl_check,
    load_code,
    trivial_code,
)
from src.constants import (
    CHOI_TOL,
    EXPONENT_TOL,
    FIDELITY_GAP_TOL,
    KL_TOL,
    LEMMA1_TOL,
    SAMPLED_RUNS,
    TWIRL_TOL,
)
from src.distill import battery, run_scenario, sample_runs, theorem1_check
from src.error_handler import InvalidInputError, ToleranceFailure
from src.noise import (
    EXPLICIT,
    IID,
    PauliDistribution,
    distribution_bound,
    exponent_curve,
    hashing_bound,
    load_noise,
)
from src.quantum_state import DensityMatrix, operator_gap
from src.shared_init import Settings
from src.verbose_logger import get_logger
from src.weyl import all_labels


@dataclass
class CommandContext:
    """Resolved CLI inputs for one command"""
    settings: Settings
    seed: int
    d: Optional[int] = None
    n: Optional[int] = None
    noise: Optional[str] = None
    code: Optional[str] = None


@dataclass
class CommandResult:
    command: str
    rows: List[ReportRow] = field(default_factory=list)
    passed: bool = True
    lines: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    failure: Optional[ToleranceFailure] = None

    def fail(self, check: str, gap: float, tol: float) -> None:
        """Mark the verdict failed, keeping the largest violation"""
        self.passed = False
        if self.failure is None or not gap <= self.failure.gap:
            self.failure = ToleranceFailure(check, gap, tol)


def _check(result: CommandResult, row: ReportRow, tol: float) -> None:
    """Record a gap row and fold it into the verdict"""
    gap = row.gap if row.gap is not None else float("nan")
    passed = row.gap is not None and row.gap < tol
    get_logger().log_check(row.scenario, gap, tol, passed)
    result.rows.append(row)
    if not passed:
        result.fail(row.scenario, gap, tol)


def _require(value, name: str):
    if value is None:
        raise InvalidInputError("required for this command", field=name)
    return value


def _random_pauli(d: int, n: int, rng: np.random.Generator) -> PauliDistribution:
    probs = rng.dirichlet(np.ones(d ** (2 * n)))
    return PauliDistribution.explicit(d, n, probs / probs.sum())


def _shared_states(d: int, n: int, count: int, rng: np.random.Generator) -> List[Tuple[str, DensityMatrix]]:
    """Pure Bell states, Bell mixtures and generic random states"""
    states = []
    if n == 1:
        for x in all_labels(d, n):
            states.append((f"bell{x}", bell_diagonal_state(PauliDistribution.point_mass(x))))
    for i in range(count):
        states.append((f"mixture{i}", bell_diagonal_state(_random_pauli(d, n, rng))))
    for i in range(count):
        states.append((f"random{i}", DensityMatrix.random(d ** (2 * n), rng)))
    return states


def _dimensions(ctx: CommandContext) -> List[Tuple[int, int, int]]:
    """(d, n, random count) battery grid, narrowed by --d / --n"""
    s = ctx.settings
    grid = [(2, 1, s.random_states), (3, 1, s.random_states), (2, 2, s.random_states_n2)]
    if ctx.d is not None or ctx.n is not None:
        grid = [g for g in grid if (ctx.d is None or g[0] == ctx.d) and (ctx.n is None or g[1] == ctx.n)]
        if not grid:
            count = s.random_states if (ctx.n or 1) == 1 else s.random_states_n2
            grid = [(ctx.d or 2, ctx.n or 1, count)]
    return grid


def verify_lemma1(ctx: CommandContext) -> CommandResult:
    """Receiver marginal of the full process against the closed-form channel"""
    result = CommandResult("verify-lemma1")
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for d, n, count in _dimensions(ctx):
        for name, sigma in _shared_states(d, n, count, rng):
            rho = DensityMatrix.random(d ** n, rng)
            full = receiver_marginal(teleport_full(rho, sigma, d), d, n)
            closed = apply_pauli(teleport_channel(sigma, d), rho)
            gap = operator_gap(full.matrix, closed.matrix)
            worst = max(worst, gap)
            _check(result, ReportRow(f"lemma1/{name}", d, n, gap=gap), LEMMA1_TOL)
    verdict = "PASS" if result.passed else "FAIL"
    result.lines.append(f"{verdict} verify-lemma1: {len(result.rows)} states, max gap {worst:.3e} (tol {LEMMA1_TOL:.0e})")
    return result


def verify_twirl(ctx: CommandContext) -> CommandResult:
    """Explicit twirl average against the Bell-diagonal projection, plus idempotence"""
    result = CommandResult("twirl")
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for d, n, count in _dimensions(ctx):
        for i in range(count):
            sigma = DensityMatrix.random(d ** (2 * n), rng)
            once = twirl(sigma, d)
            gap = operator_gap(once.matrix, bell_projection(sigma, d).matrix)
            again = operator_gap(twirl(once, d).matrix, once.matrix)
            worst = max(worst, gap, again)
            _check(result, ReportRow(f"twirl/random{i}", d, n, gap=gap), TWIRL_TOL)
            _check(result, ReportRow(f"twirl-idempotent/random{i}", d, n, gap=again), TWIRL_TOL)
    verdict = "PASS" if result.passed else "FAIL"
    result.lines.append(f"{verdict} twirl: max gap {worst:.3e} (tol {TWIRL_TOL:.0e})")
    return result


def choi_roundtrip(ctx: CommandContext) -> CommandResult:
    """teleport_channel(choi_state(ch)) = ch and choi_state(teleport_channel(sigma)) = twirl(sigma)"""
    result = CommandResult("choi-roundtrip")
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for d, n, count in _dimensions(ctx):
        for i in range(count):
            ch = PauliChannel(d, n, _random_pauli(d, n, rng))
            back = teleport_channel(choi_state(ch, d), d)
            gap = channel_distance(back, ch, d)
            worst = max(worst, gap)
            _check(result, ReportRow(f"choi-roundtrip/pauli{i}", d, n, gap=gap), CHOI_TOL)
            sigma = DensityMatrix.random(d ** (2 * n), rng)
            gap = operator_gap(choi_state(teleport_channel(sigma, d), d).matrix, twirl(sigma, d).matrix)
            worst = max(worst, gap)
            _check(result, ReportRow(f"choi-twirl/random{i}", d, n, gap=gap), CHOI_TOL)
    verdict = "PASS" if result.passed else "FAIL"
    result.lines.append(f"{verdict} choi-roundtrip: max gap {worst:.3e} (tol {CHOI_TOL:.0e})")
    return result


def _bound_value(dist: PauliDistribution) -> Optional[float]:
    return distribution_bound(dist).value


def code_fidelity(ctx: CommandContext) -> CommandResult:
    """F_e of the decoded channel against P_n(J), with the Knill-Laflamme check"""
    result = CommandResult("code-fidelity")
    code = load_code(_require(ctx.code, "code"))
    dist = load_noise(_require(ctx.noise, "noise"))
    if not code.reps:
        code = code.with_reps(choose_reps(code, dist))
    way1, way2 = code_entanglement_fidelity(code, dist)
    loose, tight = corollary1_bounds(way2)
    row = ReportRow(
        "code-fidelity", code.d, code.n, K=code.K, rate=code.rate,
        fidelity_way1=way1, fidelity_way2=way2, gap=abs(way1 - way2),
        bound_corollary1=loose, bound_hashing_or_markov=_bound_value(dist),
        extra={"infidelity_bound_symplectic": tight},
    )
    _check(result, row, KL_TOL)
    kl = kl_check(code, correctable_set(code))
    get_logger().log_check("knill-laflamme", 0.0 if kl else 1.0, KL_TOL, kl)
    if not kl:
        result.fail("knill-laflamme", 1.0, KL_TOL)
    result.lines.append(f"F_e (decoded channel) = {way1:.6f}")
    result.lines.append(f"P_n(J)                = {way2:.6f}")
    result.lines.append(f"Knill-Laflamme on J: {'PASS' if kl else 'FAIL'}")
    return result


def run_distill(ctx: CommandContext) -> CommandResult:
    """Protocol fidelity against the code fidelity.

    With --noise the shared state is the Bell-diagonal state of that
    distribution; otherwise the seeded battery runs over the trivial code
    and the given code.
    """
    result = CommandResult("distill")
    code = load_code(_require(ctx.code, "code"))
    if ctx.noise:
        dist = load_noise(ctx.noise)
        report = theorem1_check(bell_diagonal_state(dist), code)
        _check(result, ReportRow(
            "distill/noise", code.d, code.n, K=code.K, rate=code.rate,
            fidelity_way1=report.protocol_fidelity, fidelity_way2=report.code_fidelity,
            gap=report.gap, bound_corollary1=corollary1_bounds(report.p_j)[0],
            bound_hashing_or_markov=_bound_value(dist), extra={"mode": report.mode, "p_j": report.p_j},
        ), FIDELITY_GAP_TOL)
        result.lines.append(f"protocol fidelity = {report.protocol_fidelity:.6f} ({report.mode} mode)")
        result.lines.append(f"code fidelity     = {report.code_fidelity:.6f}")
        sampled = sample_runs(bell_diagonal_state(dist), code, np.random.default_rng(ctx.seed), SAMPLED_RUNS)
        result.lines.append(f"sampled runs      = {sampled.mean():.6f} (mean of {SAMPLED_RUNS}, seed {ctx.seed})")
        result.notes.append(f"sampled single-run fidelity {sampled.mean():.6f} over {SAMPLED_RUNS} runs")
        return result

    codes: Dict[str, SymplecticCode] = {"trivial": trivial_code(code.d, code.n), "code": code}
    scenarios = battery(codes, ctx.seed, samples=max(1, ctx.settings.random_states // 4))
    runner = BatteryService(max_workers=ctx.settings.max_workers)
    outcomes = runner.run(scenarios, lambda s: run_scenario(s, codes))
    worst = 0.0
    for outcome in outcomes:
        s = outcome.scenario
        if not outcome.ok:
            raise outcome.error
        report = outcome.value
        worst = max(worst, report.gap)
        K = codes[s.code_name].K
        _check(result, ReportRow(
            f"distill/{s.name}", s.d, s.n, K=K, rate=codes[s.code_name].rate,
            fidelity_way1=report.protocol_fidelity, fidelity_way2=report.code_fidelity,
            gap=report.gap, bound_corollary1=corollary1_bounds(report.p_j)[0],
            extra={"seed": s.seed, "mode": report.mode},
        ), FIDELITY_GAP_TOL)
    verdict = "PASS" if result.passed else "FAIL"
    result.lines.append(f"{verdict} distill: {len(outcomes)} scenarios, max gap {worst:.3e} (tol {FIDELITY_GAP_TOL:.0e})")
    return result


def bounds(ctx: CommandContext) -> CommandResult:
    """Hashing or Markov bound of a noise model"""
    result = CommandResult("bounds")
    dist = load_noise(_require(ctx.noise, "noise"))
    report = distribution_bound(dist)
    result.rows.append(ReportRow(f"bounds/{report.kind}", dist.d, dist.n, bound_hashing_or_markov=report.value,
                                 extra={"note": report.note}))
    unit = "bits" if dist.d == 2 else f"base-{dist.d} units"
    if report.value is None:
        result.lines.append(report.note)
    else:
        result.lines.append(f"{report.value:.6f}")
        result.lines.append(f"{report.kind} bound in {unit} (log base d = {dist.d})")
        if report.vacuous:
            result.notes.append("bound is non-positive: no positive rate guaranteed")
    if report.note:
        result.notes.append(report.note)
    result.lines.extend(result.notes)
    return result


def exponent(ctx: CommandContext) -> CommandResult:
    """E(R, P) over the configured rates for a single-letter model"""
    result = CommandResult("exponent")
    dist = load_noise(_require(ctx.noise, "noise"))
    if dist.form == IID:
        letter = dist.single_letter
    elif dist.form == EXPLICIT and dist.n == 1:
        letter = dist.table
    else:
        raise InvalidInputError("exponent needs an iid or single-pair model", field="form")
    n = ctx.n or dist.n
    hashing = hashing_bound(letter, dist.d)
    result.lines.append(f"hashing bound 1 - H(P) = {hashing:.6f}")
    for rate, e in exponent_curve(letter, ctx.settings.rates, dist.d):
        infidelity = min(1.0, float(dist.d ** (-n * e)))
        # d^{-nE} lives in extra, not in bound_corollary1
        result.rows.append(ReportRow(
            f"exponent/R={rate:g}", dist.d, n, rate=rate, bound_hashing_or_markov=hashing,
            extra={"exponent": e, "infidelity_bound_exponential": infidelity},
        ))
        result.lines.append(f"R={rate:<6g} E={e:.6f}  1-F <= {infidelity:.3e} (n={n})")
    result.notes.append(f"exponent optimizer tolerance {EXPONENT_TOL:.0e}")
    return result


COMMANDS: Dict[str, Callable[[CommandContext], CommandResult]] = {
    "verify-lemma1": verify_lemma1,
    "twirl": verify_twirl,
    "choi-roundtrip": choi_roundtrip,
    "code-fidelity": code_fidelity,
    "distill": run_distill,
    "bounds": bounds,
    "exponent": exponent,
}


def run_command(name: str, ctx: CommandContext) -> CommandResult:
    if name not in COMMANDS:
        raise InvalidInputError(f"unknown command {name!r}", field="command")
    get_logger().log_info(f"Running {name} (seed={ctx.seed}, d={ctx.d}, n={ctx.n})")
    return COMMANDS[name](ctx)

