"""
Pauli noise measures on (Z_d)^{2n} and the rate bounds derived from them.

A label x = (u_1, ..., u_n) is a sequence of letters u = (i, j) in Z_d^2;
letter u has index i*d + j, and x has index sum_k u_k (d^2)^{n-1-k}, which
coincides with ZdVec.index() on the interleaved coordinates.

Entropies, divergences and rates are in base-d units (qudits).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import InitVar, dataclass, field
from functools import reduce
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from src.constants import (
    ENUMERATION_LIMIT,
    EXPONENT_SCAN_POINTS,
    EXPONENT_TOL,
    GRID_POINT_LIMIT,
    PROB_TOL,
    STATIONARY_TOL,
)
from src.core.json_utils import load_json_file, parse_label, parse_letter_table
from src.error_handler import DimensionError, InvalidInputError, ResourceGuardError
from src.quantum_state import DensityMatrix, bell_diagonal
from src.zd_symplectic import ZdVec, check_enumeration

logger = logging.getLogger("teledistill.noise")

EXPLICIT = "explicit"
IID = "iid"
MARKOV = "markov"
FORMS = (EXPLICIT, IID, MARKOV)


def _letters_d(size: int) -> int:
    d = math.isqrt(size)
    if d * d != size or d < 2:
        raise DimensionError(f"single-letter table of length {size} is not d^2 for d >= 2")
    return d


def _check_distribution(p: np.ndarray, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise InvalidInputError("must be a 1-D probability vector", field=name)
    if (p < 0).any():
        raise InvalidInputError("probabilities must be non-negative", field=name)
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise InvalidInputError(f"probabilities sum to {p.sum():.15f}, not 1", field=name)
    return p


@dataclass(frozen=True, eq=False)
class PauliDistribution:
    """Probability measure P_n on (Z_d)^{2n} in explicit, iid or Markov form"""
    d: int
    n: int
    form: str
    single_letter: Optional[np.ndarray] = field(default=None, repr=False)
    initial: Optional[np.ndarray] = field(default=None, repr=False)
    transition: Optional[np.ndarray] = field(default=None, repr=False)
    table: Optional[np.ndarray] = field(default=None, repr=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        if self.form not in FORMS:
            raise InvalidInputError(f"unknown form {self.form!r}", field="form")
        if self.d < 2:
            raise InvalidInputError(f"d={self.d} must be >= 2", field="d")
        if self.n < 1:
            raise InvalidInputError(f"n={self.n} must be >= 1", field="n")
        if not validate:
            return
        letters = self.d ** 2
        if self.form == IID:
            p = _check_distribution(self.single_letter, "single_letter")
            if p.size != letters:
                raise InvalidInputError(f"expected {letters} entries, got {p.size}", field="single_letter")
        elif self.form == MARKOV:
            p = _check_distribution(self.initial, "initial")
            if p.size != letters:
                raise InvalidInputError(f"expected {letters} entries, got {p.size}", field="initial")
            t = np.asarray(self.transition, dtype=float)
            if t.shape != (letters, letters):
                raise InvalidInputError(f"expected shape {(letters, letters)}, got {t.shape}", field="transition")
            for u, row in enumerate(t):
                _check_distribution(row, f"transition[{u}]")
        else:
            p = _check_distribution(self.table, "table")
            if p.size != letters ** self.n:
                raise InvalidInputError(f"expected {letters ** self.n} entries, got {p.size}", field="table")

    @classmethod
    def iid(cls, d: int, n: int, single_letter: Sequence[float]) -> "PauliDistribution":
        return cls(d, n, IID, single_letter=np.asarray(single_letter, dtype=float))

    @classmethod
    def markov(cls, d: int, n: int, initial: Sequence[float],
               transition: Sequence[Sequence[float]]) -> "PauliDistribution":
        return cls(d, n, MARKOV, initial=np.asarray(initial, dtype=float),
                   transition=np.asarray(transition, dtype=float))

    @classmethod
    def explicit(cls, d: int, n: int, table: Sequence[float]) -> "PauliDistribution":
        return cls(d, n, EXPLICIT, table=np.asarray(table, dtype=float))

    @classmethod
    def point_mass(cls, x: ZdVec) -> "PauliDistribution":
        table = np.zeros(x.d ** (2 * x.n))
        table[x.index()] = 1.0
        return cls.explicit(x.d, x.n, table)

    @classmethod
    def uniform(cls, d: int, n: int) -> "PauliDistribution":
        return cls.iid(d, n, np.full(d * d, 1.0 / (d * d)))

    def to_table(self) -> np.ndarray:
        """P_n over all d^{2n} labels in index order"""
        check_enumeration(self.d, self.n, "distribution table")
        if self.form == EXPLICIT:
            return np.asarray(self.table, dtype=float)
        if self.form == IID:
            return reduce(np.kron, [self.single_letter] * self.n)
        letters = self.d ** 2
        joint = np.asarray(self.initial, dtype=float)
        for _ in range(self.n - 1):
            joint = (joint.reshape(-1, letters)[:, :, None] * self.transition[None, :, :]).reshape(-1)
        return joint


def _letters_of(dist: PauliDistribution, x: Union[ZdVec, Sequence[Sequence[int]]]) -> List[int]:
    label = x if isinstance(x, ZdVec) else ZdVec.from_pairs(dist.d, x)
    if label.d != dist.d or label.n != dist.n:
        raise DimensionError(f"label {label} is not in (Z_{dist.d})^{2 * dist.n}")
    return [i * dist.d + j for i, j in label.pairs()]


def prob(dist: PauliDistribution, x: Union[ZdVec, Sequence[Sequence[int]]]) -> float:
    """Measure of the label x (a ZdVec or a sequence of n pairs)"""
    letters = _letters_of(dist, x)
    if dist.form == EXPLICIT:
        label = x if isinstance(x, ZdVec) else ZdVec.from_pairs(dist.d, x)
        return float(dist.table[label.index()])
    if dist.form == IID:
        return float(np.prod([dist.single_letter[u] for u in letters]))
    p = float(dist.initial[letters[0]])
    for u, v in zip(letters, letters[1:]):
        p *= float(dist.transition[u, v])
    return p


# =============================================================================
# MARKOV CHAINS
# =============================================================================

@dataclass(frozen=True, eq=False)
class MarkovAnalysis:
    """Communicating classes and one stationary vector per closed class"""
    classes: Tuple[Tuple[int, ...], ...]
    closed: Tuple[bool, ...]
    stationary: Dict[Tuple[int, ...], np.ndarray] = field(repr=False)

    @property
    def irreducible(self) -> bool:
        return len(self.classes) == 1

    def unique_stationary(self) -> Optional[np.ndarray]:
        if len(self.stationary) == 1:
            return next(iter(self.stationary.values()))
        return None

    def class_containing(self, support: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """The closed class containing every state in `support`, if any"""
        support = set(int(s) for s in support)
        for cls in self.stationary:
            if support <= set(cls):
                return cls
        return None


def _transitive_closure(adjacency: np.ndarray) -> np.ndarray:
    """reach[u, v]: v reachable from u in one or more steps"""
    reach = adjacency.copy()
    for k in range(reach.shape[0]):
        reach |= reach[:, k:k + 1] & reach[k:k + 1, :]
    return reach


def stationary(transition: Union[PauliDistribution, np.ndarray]) -> MarkovAnalysis:
    """Classify states by mutual reachability and solve qP = q on each closed class"""
    if isinstance(transition, PauliDistribution):
        if transition.form != MARKOV:
            raise InvalidInputError("stationary analysis needs a Markov distribution", field="form")
        transition = transition.transition
    t = np.asarray(transition, dtype=float)
    size = t.shape[0]
    reach = _transitive_closure(t > 0)
    classes: List[Tuple[int, ...]] = []
    seen = set()
    for u in range(size):
        if u in seen:
            continue
        members = tuple(v for v in range(size) if v == u or (reach[u, v] and reach[v, u]))
        seen.update(members)
        classes.append(members)
    closed = []
    solutions: Dict[Tuple[int, ...], np.ndarray] = {}
    for members in classes:
        outside = [v for v in range(size) if v not in members]
        is_closed = not outside or not (t[np.ix_(members, outside)] > 0).any()
        closed.append(is_closed)
        if not is_closed:
            continue
        sub = t[np.ix_(members, members)]
        kernel = null_space(sub.T - np.eye(len(members)))
        vec = np.abs(kernel[:, 0])
        q = np.zeros(size)
        q[list(members)] = vec / vec.sum()
        solutions[members] = q
    logger.debug("markov chain: %d classes, %d closed", len(classes), len(solutions))
    return MarkovAnalysis(tuple(classes), tuple(closed), solutions)


# =============================================================================
# ENTROPIES AND BOUNDS
# =============================================================================

def entropy(P: Sequence[float], d: Optional[int] = None) -> float:
    """Shannon entropy of a single-letter table in base d"""
    p = np.asarray(P, dtype=float)
    d = d or _letters_d(p.size)
    return float(-xlogy(p, p).sum() / math.log(d))


def cond_entropy(transition: np.ndarray, q: Sequence[float], d: Optional[int] = None) -> float:
    """H(P|q) = sum_u q(u) H(P(.|u)) in base d"""
    t = np.asarray(transition, dtype=float)
    q = np.asarray(q, dtype=float)
    d = d or _letters_d(q.size)
    rows = -xlogy(t, t).sum(axis=1) / math.log(d)
    return float(q @ rows)


def hashing_bound(P: Sequence[float], d: Optional[int] = None) -> float:
    """1 - H(P); may be negative, in which case the bound is vacuous"""
    return 1.0 - entropy(P, d)


def markov_bound(transition: np.ndarray, q: Sequence[float], d: Optional[int] = None) -> float:
    """1 - H(P|q) for a stationary q (supported on a closed class)"""
    t = np.asarray(transition, dtype=float)
    q = np.asarray(q, dtype=float)
    residual = float(np.max(np.abs(q @ t - q)))
    if residual > STATIONARY_TOL:
        raise InvalidInputError(f"q is not stationary (||qP - q|| = {residual:.2e})", field="q")
    return 1.0 - cond_entropy(t, q, d)


def binary_entropy(z: float) -> float:
    """h(z) in bits"""
    return float(-(xlogy(z, z) + xlogy(1 - z, 1 - z)) / math.log(2))


def example1_transition(eps: Sequence[float]) -> np.ndarray:
    """d = 2 kernel P((0,0)|u) = 1 - eps_u, P(v|u) = eps_u / 3 for v != (0,0)"""
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (4,):
        raise InvalidInputError("need one error rate per letter (4 for d=2)", field="epsilon")
    if ((eps <= 0) | (eps >= 1)).any():
        raise InvalidInputError("error rates must lie in (0, 1)", field="epsilon")
    t = np.repeat((eps / 3)[:, None], 4, axis=1)
    t[:, 0] = 1 - eps
    return t


def example1_chain(eps: Sequence[float], n: int, initial: Optional[Sequence[float]] = None) -> PauliDistribution:
    """Markov measure of the d = 2 example; starts in the stationary law by default"""
    t = example1_transition(eps)
    if initial is None:
        initial = stationary(t).unique_stationary()
    return PauliDistribution.markov(2, n, initial, t)


def example1_bound(eps: Sequence[float], q: Sequence[float]) -> float:
    """1 - sum_u q(u) [h(eps_u) + eps_u log2 3], in bits"""
    return 1.0 - float(sum(
        qu * (binary_entropy(e) + e * math.log2(3)) for qu, e in zip(q, eps)
    ))


def is_phase_only_class(members: Sequence[int], d: int) -> bool:
    """Class contained in {(0, v)}: letters with zero X-part"""
    return all(u // d == 0 for u in members)


@dataclass
class BoundReport:
    """Asymptotic rate bound for a distribution"""
    kind: str
    value: Optional[float]
    note: str = ""

    @property
    def vacuous(self) -> bool:
        return self.value is not None and self.value <= 0


def distribution_bound(dist: PauliDistribution) -> BoundReport:
    """Hashing bound for iid, Markov bound for Markov measures.

    Reducible chains are handled only when the initial support lies in one
    closed class; otherwise no bound is reported.
    """
    if dist.form == IID:
        return BoundReport("hashing", hashing_bound(dist.single_letter, dist.d))
    if dist.form == EXPLICIT:
        if dist.n == 1:
            return BoundReport("hashing", hashing_bound(dist.table, dist.d))
        return BoundReport("none", None, "no bound derived for explicit n-letter measures")
    analysis = stationary(dist)
    support = np.nonzero(dist.initial > 0)[0]
    members = analysis.class_containing(support)
    if members is None:
        return BoundReport("none", None, "no bound derived: initial support spans several classes")
    q = analysis.stationary[members]
    note = "" if analysis.irreducible else f"restricted to closed class {list(members)}"
    if is_phase_only_class(members, dist.d) and np.allclose(dist.initial, q, atol=1e-12):
        note = (note + "; " if note else "") + "phase-only class started in stationary law (tight case)"
    return BoundReport("markov", markov_bound(dist.transition, q, dist.d), note)


def single_letter_from_state(sigma: DensityMatrix, d: int) -> np.ndarray:
    """P_sigma(u) = <Psi_u|sigma|Psi_u> for a single pair"""
    if sigma.dim != d ** 2:
        raise DimensionError(f"single pair state must have dim {d ** 2}, got {sigma.dim}")
    probs = bell_diagonal(sigma, d)
    return probs / probs.sum()


def example2_bound(dist: PauliDistribution) -> float:
    """1 - H(P|q) for a chain started in the stationary law of a phase-only closed class"""
    if dist.form != MARKOV:
        raise InvalidInputError("needs a Markov distribution", field="form")
    analysis = stationary(dist)
    members = analysis.class_containing(np.nonzero(dist.initial > 0)[0])
    if members is None or not is_phase_only_class(members, dist.d):
        raise InvalidInputError("initial support is not inside a closed class of phase-only letters", field="initial")
    return markov_bound(dist.transition, analysis.stationary[members], dist.d)


# =============================================================================
# ERROR EXPONENT
# =============================================================================

def _exponent_terms(Q: np.ndarray, P: np.ndarray, R: float, d: int) -> np.ndarray:
    """D(Q||P) + |1 - H(Q) - R|^+ row-wise, +inf where Q is not << P"""
    log_d = math.log(d)
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = np.where(Q > 0, xlogy(Q, np.where(P > 0, P, 1.0)), 0.0)
        bad = ((Q > 0) & (P <= 0)).any(axis=-1)
        neg_h = xlogy(Q, Q).sum(axis=-1) / log_d
        div = neg_h - cross.sum(axis=-1) / log_d
    value = div + np.maximum(0.0, 1.0 + neg_h - R)
    return np.where(bad, np.inf, value)


def _tilted(P: np.ndarray, t: float) -> np.ndarray:
    w = np.where(P > 0, np.power(np.where(P > 0, P, 1.0), t), 0.0)
    return w / w.sum()


def error_exponent(R: float, P: Sequence[float], d: Optional[int] = None) -> float:
    """E(R,P) = min_Q D(Q||P) + |1 - H(Q) - R|^+.

    The objective is convex in Q and its stationary points are Q_t ~ P^t
    with t in [1/2, 1], so the minimum is found by a scan of that family
    followed by bounded scalar refinement.
    """
    if not 0.0 <= R <= 1.0:
        raise InvalidInputError(f"rate R={R} not in [0, 1]", field="R")
    p = _check_distribution(P, "P")
    d = d or _letters_d(p.size)
    if 1.0 - entropy(p, d) - R <= 0.0:
        return 0.0

    def objective(t: float) -> float:
        return float(_exponent_terms(_tilted(p, t), p, R, d))

    ts = np.linspace(0.5, 1.0, EXPONENT_SCAN_POINTS)
    values = np.array([objective(t) for t in ts])
    best = int(np.argmin(values))
    lo, hi = ts[max(best - 1, 0)], ts[min(best + 1, len(ts) - 1)]
    refined = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                              options={"xatol": EXPONENT_TOL * 1e-3})
    return float(max(0.0, min(values[best], refined.fun)))


def _compositions(total: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length `parts` <= 3 summing to `total`"""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    if parts == 2:
        first = np.arange(total + 1, dtype=np.int64)
        return np.column_stack([first, total - first])
    i, j = np.triu_indices(total + 1)
    return np.column_stack([i, j - i, total - j]).astype(np.int64)


def _composition_blocks(total: int, parts: int) -> Iterator[np.ndarray]:
    """Compositions of `total` in blocks with the leading coordinates fixed"""
    if parts <= 3:
        yield _compositions(total, parts)
        return
    for first in range(total + 1):
        for block in _composition_blocks(total - first, parts - 1):
            yield np.column_stack([np.full(len(block), first, dtype=np.int64), block])


def exponent_grid(R: float, P: Sequence[float], resolution: float = 0.01,
                  d: Optional[int] = None) -> float:
    """Grid-search oracle for E(R,P) over the simplex at the given resolution.

    The simplex is walked in blocks so fine grids never materialize at once.
    """
    p = _check_distribution(P, "P")
    d = d or _letters_d(p.size)
    steps = int(round(1.0 / resolution))
    count = math.comb(steps + p.size - 1, p.size - 1)
    if count > GRID_POINT_LIMIT:
        raise ResourceGuardError("exponent grid", count, GRID_POINT_LIMIT)
    best = math.inf
    for block in _composition_blocks(steps, p.size):
        best = min(best, float(np.min(_exponent_terms(block / steps, p, R, d))))
    return best


def exponent_curve(P: Sequence[float], rates: Sequence[float],
                   d: Optional[int] = None) -> List[Tuple[float, float]]:
    """(R, E(R,P)) pairs"""
    return [(float(r), error_exponent(r, P, d)) for r in rates]


# =============================================================================
# JSON NOISE MODELS
# =============================================================================

def parse_noise(data: Dict[str, Any]) -> PauliDistribution:
    """Build a distribution from the noise-model JSON schema"""
    if not isinstance(data, dict):
        raise InvalidInputError("noise model must be a JSON object")
    for key in ("d", "n", "form"):
        if key not in data:
            raise InvalidInputError("missing required field", field=key)
    try:
        d, n = int(data["d"]), int(data["n"])
    except (TypeError, ValueError):
        raise InvalidInputError("d and n must be integers", field="d")
    form = data["form"]
    letters = d * d
    if form == IID:
        return PauliDistribution.iid(d, n, parse_letter_table(data.get("single_letter"), d, "single_letter"))
    if form == MARKOV:
        if "epsilon" in data:
            transition = example1_transition(data["epsilon"])
            if d != 2:
                raise InvalidInputError("epsilon kernel is defined for d=2", field="d")
        elif "transition" in data:
            transition = np.asarray(data["transition"], dtype=float)
            if transition.shape != (letters, letters):
                raise InvalidInputError(f"expected {letters}x{letters} matrix", field="transition")
        else:
            raise InvalidInputError("markov form needs 'transition' or 'epsilon'", field="transition")
        if data.get("initial") is None:
            initial = stationary(transition).unique_stationary()
            if initial is None:
                raise InvalidInputError("reducible chain needs an explicit initial law", field="initial")
        else:
            initial = parse_letter_table(data["initial"], d, "initial")
        return PauliDistribution.markov(d, n, initial, transition)
    if form == EXPLICIT:
        raw = data.get("table")
        if not isinstance(raw, dict):
            raise InvalidInputError("explicit form needs an object of label -> probability", field="table")
        size = letters ** n
        if d ** (2 * n) > ENUMERATION_LIMIT:
            raise ResourceGuardError("explicit table", d ** (2 * n), ENUMERATION_LIMIT)
        table = np.zeros(size)
        for key, value in raw.items():
            label = ZdVec.from_pairs(d, parse_label(key, d, n, "table"))
            table[label.index()] = float(value)
        return PauliDistribution.explicit(d, n, table)
    raise InvalidInputError(f"unknown form {form!r}", field="form")


def load_noise(path: Union[str, Path]) -> PauliDistribution:
    return parse_noise(load_json_file(path))


def dump_noise(dist: PauliDistribution) -> Dict[str, Any]:
    """Inverse of parse_noise (explicit tables list only nonzero labels)"""
    out: Dict[str, Any] = {"d": dist.d, "n": dist.n, "form": dist.form}
    if dist.form == IID:
        out["single_letter"] = [float(v) for v in dist.single_letter]
    elif dist.form == MARKOV:
        out["initial"] = [float(v) for v in dist.initial]
        out["transition"] = [[float(v) for v in row] for row in dist.transition]
    else:
        out["table"] = {
            json.dumps(ZdVec.from_index(dist.d, dist.n, i).pairs()): float(v)
            for i, v in enumerate(dist.table) if v
        }
    return out
