"""
Symplectic (stabilizer) codes from a self-orthogonal subspace L.

The code space is the joint eigenspace of {N_l} on which each canonical
basis element l_i of L acts as lambda_i, the principal d-th root of the
scalar N_{l_i}^d (lambda_i = 1 whenever N_{l_i}^d = I). Syndromes are
s_i(x) = <x, l_i>; N_x maps the code space onto the eigenspace with
eigenvalues lambda_i omega^{-s_i}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.channels import PauliChannel, to_kraus
from src.constants import KL_TOL, PROJECTOR_TOL, TIE_TOL
from src.core.json_utils import load_json_file, parse_vectors
from src.error_handler import DimensionError, InvalidInputError, NotSelfOrthogonalError
from src.noise import PauliDistribution
from src.quantum_state import DensityMatrix, KrausChannel, entanglement_fidelity, operator_gap
from src.weyl import check_dense, omega, weyl
from src.zd_symplectic import (
    Subspace,
    ZdVec,
    check_enumeration,
    enumerate_cosets,
    require_prime,
    symplectic_dual,
    symplectic_form,
    violating_pairs,
)

logger = logging.getLogger("teledistill.codes")

Syndrome = Tuple[int, ...]


def _eigen_projector(nl: np.ndarray, lam: complex, d: int) -> np.ndarray:
    """(1/d) sum_j (conj(lam) N_l)^j, the projector onto N_l = lam"""
    dim = nl.shape[0]
    term = np.eye(dim, dtype=complex)
    total = np.zeros((dim, dim), dtype=complex)
    step = np.conj(lam) * nl
    for _ in range(d):
        total += term
        term = term @ step
    return total / d


def _principal_root(nl: np.ndarray, d: int) -> complex:
    scalar = np.linalg.matrix_power(nl, d)[0, 0]
    angle = np.angle(scalar) % (2 * np.pi)
    if abs(angle - 2 * np.pi) < 1e-12:
        angle = 0.0
    return complex(np.exp(1j * angle / d))


@dataclass(frozen=True, eq=False)
class SymplecticCode:
    """Code space of a self-orthogonal L with optional syndrome representatives"""
    L: Subspace
    L_perp: Subspace
    eigenvalues: Tuple[complex, ...]
    projector: np.ndarray = field(repr=False)
    reps: Dict[Syndrome, ZdVec] = field(default_factory=dict, repr=False)

    @property
    def d(self) -> int:
        return self.L.d

    @property
    def n(self) -> int:
        return self.L.n

    @property
    def k(self) -> int:
        return self.L.dim

    @property
    def K(self) -> int:
        return self.d ** (self.n - self.k)

    @property
    def rate(self) -> float:
        return (self.n - self.k) / self.n

    def code_basis(self) -> np.ndarray:
        """Orthonormal basis of the code space as columns"""
        evals, evecs = np.linalg.eigh(self.projector)
        return evecs[:, evals > 0.5]

    def maximally_mixed(self) -> DensityMatrix:
        return DensityMatrix(self.projector / self.K, validate=False)

    def with_reps(self, reps: Dict[Syndrome, ZdVec]) -> "SymplecticCode":
        return replace(self, reps=dict(reps))


@dataclass(frozen=True)
class CorrectableSet:
    """J = J0 + L, one representative per syndrome in J0"""
    J0: Tuple[ZdVec, ...]
    L: Subspace
    members: Tuple[ZdVec, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: ZdVec) -> bool:
        return x in set(self.members)

    def probability(self, dist: PauliDistribution) -> float:
        """P_n(J)"""
        table = dist.to_table()
        return float(sum(table[x.index()] for x in self.members))


def syndrome(code: SymplecticCode, x: ZdVec) -> Syndrome:
    return tuple(symplectic_form(x, l) for l in code.L.basis)


def syndrome_projector(code: SymplecticCode, s: Sequence[int]) -> np.ndarray:
    """Projector onto the eigenspace N_{l_i} = lambda_i omega^{-s_i}"""
    if len(s) != code.k:
        raise DimensionError(f"syndrome has {len(s)} entries, code has {code.k} stabilizers")
    w = omega(code.d)
    proj = np.eye(code.d ** code.n, dtype=complex)
    for l, lam, si in zip(code.L.basis, code.eigenvalues, s):
        proj = proj @ _eigen_projector(weyl(l).matrix, lam * w ** (-si), code.d)
    return proj


def build_code(L: Subspace, d: Optional[int] = None, dist: Optional[PauliDistribution] = None) -> SymplecticCode:
    """Projector onto the lambda-eigenspace of L; representatives from `dist` if given.

    Raises:
        NotSelfOrthogonalError: some pair of basis vectors does not commute
        ResourceGuardError: d^n beyond the dense-matrix guard
    """
    if d is not None and d != L.d:
        raise DimensionError(f"subspace over Z_{L.d} used with d={d}")
    require_prime(L.d)
    pairs = violating_pairs(L.basis)
    if pairs:
        i, j, value = pairs[0]
        raise NotSelfOrthogonalError((i, j), value)
    check_dense(L.d, L.n, "code projector")
    eigenvalues = []
    proj = np.eye(L.d ** L.n, dtype=complex)
    for l in L.basis:
        nl = weyl(l).matrix
        lam = _principal_root(nl, L.d)
        eigenvalues.append(lam)
        proj = proj @ _eigen_projector(nl, lam, L.d)
    code = SymplecticCode(L, symplectic_dual(L), tuple(eigenvalues), proj)
    rank = np.trace(proj).real
    if abs(rank - code.K) > PROJECTOR_TOL:
        raise InvalidInputError(f"projector trace {rank:.6f} != {code.K}", field="stabilizer_basis")
    logger.debug("built code d=%d n=%d k=%d K=%d", code.d, code.n, code.k, code.K)
    if dist is not None:
        code = code.with_reps(choose_reps(code, dist))
    return code


def _indices(rows: np.ndarray, d: int) -> np.ndarray:
    powers = d ** np.arange(rows.shape[-1] - 1, -1, -1, dtype=np.int64)
    return rows @ powers


def choose_reps(code: SymplecticCode, dist: PauliDistribution) -> Dict[Syndrome, ZdVec]:
    """For each coset of L-perp, the member x maximizing sum_{l in L} P_n(x + l).

    Ties within TIE_TOL go to the lexicographically smallest member.
    """
    if (dist.d, dist.n) != (code.d, code.n):
        raise DimensionError("distribution and code live on different spaces")
    check_enumeration(code.d, code.n, "representative search")
    table = dist.to_table()
    stabilizers = code.L.elements_array()
    reps: Dict[Syndrome, ZdVec] = {}
    for coset in enumerate_cosets(code.L_perp):
        members = coset.members_array()
        members = members[np.argsort(_indices(members, code.d))]
        shifted = (members[:, None, :] + stabilizers[None, :, :]) % code.d
        scores = table[_indices(shifted, code.d)].sum(axis=1)
        best = int(np.nonzero(scores >= scores.max() - TIE_TOL)[0][0])
        x = ZdVec(code.d, tuple(int(c) for c in members[best]))
        reps[syndrome(code, x)] = x
    return reps


def correctable_set(code: SymplecticCode) -> CorrectableSet:
    if not code.reps:
        raise InvalidInputError("code has no syndrome representatives; call choose_reps first", field="reps")
    J0 = tuple(code.reps[s] for s in sorted(code.reps))
    members = {(x + l).index(): x + l for x in J0 for l in code.L.elements()}
    return CorrectableSet(J0, code.L, tuple(members[i] for i in sorted(members)))


def kl_check(code: SymplecticCode, J: Union[CorrectableSet, Sequence[ZdVec]], tol: float = KL_TOL) -> bool:
    """Pi N_x^dagger N_y Pi = c_{x,y} Pi for all x, y in J"""
    labels = list(J.members if isinstance(J, CorrectableSet) else J)
    proj = code.projector
    ops = [weyl(x).matrix for x in labels]
    for a in ops:
        for b in ops:
            m = proj @ a.conj().T @ b @ proj
            c = np.trace(m) / code.K
            if operator_gap(m, c * proj) > tol:
                return False
    return True


def decoder(code: SymplecticCode) -> KrausChannel:
    """{N_{x(s)}^dagger Pi_s} over all syndromes s"""
    if not code.reps:
        raise InvalidInputError("code has no syndrome representatives; call choose_reps first", field="reps")
    check_dense(code.d, code.n, "decoder")
    ops = tuple(weyl(x).dagger @ syndrome_projector(code, s) for s, x in sorted(code.reps.items()))
    return KrausChannel(ops)


def code_entanglement_fidelity(code: SymplecticCode, dist: PauliDistribution) -> Tuple[float, float]:
    """(F_e of the decoded Pauli channel on Pi/K, P_n(J))"""
    if not code.reps:
        code = code.with_reps(choose_reps(code, dist))
    channel = decoder(code).after(to_kraus(PauliChannel(code.d, code.n, dist)))
    way1 = entanglement_fidelity(code.maximally_mixed(), channel)
    way2 = correctable_set(code).probability(dist)
    return way1, way2


def corollary1_bounds(p_j: float) -> Tuple[float, float]:
    """Infidelity bounds (1.5 (1 - P_n(J)), 1 - P_n(J))"""
    return 1.5 * (1.0 - p_j), 1.0 - p_j


def parse_code(data: Dict) -> SymplecticCode:
    """Build a code from {"d", "n", "stabilizer_basis"}"""
    if not isinstance(data, dict):
        raise InvalidInputError("code file must be a JSON object")
    for key in ("d", "n", "stabilizer_basis"):
        if key not in data:
            raise InvalidInputError("missing required field", field=key)
    d, n = int(data["d"]), int(data["n"])
    vectors = [ZdVec(d, tuple(v)) for v in parse_vectors(data["stabilizer_basis"], d, n, "stabilizer_basis")]
    pairs = violating_pairs(vectors)
    if pairs:
        i, j, value = pairs[0]
        raise NotSelfOrthogonalError((i, j), value)
    L = Subspace.span(d, n, vectors)
    if L.dim < len(vectors):
        logger.warning("stabilizer basis is linearly dependent: %d vectors span dim %d", len(vectors), L.dim)
    return build_code(L)


def load_code(path: Union[str, Path]) -> SymplecticCode:
    return parse_code(load_json_file(path))


def trivial_code(d: int, n: int) -> SymplecticCode:
    """L = {0}: the whole space, K = d^n, decoded by the identity"""
    return build_code(Subspace.zero(d, n)).with_reps({(): ZdVec.zero(d, n)})


def stabilizer_phases(code: SymplecticCode) -> List[Tuple[ZdVec, complex]]:
    """(l, chi(l)) with N_l Pi = chi(l) Pi for every element of L"""
    out = []
    for l in code.L.elements():
        m = weyl(l).matrix @ code.projector
        chi = np.trace(m) / code.K
        out.append((l, complex(chi)))
    return out
