"""
Teleportation with a noisy shared state, in two forms that can be checked
against each other: the full measure-and-correct process on T (x) A (x) B
and the closed-form Pauli channel sum_x <Psi_x|sigma|Psi_x> N_x rho N_x^dagger.
Also the discrete twirl and the Choi map.

An optional reference system R of dimension ref_dim is carried in front of
T so that entanglement fidelities can be computed from the full process.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Tuple, Union

import numpy as np

from src.constants import TELEPORT_DENSE_LIMIT
from src.error_handler import DimensionError, ResourceGuardError
from src.noise import PauliDistribution
from src.quantum_state import (
    DensityMatrix,
    KrausChannel,
    _bell_dims,
    apply,
    bell_diagonal,
    operator_gap,
    partial_trace,
)
from src.weyl import PSI, PSI_PRIME, all_labels, bell_basis_matrix, bell_psi, check_dense, weyl
from src.zd_symplectic import ZdVec, check_enumeration

logger = logging.getLogger("teledistill.channels")


@dataclass(frozen=True, eq=False)
class PauliChannel:
    """rho -> sum_x P(x) N_x rho N_x^dagger"""
    d: int
    n: int
    probs: PauliDistribution = field(repr=False)

    def __post_init__(self):
        if (self.probs.d, self.probs.n) != (self.d, self.n):
            raise DimensionError(
                f"distribution over (Z_{self.probs.d})^{2 * self.probs.n} "
                f"does not match channel d={self.d}, n={self.n}"
            )

    @cached_property
    def table(self) -> np.ndarray:
        return self.probs.to_table()

    @property
    def dim(self) -> int:
        return self.d ** self.n

    def support(self) -> Iterator[Tuple[ZdVec, float]]:
        """(label, probability) for labels of positive probability"""
        for idx in np.nonzero(self.table > 0)[0]:
            yield ZdVec.from_index(self.d, self.n, int(idx)), float(self.table[idx])


def _check_pair_state(sigma: DensityMatrix, d: int) -> int:
    n = _bell_dims(sigma.dim, d)
    check_dense(d, 2 * n, "shared state")
    return n


def _labels_and_primes(d: int, n: int):
    labels = all_labels(d, n)
    primes = bell_basis_matrix(d, n, PSI_PRIME)
    return labels, primes


def _conditional_rb(rho: np.ndarray, sigma: np.ndarray, prime: np.ndarray,
                    ref_dim: int, dim: int) -> np.ndarray:
    """<Psi'_x|_{TA} (rho (x) sigma) |Psi'_x>_{TA} as an (R B) x (R B) matrix"""
    r4 = rho.reshape(ref_dim, dim, ref_dim, dim)
    s4 = sigma.reshape(dim, dim, dim, dim)
    p = prime.reshape(dim, dim)
    out = np.einsum("ta,rtsu,abcf,uc->rbsf", p.conj(), r4, s4, p, optimize=True)
    return out.reshape(ref_dim * dim, ref_dim * dim)


def teleport_full(rho: DensityMatrix, sigma_AB: DensityMatrix, d: int, ref_dim: int = 1) -> DensityMatrix:
    """Outcome-summed state sum_x T_x (rho (x) sigma) T_x^dagger.

    Args:
        rho: Input state on R (x) T, dimension ref_dim * d^n
        sigma_AB: Shared pair state on A (x) B, dimension d^{2n}
        d: Local dimension
        ref_dim: Dimension of a reference system R kept in front (1 for none)

    Returns:
        DensityMatrix on R (x) T (x) A (x) B
    """
    n = _check_pair_state(sigma_AB, d)
    dim = d ** n
    if rho.dim != ref_dim * dim:
        raise DimensionError(f"input state has dim {rho.dim}, expected {ref_dim} * {dim}")
    total = ref_dim * dim ** 3
    if total > TELEPORT_DENSE_LIMIT:
        raise ResourceGuardError("teleportation process", total, TELEPORT_DENSE_LIMIT)
    labels, primes = _labels_and_primes(d, n)
    out = np.zeros((ref_dim, dim, dim, dim, ref_dim, dim, dim, dim), dtype=complex)
    eye_r = np.eye(ref_dim)
    for x, col in zip(labels, primes.T):
        cond = _conditional_rb(rho.matrix, sigma_AB.matrix, col, ref_dim, dim)
        corr = np.kron(eye_r, weyl(x).matrix)
        cond = (corr @ cond @ corr.conj().T).reshape(ref_dim, dim, ref_dim, dim)
        p = col.reshape(dim, dim)
        out += np.einsum("ta,rbsf,uc->rtabsucf", p, cond, p.conj())
    logger.debug("teleport_full d=%d n=%d ref_dim=%d", d, n, ref_dim)
    return DensityMatrix(out.reshape(total, total), validate=False)


def receiver_marginal(state: DensityMatrix, d: int, n: int, ref_dim: int = 1) -> DensityMatrix:
    """Trace T and A out of a teleport_full output, leaving R (x) B"""
    dim = d ** n
    return partial_trace(state, [ref_dim, dim, dim, dim], keep=[0, 3])


def teleport_branches(psi: np.ndarray, sigma_AB: DensityMatrix, d: int,
                      ref_dim: int = 1) -> Iterator[Tuple[float, ZdVec, np.ndarray]]:
    """Unnormalized corrected R (x) B vectors for a pure input on R (x) T.

    Yields (eigenvalue of sigma, outcome x, vector) so that the receiver
    marginal is sum weight |vector><vector|. Scales past the dense guard
    since only d^n x d^n blocks are formed.
    """
    n = _bell_dims(sigma_AB.dim, d)
    dim = d ** n
    psi = np.asarray(psi, dtype=complex).reshape(ref_dim, dim)
    evals, evecs = np.linalg.eigh(sigma_AB.matrix)
    scale = 1.0 / np.sqrt(dim)
    labels = all_labels(d, n)
    ops = [weyl(x).matrix for x in labels]
    for lam, v in zip(evals, evecs.T):
        if lam <= 1e-14:
            continue
        vm = v.reshape(dim, dim)
        for x, nx in zip(labels, ops):
            w = scale * (psi @ nx.conj() @ vm)
            yield float(lam), x, (w @ nx.T).reshape(-1)


def teleport_sample(rho: DensityMatrix, sigma_AB: DensityMatrix, d: int, rng: np.random.Generator,
                    ref_dim: int = 1) -> Tuple[ZdVec, DensityMatrix]:
    """One run of the protocol: sampled outcome x and the corrected R (x) B state"""
    n = _check_pair_state(sigma_AB, d)
    dim = d ** n
    if rho.dim != ref_dim * dim:
        raise DimensionError(f"input state has dim {rho.dim}, expected {ref_dim} * {dim}")
    labels, primes = _labels_and_primes(d, n)
    conds = [_conditional_rb(rho.matrix, sigma_AB.matrix, col, ref_dim, dim) for col in primes.T]
    probs = np.clip(np.array([np.trace(c).real for c in conds]), 0.0, None)
    k = int(rng.choice(len(labels), p=probs / probs.sum()))
    x = labels[k]
    corr = np.kron(np.eye(ref_dim), weyl(x).matrix)
    out = corr @ conds[k] @ corr.conj().T
    return x, DensityMatrix(out / probs[k], validate=False)


def teleport_channel(sigma_AB: DensityMatrix, d: int) -> PauliChannel:
    """Pauli channel with probabilities <Psi_x|sigma|Psi_x>"""
    n = _check_pair_state(sigma_AB, d)
    probs = bell_diagonal(sigma_AB, d)
    return PauliChannel(d, n, PauliDistribution.explicit(d, n, probs / probs.sum()))


def to_kraus(ch: PauliChannel) -> KrausChannel:
    """{sqrt(P(x)) N_x} over the support of P"""
    check_dense(ch.d, ch.n, "pauli channel")
    ops = tuple(np.sqrt(p) * weyl(x).matrix for x, p in ch.support())
    return KrausChannel(ops, validate=False)


def apply_pauli(ch: PauliChannel, rho: DensityMatrix) -> DensityMatrix:
    if rho.dim != ch.dim:
        raise DimensionError(f"channel acts on {ch.dim} dims, state has {rho.dim}")
    check_dense(ch.d, ch.n, "pauli channel")
    out = np.zeros_like(rho.matrix)
    for x, p in ch.support():
        nx = weyl(x).matrix
        out += p * (nx @ rho.matrix @ nx.conj().T)
    return DensityMatrix(out, validate=False)


def twirl(sigma: DensityMatrix, d: int) -> DensityMatrix:
    """Explicit average of (conj(N_x) (x) N_x) sigma (...)^dagger over all x"""
    n = _check_pair_state(sigma, d)
    count = check_enumeration(d, n, "twirl")
    out = np.zeros_like(sigma.matrix)
    for x in all_labels(d, n):
        nx = weyl(x).matrix
        u = np.kron(nx.conj(), nx)
        out += u @ sigma.matrix @ u.conj().T
    return DensityMatrix(out / count, validate=False)


def bell_projection(sigma: DensityMatrix, d: int) -> DensityMatrix:
    """sum_y alpha_{y,y} |Psi_y><Psi_y|, the closed form of the twirl"""
    n = _check_pair_state(sigma, d)
    basis = bell_basis_matrix(d, n, PSI)
    probs = bell_diagonal(sigma, d)
    return DensityMatrix((basis * probs) @ basis.conj().T, validate=False)


def choi_state(ch: Union[KrausChannel, PauliChannel], d: int) -> DensityMatrix:
    """[Id (x) ch](|Psi_0><Psi_0|)"""
    if isinstance(ch, PauliChannel):
        ch = to_kraus(ch)
    dim = ch.dim
    n = _bell_dims(dim * dim, d)
    psi0 = bell_psi(ZdVec.zero(d, n)).vector
    return apply(ch.extend(dim), DensityMatrix(np.outer(psi0, psi0.conj()), validate=False))


def channel_distance(a: Union[KrausChannel, PauliChannel], b: Union[KrausChannel, PauliChannel], d: int) -> float:
    """Max absolute difference of the Choi states"""
    return operator_gap(choi_state(a, d).matrix, choi_state(b, d).matrix)


def bell_diagonal_state(dist: PauliDistribution) -> DensityMatrix:
    """sum_x P_n(x) |Psi_x><Psi_x|; its teleportation channel is the Pauli channel of dist"""
    check_dense(dist.d, 2 * dist.n, "shared state")
    basis = bell_basis_matrix(dist.d, dist.n, PSI)
    return DensityMatrix((basis * dist.to_table()) @ basis.conj().T, validate=False)
