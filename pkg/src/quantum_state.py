"""
Density matrices, Kraus channels, partial traces and the two fidelity
notions used throughout: entanglement fidelity and minimum pure-state
fidelity.

Multipartite factors are always ordered R (x) T (x) A (x) B.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from src.constants import HERMITIAN_TOL, KRAUS_TOL, PSD_TOL, TRACE_TOL
from src.error_handler import DimensionError, InvalidInputError
from src.weyl import PSI, bell_basis_matrix


def operator_gap(a: np.ndarray, b: np.ndarray) -> float:
    """Max absolute entry difference"""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace positive semidefinite matrix.

    Pass validate=False only for matrices produced by trusted operations
    (channel outputs of validated inputs).
    """
    matrix: np.ndarray = field(repr=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        if validate:
            if operator_gap(m, m.conj().T) > HERMITIAN_TOL:
                raise InvalidInputError("matrix is not Hermitian", field="rho")
            if abs(np.trace(m) - 1) > TRACE_TOL:
                raise InvalidInputError(f"trace {np.trace(m).real:.12f} != 1", field="rho")
            if np.linalg.eigvalsh(m).min() < -PSD_TOL:
                raise InvalidInputError("matrix is not positive semidefinite", field="rho")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector: np.ndarray) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> "DensityMatrix":
        """Ginibre-random state of the given rank (full rank by default)"""
        rank = rank or dim
        g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
        rho = g @ g.conj().T
        return cls(rho / np.trace(rho))

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.matrix, other.matrix), validate=False)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving completely positive map {M_i}"""
    kraus_ops: Tuple[np.ndarray, ...] = field(repr=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        ops = tuple(np.asarray(m, dtype=complex) for m in self.kraus_ops)
        if not ops:
            raise InvalidInputError("channel needs at least one Kraus operator", field="kraus_ops")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1] or any(m.shape != shape for m in ops):
            raise DimensionError("Kraus operators must be square and of equal size")
        object.__setattr__(self, "kraus_ops", ops)
        if validate:
            total = sum(m.conj().T @ m for m in ops)
            if operator_gap(total, np.eye(shape[0])) > KRAUS_TOL:
                raise InvalidInputError("Kraus operators are not trace preserving", field="kraus_ops")

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls((np.eye(dim, dtype=complex),))

    @classmethod
    def unitary(cls, u: np.ndarray) -> "KrausChannel":
        return cls((u,))

    def after(self, first: "KrausChannel") -> "KrausChannel":
        """The composition self o first"""
        if first.dim != self.dim:
            raise DimensionError(f"cannot compose channels on {self.dim} and {first.dim} dims")
        ops = tuple(a @ b for a in self.kraus_ops for b in first.kraus_ops)
        return KrausChannel(ops, validate=False)

    def extend(self, ref_dim: int) -> "KrausChannel":
        """Id_R (x) self with R of dimension ref_dim in front"""
        eye = np.eye(ref_dim, dtype=complex)
        return KrausChannel(tuple(np.kron(eye, m) for m in self.kraus_ops), validate=False)


def apply(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """sum_i M_i rho M_i^dagger"""
    if ch.dim != rho.dim:
        raise DimensionError(f"channel acts on {ch.dim} dims, state has {rho.dim}")
    out = np.zeros_like(rho.matrix)
    for m in ch.kraus_ops:
        out += m @ rho.matrix @ m.conj().T
    return DensityMatrix(out, validate=False)


def partial_trace(rho: DensityMatrix, dims: Sequence[int], keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the factors listed in `keep` (kept in ascending order)"""
    dims = [int(k) for k in dims]
    keep = sorted(set(int(k) for k in keep))
    if math.prod(dims) != rho.dim:
        raise DimensionError(f"factor dims {dims} do not multiply to {rho.dim}")
    if any(not 0 <= k < len(dims) for k in keep):
        raise DimensionError(f"keep {keep} out of range for {len(dims)} factors")
    count = len(dims)
    traced = [i for i in range(count) if i not in keep]
    tensor = rho.matrix.reshape(dims + dims)
    perm = keep + traced + [count + i for i in keep] + [count + i for i in traced]
    dk = math.prod(dims[i] for i in keep)
    dt = math.prod(dims[i] for i in traced)
    tensor = tensor.transpose(perm).reshape(dk, dt, dk, dt)
    return DensityMatrix(np.einsum("ajbj->ab", tensor), validate=False)


def _bell_dims(dim: int, d: int) -> int:
    n2 = round(math.log(dim, d))
    if d ** n2 != dim or n2 % 2:
        raise DimensionError(f"dimension {dim} is not d^(2n) for d={d}")
    return n2 // 2


def bell_coefficients(sigma: DensityMatrix, d: int) -> np.ndarray:
    """alpha[y, z] = <Psi_y|sigma|Psi_z>, indexed by label index"""
    n = _bell_dims(sigma.dim, d)
    basis = bell_basis_matrix(d, n, PSI)
    return basis.conj().T @ sigma.matrix @ basis


def from_bell_coefficients(alpha: np.ndarray, d: int) -> DensityMatrix:
    """sum_{y,z} alpha[y, z] |Psi_y><Psi_z|"""
    n = _bell_dims(alpha.shape[0], d)
    basis = bell_basis_matrix(d, n, PSI)
    return DensityMatrix(basis @ alpha @ basis.conj().T, validate=False)


def bell_diagonal(sigma: DensityMatrix, d: int) -> np.ndarray:
    """Probabilities P_n(x) = <Psi_x|sigma|Psi_x>"""
    probs = np.real(np.diag(bell_coefficients(sigma, d)))
    return np.clip(probs, 0.0, None)


def purify(rho: DensityMatrix) -> np.ndarray:
    """Purification over R (x) S with R first, from the eigendecomposition"""
    evals, evecs = np.linalg.eigh(rho.matrix)
    amplitudes = np.sqrt(np.clip(evals, 0.0, None))
    # Phi[j, s] = sqrt(lambda_j) <s|e_j>
    return (evecs * amplitudes).T.reshape(-1)


def entanglement_fidelity(rho: DensityMatrix, ch: KrausChannel) -> float:
    """<Phi|[Id_R (x) M](|Phi><Phi|)|Phi> for a purification Phi of rho"""
    if ch.dim != rho.dim:
        raise DimensionError(f"channel acts on {ch.dim} dims, state has {rho.dim}")
    phi = purify(rho).reshape(rho.dim, rho.dim)
    total = 0.0
    for m in ch.kraus_ops:
        total += abs(np.vdot(phi, phi @ m.T)) ** 2
    return float(min(max(total, 0.0), 1.0))


def entanglement_fidelity_trace_formula(rho: DensityMatrix, ch: KrausChannel) -> float:
    """sum_i |Tr(rho M_i)|^2"""
    if ch.dim != rho.dim:
        raise DimensionError(f"channel acts on {ch.dim} dims, state has {rho.dim}")
    return float(sum(abs(np.trace(rho.matrix @ m)) ** 2 for m in ch.kraus_ops))


def min_pure_fidelity_bound(G: float) -> float:
    """Entanglement infidelity bound 3/2 * G from a minimum-fidelity bound G"""
    if not 0.0 <= G <= 1.0:
        raise InvalidInputError(f"G={G} not in [0, 1]", field="G")
    return 1.5 * G


def pure_fidelity(psi: np.ndarray, ch: KrausChannel) -> float:
    """<psi|M(|psi><psi|)|psi>"""
    return float(sum(abs(np.vdot(psi, m @ psi)) ** 2 for m in ch.kraus_ops))


def min_pure_fidelity(code_basis: np.ndarray, ch: KrausChannel, rng: np.random.Generator,
                      samples: int = 200) -> float:
    """Sampled minimum pure fidelity over the span of code_basis' columns.

    The basis vectors themselves are always included; the value is an upper
    estimate of the true minimum.
    """
    k = code_basis.shape[1]
    candidates = [code_basis[:, j] for j in range(k)]
    for _ in range(samples):
        c = rng.normal(size=k) + 1j * rng.normal(size=k)
        candidates.append(code_basis @ (c / np.linalg.norm(c)))
    return min(pure_fidelity(psi, ch) for psi in candidates)
