"""
Weyl operators N_y = X^{x1} Z^{z1} (x) ... (x) X^{xn} Z^{zn} and the two
generalized Bell bases built from them.

Conventions: omega = exp(2 pi i / d), X|j> = |j-1>, Z|j> = omega^j |j>.
Matrices are dense; results are cached read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import List, Sequence, Tuple

import numpy as np

from src.constants import DENSE_MATRIX_LIMIT
from src.error_handler import DimensionError, ResourceGuardError
from src.zd_symplectic import ZdVec, check_enumeration, symplectic_form

PSI = "psi"
PSI_PRIME = "psi_prime"


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def check_dense(d: int, n: int, what: str = "dense operator") -> int:
    dim = d ** n
    if dim > DENSE_MATRIX_LIMIT:
        raise ResourceGuardError(what, dim, DENSE_MATRIX_LIMIT)
    return dim


@dataclass(frozen=True, eq=False)
class WeylOperator:
    """Label y and its d^n x d^n unitary matrix"""
    label: ZdVec
    matrix: np.ndarray = field(repr=False)

    @property
    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T


@dataclass(frozen=True, eq=False)
class BellVector:
    """Unit vector |Psi_y> or |Psi'_x> in C^{d^n} (x) C^{d^n}"""
    label: ZdVec
    kind: str
    vector: np.ndarray = field(repr=False)

    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())


def _freeze(matrix: np.ndarray) -> np.ndarray:
    matrix.setflags(write=False)
    return matrix


@lru_cache(maxsize=None)
def _shift_clock(d: int) -> Tuple[np.ndarray, np.ndarray]:
    shift = np.zeros((d, d), dtype=complex)
    for j in range(d):
        shift[(j - 1) % d, j] = 1.0
    clock = np.diag(omega(d) ** np.arange(d))
    return _freeze(shift), _freeze(clock)


@lru_cache(maxsize=4096)
def _single_matrix(d: int, i: int, j: int) -> np.ndarray:
    shift, clock = _shift_clock(d)
    return _freeze(np.linalg.matrix_power(shift, i) @ np.linalg.matrix_power(clock, j))


@lru_cache(maxsize=4096)
def _weyl_matrix(d: int, coords: Tuple[int, ...]) -> np.ndarray:
    factors = [_single_matrix(d, coords[2 * k], coords[2 * k + 1]) for k in range(len(coords) // 2)]
    return _freeze(reduce(np.kron, factors))


def weyl_single(d: int, u: Sequence[int]) -> WeylOperator:
    """N_(i,j) = X^i Z^j on one system"""
    if d < 2:
        raise DimensionError(f"modulus must be >= 2, got {d}")
    label = ZdVec.of(d, u)
    if label.n != 1:
        raise DimensionError(f"single-system label must have 2 coordinates, got {len(label.coords)}")
    return WeylOperator(label, _single_matrix(d, *label.coords))


def weyl(y: ZdVec) -> WeylOperator:
    """N_y = N_{y_1} (x) ... (x) N_{y_n}, first factor leftmost"""
    check_dense(y.d, y.n, "weyl operator")
    return WeylOperator(y, _weyl_matrix(y.d, y.coords))


def commutation_phase(y: ZdVec, y2: ZdVec) -> int:
    """Exponent k with N_y N_y2 = omega^k N_y2 N_y"""
    return symplectic_form(y, y2)


def all_labels(d: int, n: int) -> List[ZdVec]:
    """Every label of (Z_d)^{2n} in index order"""
    size = check_enumeration(d, n, "label enumeration")
    return [ZdVec.from_index(d, n, i) for i in range(size)]


def bell_psi(y: ZdVec) -> BellVector:
    """|Psi_y> = d^{-n/2} sum_l |l> (x) N_y|l>"""
    dim = check_dense(y.d, y.n, "bell vector")
    vector = weyl(y).matrix.T.reshape(-1) / np.sqrt(dim)
    return BellVector(y, PSI, vector)


def bell_psi_prime(x: ZdVec) -> BellVector:
    """|Psi'_x> = d^{-n/2} sum_l N_x|l> (x) |l>"""
    dim = check_dense(x.d, x.n, "bell vector")
    vector = weyl(x).matrix.reshape(-1) / np.sqrt(dim)
    return BellVector(x, PSI_PRIME, vector)


@lru_cache(maxsize=32)
def _bell_basis(d: int, n: int, kind: str) -> np.ndarray:
    make = bell_psi if kind == PSI else bell_psi_prime
    columns = [make(y).vector for y in all_labels(d, n)]
    return _freeze(np.column_stack(columns))


def bell_basis_matrix(d: int, n: int, kind: str = PSI) -> np.ndarray:
    """Unitary whose column y.index() is the Bell vector with label y"""
    check_dense(d, 2 * n, "bell basis")
    return _bell_basis(d, n, kind)
