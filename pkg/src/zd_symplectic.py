"""
Symplectic geometry of (Z/dZ)^{2n}.

Vectors use interleaved coordinates (x1, z1, ..., xn, zn). Linear algebra
(spans, duals, cosets) is carried out over the field Z_d and therefore
requires d prime; the symplectic form and the character sum accept any
modulus d >= 2.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from src.constants import ENUMERATION_LIMIT
from src.error_handler import DimensionError, ResourceGuardError, UnsupportedModulusError

logger = logging.getLogger("teledistill.zd_symplectic")


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    return all(d % p for p in range(2, int(d ** 0.5) + 1))


def require_prime(d: int) -> None:
    if not is_prime(d):
        raise UnsupportedModulusError(f"modulus d={d} is not prime")


def check_enumeration(d: int, n: int, what: str = "enumeration") -> int:
    """Return d^{2n}, raising ResourceGuardError beyond ENUMERATION_LIMIT"""
    size = d ** (2 * n)
    if size > ENUMERATION_LIMIT:
        raise ResourceGuardError(what, size, ENUMERATION_LIMIT)
    return size


@dataclass(frozen=True)
class ZdVec:
    """Element of (Z/dZ)^{2n} in interleaved coordinates"""
    d: int
    coords: Tuple[int, ...]

    def __post_init__(self):
        if self.d < 2:
            raise DimensionError(f"modulus must be >= 2, got {self.d}")
        if len(self.coords) == 0 or len(self.coords) % 2:
            raise DimensionError(f"length must be even and positive, got {len(self.coords)}")
        if any(not 0 <= c < self.d for c in self.coords):
            raise DimensionError(f"coordinates {self.coords} not in [0, {self.d})")

    @classmethod
    def of(cls, d: int, values: Iterable[int]) -> "ZdVec":
        """Build a vector, reducing every value mod d"""
        return cls(d, tuple(int(v) % d for v in values))

    @classmethod
    def zero(cls, d: int, n: int) -> "ZdVec":
        return cls(d, (0,) * (2 * n))

    @classmethod
    def from_pairs(cls, d: int, pairs: Iterable[Sequence[int]]) -> "ZdVec":
        """Build from labels [(x1, z1), ..., (xn, zn)]"""
        return cls.of(d, [v for pair in pairs for v in pair])

    @classmethod
    def from_index(cls, d: int, n: int, index: int) -> "ZdVec":
        """Inverse of `index`: big-endian base-d digits"""
        digits = []
        for _ in range(2 * n):
            index, r = divmod(index, d)
            digits.append(r)
        return cls(d, tuple(reversed(digits)))

    @property
    def n(self) -> int:
        return len(self.coords) // 2

    @property
    def x(self) -> Tuple[int, ...]:
        return self.coords[0::2]

    @property
    def z(self) -> Tuple[int, ...]:
        return self.coords[1::2]

    def pairs(self) -> List[Tuple[int, int]]:
        return list(zip(self.x, self.z))

    def index(self) -> int:
        """Big-endian base-d integer; index order equals lexicographic order"""
        idx = 0
        for c in self.coords:
            idx = idx * self.d + c
        return idx

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "ZdVec") -> None:
        if self.d != other.d or len(self.coords) != len(other.coords):
            raise DimensionError(
                f"mismatched operands: d={self.d}, len={len(self.coords)} vs "
                f"d={other.d}, len={len(other.coords)}"
            )

    def __add__(self, other: "ZdVec") -> "ZdVec":
        self._check(other)
        return ZdVec.of(self.d, (a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ZdVec") -> "ZdVec":
        self._check(other)
        return ZdVec.of(self.d, (a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ZdVec":
        return ZdVec.of(self.d, (-a for a in self.coords))

    def scale(self, c: int) -> "ZdVec":
        return ZdVec.of(self.d, (c * a for a in self.coords))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def symplectic_form(y: ZdVec, y2: ZdVec) -> int:
    """<y, y2> = sum_i x_i z'_i - z_i x'_i  (mod d)"""
    y._check(y2)
    total = sum(x * z2 - z * x2 for x, z, x2, z2 in zip(y.x, y.z, y2.x, y2.z))
    return total % y.d


def _form_matrix(n: int) -> np.ndarray:
    """Matrix Omega with <y, y2> = y^T Omega y2"""
    omega = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        omega[2 * i, 2 * i + 1] = 1
        omega[2 * i + 1, 2 * i] = -1
    return omega


def all_vectors(d: int, n: int) -> np.ndarray:
    """All of (Z_d)^{2n} as rows, in lexicographic (= index) order"""
    check_enumeration(d, n, "space enumeration")
    return np.indices((d,) * (2 * n)).reshape(2 * n, -1).T.astype(np.int64)


def _row_reduce(matrix: np.ndarray, d: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over Z_d (d prime), pivots normalized to 1"""
    m = np.array(matrix, dtype=np.int64) % d
    if m.ndim != 2 or m.shape[0] == 0:
        return m.reshape(0, m.shape[-1] if m.ndim == 2 else 0), []
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(m[r:, c])[0]
        if nonzero.size == 0:
            continue
        p = r + int(nonzero[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, d)) % d
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % d
        pivots.append(c)
        r += 1
    return m[:r], pivots


@dataclass(frozen=True)
class Subspace:
    """Subspace of (Z_d)^{2n}, d prime, stored by its canonical RREF basis.

    Build instances with `Subspace.span`; equal subspaces then compare equal.
    """
    d: int
    n: int
    basis: Tuple[ZdVec, ...]

    @classmethod
    def span(cls, d: int, n: int, vectors: Iterable[ZdVec]) -> "Subspace":
        require_prime(d)
        rows = []
        for v in vectors:
            if v.d != d or v.n != n:
                raise DimensionError(f"vector {v} is not in (Z_{d})^{2 * n}")
            rows.append(v.coords)
        if not rows:
            return cls(d, n, ())
        reduced, _ = _row_reduce(np.array(rows), d)
        return cls(d, n, tuple(ZdVec(d, tuple(int(c) for c in row)) for row in reduced))

    @classmethod
    def zero(cls, d: int, n: int) -> "Subspace":
        return cls.span(d, n, [])

    @classmethod
    def full(cls, d: int, n: int) -> "Subspace":
        eye = np.eye(2 * n, dtype=np.int64)
        return cls.span(d, n, (ZdVec(d, tuple(int(c) for c in row)) for row in eye))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> List[int]:
        return [next(i for i, c in enumerate(b.coords) if c) for b in self.basis]

    def basis_array(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, 2 * self.n), dtype=np.int64)
        return np.array([b.coords for b in self.basis], dtype=np.int64)

    def reduce(self, y: ZdVec) -> ZdVec:
        """Canonical coset label of y: y minus its component along the pivots"""
        coords = list(y.coords)
        for b, p in zip(self.basis, self.pivots):
            c = coords[p]
            if c:
                coords = [(a - c * bb) % self.d for a, bb in zip(coords, b.coords)]
        return ZdVec(self.d, tuple(coords))

    def contains(self, y: ZdVec) -> bool:
        return self.reduce(y).is_zero()

    def elements(self) -> Iterator[ZdVec]:
        """All d^dim elements, generated as combinations of the basis"""
        check_enumeration(self.d, self.n, "subspace enumeration")
        basis = self.basis_array()
        for coeffs in itertools.product(range(self.d), repeat=self.dim):
            vec = np.array(coeffs, dtype=np.int64) @ basis if self.dim else np.zeros(2 * self.n, dtype=np.int64)
            yield ZdVec(self.d, tuple(int(c) % self.d for c in vec))

    def elements_array(self) -> np.ndarray:
        """Elements as an integer array of shape (d^dim, 2n)"""
        check_enumeration(self.d, self.n, "subspace enumeration")
        if self.dim == 0:
            return np.zeros((1, 2 * self.n), dtype=np.int64)
        coeffs = np.indices((self.d,) * self.dim).reshape(self.dim, -1).T
        return (coeffs @ self.basis_array()) % self.d

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)


def symplectic_dual(L: Subspace) -> Subspace:
    """L-perp = {y : <y, l> = 0 for all l in L}; dim = 2n - dim L"""
    require_prime(L.d)
    d, n = L.d, L.n
    if L.dim == 0:
        return Subspace.full(d, n)
    # <y, l> = y . (Omega l), so L-perp is the null space of rows (Omega l)^T
    constraints = (L.basis_array() @ _form_matrix(n).T) % d
    reduced, pivots = _row_reduce(constraints, d)
    free = [c for c in range(2 * n) if c not in pivots]
    vectors = []
    for f in free:
        v = np.zeros(2 * n, dtype=np.int64)
        v[f] = 1
        for row, p in zip(reduced, pivots):
            v[p] = (-row[f]) % d
        vectors.append(ZdVec(d, tuple(int(c) for c in v)))
    return Subspace.span(d, n, vectors)


def is_self_orthogonal(L: Subspace) -> bool:
    return not violating_pairs(L.basis)


def violating_pairs(vectors: Sequence[ZdVec]) -> List[Tuple[int, int, int]]:
    """Index pairs (i, j, form) with nonzero symplectic form"""
    out = []
    for i, j in itertools.combinations(range(len(vectors)), 2):
        value = symplectic_form(vectors[i], vectors[j])
        if value:
            out.append((i, j, value))
    return out


@dataclass(frozen=True)
class Coset:
    """Coset label + V; the label is the canonical representative of V.reduce"""
    label: ZdVec
    subspace: Subspace

    def members(self) -> Iterator[ZdVec]:
        for v in self.subspace.elements():
            yield self.label + v

    def members_array(self) -> np.ndarray:
        return (self.subspace.elements_array() + self.label.as_array()) % self.label.d

    @property
    def size(self) -> int:
        return self.label.d ** self.subspace.dim


def enumerate_cosets(V: Subspace) -> List[Coset]:
    """The d^{2n - dim V} cosets of V, labelled by vectors supported off V's pivots"""
    require_prime(V.d)
    check_enumeration(V.d, V.n, "coset enumeration")
    free = [c for c in range(2 * V.n) if c not in V.pivots]
    cosets = []
    for values in itertools.product(range(V.d), repeat=len(free)):
        coords = [0] * (2 * V.n)
        for c, v in zip(free, values):
            coords[c] = v
        cosets.append(Coset(ZdVec(V.d, tuple(coords)), V))
    logger.debug("enumerated %d cosets of a %d-dim subspace", len(cosets), V.dim)
    return cosets


def character_sum(a: ZdVec) -> complex:
    """sum_x omega^{<x, a>}: d^{2n} for a = 0, zero otherwise"""
    d, n = a.d, a.n
    xs = all_vectors(d, n)
    phases = (xs @ _form_matrix(n) @ a.as_array()) % d
    return complex(np.exp(2j * np.pi * phases / d).sum())
