"""
Tests for zd_symplectic - vectors, the symplectic form, subspaces and cosets.
"""

import itertools

import numpy as np
import pytest


class TestSymplecticForm:
    """Test symplectic_form and ZdVec arithmetic."""

    def test_x_and_z_pair(self):
        """<X, Z> = 1 and <Z, X> = -1 mod d."""
        from src.zd_symplectic import ZdVec, symplectic_form

        for d in (2, 3, 5):
            x, z = ZdVec(d, (1, 0)), ZdVec(d, (0, 1))
            assert symplectic_form(x, z) == 1
            assert symplectic_form(z, x) == d - 1

    def test_antisymmetric_and_alternating(self, rng):
        """<y, y'> = -<y', y> and <y, y> = 0 on random vectors."""
        from src.zd_symplectic import ZdVec, symplectic_form

        for d in (2, 3, 4):
            for _ in range(20):
                a = ZdVec.of(d, rng.integers(0, d, size=6))
                b = ZdVec.of(d, rng.integers(0, d, size=6))
                assert (symplectic_form(a, b) + symplectic_form(b, a)) % d == 0
                assert symplectic_form(a, a) == 0

    def test_bilinear(self, rng):
        """The form is additive in the first argument."""
        from src.zd_symplectic import ZdVec, symplectic_form

        d = 3
        a, b, c = (ZdVec.of(d, rng.integers(0, d, size=4)) for _ in range(3))
        assert symplectic_form(a + b, c) == (symplectic_form(a, c) + symplectic_form(b, c)) % d

    def test_mismatched_operands_raise(self):
        """Different moduli or lengths raise DimensionError."""
        from src.error_handler import DimensionError
        from src.zd_symplectic import ZdVec, symplectic_form

        with pytest.raises(DimensionError):
            symplectic_form(ZdVec(2, (1, 0)), ZdVec(3, (1, 0)))
        with pytest.raises(DimensionError):
            ZdVec(2, (1, 0)) + ZdVec(2, (1, 0, 0, 0))

    def test_out_of_range_coordinates_rejected(self):
        """Coordinates must lie in [0, d)."""
        from src.error_handler import DimensionError
        from src.zd_symplectic import ZdVec

        with pytest.raises(DimensionError):
            ZdVec(2, (2, 0))
        assert ZdVec.of(2, (3, -1)).coords == (1, 1)

    def test_index_matches_lexicographic_order(self):
        """Index order of all_vectors equals from_index order."""
        from src.zd_symplectic import ZdVec, all_vectors

        rows = all_vectors(3, 1)
        for i, row in enumerate(rows):
            assert ZdVec.from_index(3, 1, i).coords == tuple(row)
            assert ZdVec(3, tuple(int(c) for c in row)).index() == i


class TestSubspaces:
    """Test span, symplectic_dual and self-orthogonality."""

    def test_span_is_canonical(self):
        """Different generating sets of one subspace compare equal."""
        from src.zd_symplectic import Subspace, ZdVec

        a = ZdVec(2, (0, 1, 0, 1, 0, 0))
        b = ZdVec(2, (0, 0, 0, 1, 0, 1))
        assert Subspace.span(2, 3, [a, b]) == Subspace.span(2, 3, [b, a + b])
        assert Subspace.span(2, 3, [a, b, a + b]).dim == 2

    def test_dual_dimension_and_containment(self):
        """dim L-perp = 2n - dim L, and L <= L-perp for Z-type stabilizers."""
        from src.zd_symplectic import Subspace, ZdVec, is_self_orthogonal, symplectic_dual

        L = Subspace.span(2, 3, [ZdVec(2, (0, 1, 0, 1, 0, 0)), ZdVec(2, (0, 0, 0, 1, 0, 1))])
        dual = symplectic_dual(L)
        assert dual.dim == 4
        assert L <= dual
        assert is_self_orthogonal(L)

    def test_dual_is_orthogonal(self):
        """Every dual basis vector has zero form with every L basis vector."""
        from src.zd_symplectic import Subspace, ZdVec, symplectic_dual, symplectic_form

        L = Subspace.span(3, 2, [ZdVec(3, (1, 2, 0, 1))])
        for y in symplectic_dual(L).basis:
            assert all(symplectic_form(y, l) == 0 for l in L.basis)

    def test_dual_of_dual(self):
        """(L-perp)-perp = L."""
        from src.zd_symplectic import Subspace, ZdVec, symplectic_dual

        L = Subspace.span(3, 2, [ZdVec(3, (0, 1, 0, 2))])
        assert symplectic_dual(symplectic_dual(L)) == L

    def test_not_self_orthogonal_pairs(self):
        """X and Z on one site violate self-orthogonality."""
        from src.zd_symplectic import ZdVec, violating_pairs

        pairs = violating_pairs([ZdVec(2, (1, 0)), ZdVec(2, (0, 1))])
        assert pairs == [(0, 1, 1)]

    def test_non_prime_modulus_rejected(self):
        """Linear algebra over Z_4 is refused."""
        from src.error_handler import UnsupportedModulusError
        from src.zd_symplectic import Subspace, ZdVec

        with pytest.raises(UnsupportedModulusError):
            Subspace.span(4, 1, [ZdVec(4, (1, 0))])


class TestCosets:
    """Test enumerate_cosets and the character sum."""

    def test_cosets_partition_the_space(self):
        """Cosets of L-perp are disjoint and cover (Z_2)^6."""
        from src.zd_symplectic import Subspace, ZdVec, enumerate_cosets, symplectic_dual

        L = Subspace.span(2, 3, [ZdVec(2, (0, 1, 0, 1, 0, 0)), ZdVec(2, (0, 0, 0, 1, 0, 1))])
        cosets = enumerate_cosets(symplectic_dual(L))
        assert len(cosets) == 4
        seen = set()
        for coset in cosets:
            members = {m.index() for m in coset.members()}
            assert len(members) == coset.size == 16
            assert not members & seen
            seen |= members
        assert len(seen) == 64

    def test_reduce_gives_coset_label(self):
        """reduce is constant on a coset."""
        from src.zd_symplectic import Subspace, ZdVec, enumerate_cosets

        V = Subspace.span(3, 1, [ZdVec(3, (1, 1))])
        for coset in enumerate_cosets(V):
            labels = {V.reduce(m) for m in coset.members()}
            assert labels == {coset.label}

    def test_character_sum(self):
        """sum_x omega^{<x,a>} is d^{2n} at a = 0 and vanishes otherwise."""
        from src.zd_symplectic import ZdVec, character_sum

        for d, n in ((2, 1), (3, 1), (2, 2)):
            assert character_sum(ZdVec.zero(d, n)) == pytest.approx(d ** (2 * n))
            for coords in itertools.islice(itertools.product(range(d), repeat=2 * n), 1, None):
                assert abs(character_sum(ZdVec(d, coords))) < 1e-9

    def test_enumeration_guard(self):
        """d^{2n} beyond the limit raises ResourceGuardError."""
        from src.error_handler import ResourceGuardError
        from src.zd_symplectic import all_vectors

        with pytest.raises(ResourceGuardError):
            all_vectors(2, 13)

    def test_elements_array_matches_iterator(self):
        """Both element listings agree as sets."""
        from src.zd_symplectic import Subspace, ZdVec

        L = Subspace.span(3, 2, [ZdVec(3, (0, 1, 0, 2)), ZdVec(3, (1, 0, 2, 0))])
        from_iter = {v.coords for v in L.elements()}
        from_array = {tuple(int(c) for c in row) for row in L.elements_array()}
        assert from_iter == from_array
        assert len(from_iter) == 9
        assert np.all(L.elements_array() < 3)
