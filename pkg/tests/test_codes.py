"""
Tests for codes - code projectors, syndromes, representatives and the two
ways of computing the code entanglement fidelity.
"""

import itertools

import numpy as np
import pytest


class TestBuildCode:
    """Test build_code and the syndrome projectors."""

    def test_bitflip_projector(self, bitflip_code):
        """Pi = |000><000| + |111><111|."""
        expected = np.zeros((8, 8))
        expected[0, 0] = expected[7, 7] = 1
        assert np.allclose(bitflip_code.projector, expected, atol=1e-12)
        assert bitflip_code.K == 2
        assert bitflip_code.rate == pytest.approx(1 / 3)

    def test_projector_is_idempotent(self, templates_dir):
        """Pi^2 = Pi and Tr Pi = K for the qutrit code."""
        from src.codes import load_code

        code = load_code(templates_dir / "codes" / "qutrit.json")
        proj = code.projector
        assert np.allclose(proj @ proj, proj, atol=1e-10)
        assert np.trace(proj).real == pytest.approx(code.K)
        assert code.K == 3

    def test_stabilizers_act_as_eigenvalues(self, templates_dir):
        """N_l Pi is a phase times Pi for every l in L."""
        from src.codes import load_code, stabilizer_phases
        from src.weyl import weyl

        code = load_code(templates_dir / "codes" / "qutrit.json")
        for l, chi in stabilizer_phases(code):
            assert abs(chi) == pytest.approx(1.0)
            assert np.allclose(weyl(l).matrix @ code.projector, chi * code.projector, atol=1e-10)

    def test_syndrome_projectors_partition_identity(self, bitflip_code):
        """sum_s Pi_s = I, and N_x maps Pi onto Pi_{s(x)}."""
        from src.codes import syndrome, syndrome_projector
        from src.weyl import weyl
        from src.zd_symplectic import ZdVec

        total = sum(syndrome_projector(bitflip_code, s) for s in itertools.product(range(2), repeat=2))
        assert np.allclose(total, np.eye(8), atol=1e-12)
        x = ZdVec(2, (1, 0, 0, 0, 0, 0))
        nx = weyl(x).matrix
        moved = nx @ bitflip_code.projector @ nx.conj().T
        assert np.allclose(moved, syndrome_projector(bitflip_code, syndrome(bitflip_code, x)), atol=1e-12)

    def test_not_self_orthogonal(self):
        """X and Z on one site cannot both stabilize."""
        from src.codes import build_code
        from src.error_handler import NotSelfOrthogonalError
        from src.zd_symplectic import Subspace, ZdVec

        L = Subspace.span(2, 1, [ZdVec(2, (1, 0)), ZdVec(2, (0, 1))])
        with pytest.raises(NotSelfOrthogonalError) as exc:
            build_code(L)
        assert exc.value.field == "stabilizer_basis"

    def test_parse_reports_violating_pair(self):
        """The offending indices are reported from the file basis."""
        from src.codes import parse_code
        from src.error_handler import NotSelfOrthogonalError

        data = {"d": 2, "n": 2, "stabilizer_basis": [[0, 1, 0, 1], [1, 0, 0, 0], [1, 0, 1, 0]]}
        with pytest.raises(NotSelfOrthogonalError) as exc:
            parse_code(data)
        assert exc.value.pair == (0, 1)

    def test_parse_missing_field(self):
        """Missing keys name the field."""
        from src.codes import parse_code
        from src.error_handler import InvalidInputError

        with pytest.raises(InvalidInputError, match="stabilizer_basis"):
            parse_code({"d": 2, "n": 1})

    def test_dependent_basis_is_accepted(self):
        """A linearly dependent basis spans the same code."""
        from src.codes import parse_code

        code = parse_code({"d": 2, "n": 3, "stabilizer_basis": [
            [0, 1, 0, 1, 0, 0], [0, 0, 0, 1, 0, 1], [0, 1, 0, 0, 0, 1]]})
        assert code.k == 2

    def test_non_prime_modulus(self):
        """Codes over Z_4 are refused."""
        from src.codes import parse_code
        from src.error_handler import UnsupportedModulusError

        with pytest.raises(UnsupportedModulusError):
            parse_code({"d": 4, "n": 1, "stabilizer_basis": [[0, 1]]})

    def test_trivial_code(self):
        """L = {0} gives the whole space and identity decoding."""
        from src.codes import decoder, trivial_code

        code = trivial_code(3, 1)
        assert code.K == 3
        assert np.allclose(code.projector, np.eye(3))
        ops = decoder(code).kraus_ops
        assert len(ops) == 1 and np.allclose(ops[0], np.eye(3))


class TestRepresentatives:
    """Test choose_reps, correctable_set and kl_check."""

    def test_bitflip_reps(self, bitflip_code, x_noise):
        """Maximum-likelihood representatives are I, X1, X2, X3."""
        from src.codes import choose_reps
        from src.zd_symplectic import ZdVec

        reps = set(v.coords for v in choose_reps(bitflip_code, x_noise).values())
        assert reps == {
            (0, 0, 0, 0, 0, 0),
            (1, 0, 0, 0, 0, 0),
            (0, 0, 1, 0, 0, 0),
            (0, 0, 0, 0, 1, 0),
        }
        assert ZdVec.zero(2, 3).coords in reps

    def test_reps_cover_every_syndrome(self, bitflip_code, x_noise):
        """One representative per syndrome, each with that syndrome."""
        from src.codes import choose_reps, syndrome

        reps = choose_reps(bitflip_code, x_noise)
        assert len(reps) == 4
        for s, x in reps.items():
            assert syndrome(bitflip_code, x) == s

    def test_reps_are_maximum_likelihood(self, bitflip_code):
        """Brute force over each coset agrees with the chosen representative's weight."""
        from src.codes import choose_reps, syndrome
        from src.noise import PauliDistribution, prob
        from src.zd_symplectic import all_vectors, ZdVec

        dist = PauliDistribution.iid(2, 3, [0.8, 0.05, 0.1, 0.05])
        reps = choose_reps(bitflip_code, dist)
        stabilizers = list(bitflip_code.L.elements())

        def weight(x):
            return sum(prob(dist, x + l) for l in stabilizers)

        best = {}
        for row in all_vectors(2, 3):
            x = ZdVec(2, tuple(int(c) for c in row))
            s = syndrome(bitflip_code, x)
            best[s] = max(best.get(s, 0.0), weight(x))
        for s, x in reps.items():
            assert weight(x) == pytest.approx(best[s], abs=1e-15)

    def test_correctable_set_size_and_probability(self, bitflip_code, x_noise):
        """|J| = |J0| |L| = 16 and P_n(J) = 0.9^3 + 3 * 0.9^2 * 0.1 = 0.972."""
        from src.codes import choose_reps, correctable_set

        code = bitflip_code.with_reps(choose_reps(bitflip_code, x_noise))
        J = correctable_set(code)
        assert len(J) == 16
        assert J.probability(x_noise) == pytest.approx(0.972)

    def test_knill_laflamme(self, bitflip_code, x_noise):
        """J satisfies the KL condition; adding a second bit flip breaks it."""
        from src.codes import choose_reps, correctable_set, kl_check
        from src.zd_symplectic import ZdVec

        code = bitflip_code.with_reps(choose_reps(bitflip_code, x_noise))
        J = correctable_set(code)
        assert kl_check(code, J)
        assert not kl_check(code, list(J.members) + [ZdVec(2, (0, 1, 0, 0, 0, 0)), ZdVec(2, (1, 0, 1, 0, 0, 0))])

    def test_reps_required(self, bitflip_code):
        """Decoding without representatives is refused."""
        from src.codes import correctable_set, decoder
        from src.error_handler import InvalidInputError

        with pytest.raises(InvalidInputError):
            decoder(bitflip_code)
        with pytest.raises(InvalidInputError):
            correctable_set(bitflip_code)


class TestCodeFidelity:
    """Test code_entanglement_fidelity and the corollary bounds."""

    def test_bitflip_two_ways(self, bitflip_code, x_noise):
        """F_e of the decoded channel equals P_n(J) = 0.972."""
        from src.codes import code_entanglement_fidelity

        way1, way2 = code_entanglement_fidelity(bitflip_code, x_noise)
        assert way1 == pytest.approx(0.972, abs=1e-12)
        assert way2 == pytest.approx(0.972, abs=1e-12)

    @pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
    def test_bitflip_across_error_rates(self, bitflip_code, eps):
        """F_e = P_n(J) = (1 - eps)^3 + 3 (1 - eps)^2 eps."""
        from src.codes import code_entanglement_fidelity
        from src.noise import PauliDistribution

        dist = PauliDistribution.iid(2, 3, [1 - eps, 0.0, eps, 0.0])
        way1, way2 = code_entanglement_fidelity(bitflip_code, dist)
        expected = (1 - eps) ** 3 + 3 * (1 - eps) ** 2 * eps
        assert way1 == pytest.approx(expected, abs=1e-12)
        assert way2 == pytest.approx(expected, abs=1e-12)

    def test_two_ways_under_bit_flip_markov_noise(self, bitflip_code):
        """Identity holds for a chain that only emits I and X."""
        from src.codes import code_entanglement_fidelity
        from src.noise import PauliDistribution

        # letters in index order: I, Z, X, XZ; rows for Z and XZ are never reached
        t = np.array([
            [0.9, 0.0, 0.1, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.4, 0.0, 0.6, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ])
        dist = PauliDistribution.markov(2, 3, [0.8, 0.0, 0.2, 0.0], t)
        way1, way2 = code_entanglement_fidelity(bitflip_code, dist)
        assert way1 == pytest.approx(way2, abs=1e-10)
        assert 0.0 < way2 < 1.0

    def test_two_ways_under_markov_noise(self, bitflip_code):
        """Identity holds for correlated noise."""
        from src.codes import code_entanglement_fidelity
        from src.noise import example1_chain

        way1, way2 = code_entanglement_fidelity(bitflip_code, example1_chain([0.1, 0.2, 0.05, 0.15], 3))
        assert way1 == pytest.approx(way2, abs=1e-10)

    def test_two_ways_qutrit(self, templates_dir):
        """Identity holds for the qutrit code under depolarizing noise."""
        from src.codes import code_entanglement_fidelity, load_code
        from src.noise import load_noise

        code = load_code(templates_dir / "codes" / "qutrit.json")
        dist = load_noise(templates_dir / "noise" / "depolarizing_qutrit.json")
        way1, way2 = code_entanglement_fidelity(code, dist)
        assert way1 == pytest.approx(way2, abs=1e-10)

    def test_decoder_recovers_every_correctable_error(self, bitflip_code, x_noise, templates_dir):
        """Decoder after N_x returns each code basis vector exactly for all x in J."""
        from src.codes import choose_reps, correctable_set, decoder, load_code
        from src.noise import load_noise
        from src.quantum_state import KrausChannel, pure_fidelity
        from src.weyl import weyl

        qutrit = load_code(templates_dir / "codes" / "qutrit.json")
        qutrit_noise = load_noise(templates_dir / "noise" / "depolarizing_qutrit.json")
        for code, dist in ((bitflip_code, x_noise), (qutrit, qutrit_noise)):
            code = code.with_reps(choose_reps(code, dist))
            recover = decoder(code)
            basis = code.code_basis()
            for x in correctable_set(code).members:
                ch = recover.after(KrausChannel.unitary(weyl(x).matrix))
                for j in range(code.K):
                    assert pure_fidelity(basis[:, j], ch) == pytest.approx(1.0, abs=1e-9), x

    def test_logical_error_is_not_corrected(self, bitflip_code, x_noise):
        """X1 X2 decodes to logical X, which maps |000> to |111>."""
        from src.codes import choose_reps, decoder
        from src.quantum_state import KrausChannel, pure_fidelity
        from src.weyl import weyl
        from src.zd_symplectic import ZdVec

        code = bitflip_code.with_reps(choose_reps(bitflip_code, x_noise))
        error = KrausChannel.unitary(weyl(ZdVec(2, (1, 0, 1, 0, 0, 0))).matrix)
        zero = np.zeros(8)
        zero[0] = 1
        assert pure_fidelity(zero, decoder(code).after(error)) == pytest.approx(0.0, abs=1e-12)

    def test_corollary_bounds(self):
        """(3/2 (1 - P), 1 - P)."""
        from src.codes import corollary1_bounds

        loose, tight = corollary1_bounds(0.972)
        assert loose == pytest.approx(0.042)
        assert tight == pytest.approx(0.028)
