"""
Tests for noise - Pauli distributions, Markov analysis, rate bounds and the
error exponent.
"""

import json
import math

import numpy as np
import pytest


class TestPauliDistribution:
    """Test construction, validation and evaluation of P_n."""

    def test_iid_table_is_product(self):
        """iid table entries are products of single-letter probabilities."""
        from src.noise import PauliDistribution, prob
        from src.zd_symplectic import ZdVec

        dist = PauliDistribution.iid(2, 2, [0.7, 0.1, 0.15, 0.05])
        table = dist.to_table()
        assert table.sum() == pytest.approx(1.0)
        x = ZdVec.from_pairs(2, [(1, 0), (0, 1)])
        assert table[x.index()] == pytest.approx(0.15 * 0.1)
        assert prob(dist, x) == pytest.approx(0.15 * 0.1)

    def test_markov_prob_matches_table(self):
        """prob() and to_table() agree for a Markov measure."""
        from src.noise import example1_chain, prob
        from src.zd_symplectic import ZdVec

        dist = example1_chain([0.1, 0.2, 0.05, 0.15], 3)
        table = dist.to_table()
        assert table.sum() == pytest.approx(1.0)
        for i in (0, 5, 27, 63):
            assert prob(dist, ZdVec.from_index(2, 3, i)) == pytest.approx(table[i])

    def test_prob_accepts_pairs(self):
        """Labels may be given as a sequence of [i, j] pairs."""
        from src.noise import PauliDistribution, prob

        dist = PauliDistribution.iid(3, 1, np.full(9, 1 / 9))
        assert prob(dist, [(2, 1)]) == pytest.approx(1 / 9)

    def test_rejects_unnormalized(self):
        """Probabilities must sum to one; the field is named."""
        from src.error_handler import InvalidInputError
        from src.noise import PauliDistribution

        with pytest.raises(InvalidInputError, match="single_letter"):
            PauliDistribution.iid(2, 1, [0.5, 0.5, 0.5, 0.0])

    def test_rejects_negative_transition_row(self):
        """Each transition row is a distribution."""
        from src.error_handler import InvalidInputError
        from src.noise import PauliDistribution

        t = np.eye(4)
        t[1] = [1.2, -0.2, 0.0, 0.0]
        with pytest.raises(InvalidInputError, match=r"transition\[1\]"):
            PauliDistribution.markov(2, 2, [1, 0, 0, 0], t)

    @pytest.mark.parametrize("form", ["iid", "markov", "explicit"])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_prob_sums_to_one(self, form, n, rng):
        """Summing prob() over every label in (Z_2)^{2n} gives 1."""
        from src.noise import PauliDistribution, example1_chain, prob
        from src.zd_symplectic import ZdVec

        if form == "iid":
            dist = PauliDistribution.iid(2, n, [0.7, 0.1, 0.15, 0.05])
        elif form == "markov":
            dist = example1_chain([0.1, 0.2, 0.05, 0.15], n)
        else:
            dist = PauliDistribution.explicit(2, n, rng.dirichlet(np.ones(4 ** n)))
        total = sum(prob(dist, ZdVec.from_index(2, n, i)) for i in range(4 ** n))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_wrong_label_space(self):
        """A label from another (d, n) raises DimensionError."""
        from src.error_handler import DimensionError
        from src.noise import PauliDistribution, prob
        from src.zd_symplectic import ZdVec

        with pytest.raises(DimensionError):
            prob(PauliDistribution.uniform(2, 2), ZdVec.zero(2, 1))


class TestMarkov:
    """Test stationary, communicating classes and the Markov bound."""

    def test_example1_stationary_law(self):
        """Equal error rates give q = (1 - eps, eps/3, eps/3, eps/3)."""
        from src.noise import example1_transition, stationary

        analysis = stationary(example1_transition([0.1] * 4))
        assert analysis.irreducible
        assert np.allclose(analysis.unique_stationary(), [0.9, 1 / 30, 1 / 30, 1 / 30])

    def test_stationary_matches_power_iteration(self):
        """Null-space solution agrees with repeated multiplication."""
        from src.noise import example1_transition, stationary

        t = example1_transition([0.1, 0.2, 0.05, 0.15])
        q = np.full(4, 0.25)
        for _ in range(500):
            q = q @ t
        assert np.allclose(stationary(t).unique_stationary(), q, atol=1e-12)

    def test_reducible_chain_classes(self, templates_dir):
        """phase_markov: {0, 1} closed with law (0.75, 0.25); {2, 3} transient."""
        from src.noise import load_noise, stationary

        analysis = stationary(load_noise(templates_dir / "noise" / "phase_markov.json"))
        assert not analysis.irreducible
        closed = dict(zip(analysis.classes, analysis.closed))
        assert closed[(0, 1)] is True
        assert closed[(2, 3)] is False
        assert np.allclose(analysis.stationary[(0, 1)], [0.75, 0.25, 0.0, 0.0])
        assert analysis.unique_stationary() is not None

    def test_example1_bound_value(self):
        """eps = 0.1 on every letter gives 0.372508 bits."""
        from src.noise import example1_bound, example1_transition, markov_bound

        q = [0.9, 1 / 30, 1 / 30, 1 / 30]
        assert example1_bound([0.1] * 4, q) == pytest.approx(0.372508, abs=1e-6)
        assert markov_bound(example1_transition([0.1] * 4), q) == pytest.approx(0.372508, abs=1e-6)

    def test_chain_bound_matches_closed_form(self):
        """Letter-dependent eps: distribution_bound equals the closed form at the power-iterated q."""
        from src.noise import distribution_bound, example1_bound, example1_chain, example1_transition

        eps = [0.1, 0.2, 0.05, 0.15]
        t = example1_transition(eps)
        q = np.full(4, 0.25)
        for _ in range(500):
            q = q @ t
        report = distribution_bound(example1_chain(eps, 3))
        assert report.kind == "markov"
        assert report.value == pytest.approx(example1_bound(eps, q), abs=1e-8)

    def test_example1_bound_decreasing(self):
        """Equal error rates: the bound strictly decreases on (0, 3/4)."""
        from src.noise import example1_bound, example1_transition, stationary

        values = []
        for e in np.linspace(0.01, 0.74, 20):
            q = stationary(example1_transition([e] * 4)).unique_stationary()
            values.append(example1_bound([e] * 4, q))
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_markov_bound_requires_stationary_q(self):
        """A non-stationary q is refused."""
        from src.error_handler import InvalidInputError
        from src.noise import example1_transition, markov_bound

        with pytest.raises(InvalidInputError, match="q"):
            markov_bound(example1_transition([0.1] * 4), [0.25] * 4)

    def test_phase_only_bound(self, templates_dir):
        """Phase-only closed class started in its stationary law: 1 - H(P|q)."""
        from src.noise import binary_entropy, distribution_bound, example2_bound, load_noise

        dist = load_noise(templates_dir / "noise" / "phase_markov.json")
        expected = 1 - (0.75 * binary_entropy(0.1) + 0.25 * binary_entropy(0.3))
        assert example2_bound(dist) == pytest.approx(expected)
        report = distribution_bound(dist)
        assert report.kind == "markov"
        assert report.value == pytest.approx(expected)
        assert "tight" in report.note

    def test_example2_rejects_non_phase_class(self):
        """A chain whose closed class contains X letters is refused."""
        from src.error_handler import InvalidInputError
        from src.noise import example1_chain, example2_bound

        with pytest.raises(InvalidInputError):
            example2_bound(example1_chain([0.1] * 4, 2))


class TestBounds:
    """Test the hashing bound and distribution_bound dispatch."""

    def test_hashing_bound_bitflip(self):
        """1 - h(0.1) for P(X) = 0.1."""
        from src.noise import binary_entropy, hashing_bound

        assert hashing_bound([0.9, 0.0, 0.1, 0.0]) == pytest.approx(1 - binary_entropy(0.1))

    def test_hashing_bound_base_d(self):
        """Uniform noise gives bound -1 in base-d units."""
        from src.noise import hashing_bound

        assert hashing_bound(np.full(9, 1 / 9)) == pytest.approx(-1.0)

    def test_vacuous_flag(self):
        """Non-positive bounds are flagged vacuous."""
        from src.noise import PauliDistribution, distribution_bound

        report = distribution_bound(PauliDistribution.uniform(2, 1))
        assert report.kind == "hashing"
        assert report.vacuous

    def test_explicit_multi_letter_has_no_bound(self):
        """Explicit n > 1 tables report no bound, with a note."""
        from src.noise import PauliDistribution, distribution_bound
        from src.zd_symplectic import ZdVec

        report = distribution_bound(PauliDistribution.point_mass(ZdVec.zero(2, 2)))
        assert report.value is None
        assert report.note

    def test_single_letter_from_state(self):
        """A Bell-diagonal pair state returns its own probabilities."""
        from src.channels import bell_diagonal_state
        from src.noise import PauliDistribution, single_letter_from_state

        p = [0.6, 0.2, 0.15, 0.05]
        sigma = bell_diagonal_state(PauliDistribution.iid(2, 1, p))
        assert np.allclose(single_letter_from_state(sigma, 2), p, atol=1e-12)


class TestErrorExponent:
    """Test error_exponent against its closed-form cases and a grid oracle."""

    def test_zero_above_hashing_rate(self):
        """E(R, P) = 0 when R >= 1 - H(P)."""
        from src.noise import error_exponent, hashing_bound

        p = [0.9, 0.05, 0.03, 0.02]
        assert error_exponent(hashing_bound(p) + 0.01, p) == 0.0
        assert error_exponent(1.0, p) == 0.0

    def test_positive_below_hashing_rate(self):
        """E(R, P) > 0 a little below 1 - H(P)."""
        from src.noise import error_exponent, hashing_bound

        p = [0.9, 0.05, 0.03, 0.02]
        assert error_exponent(hashing_bound(p) - 0.05, p) > 1e-6

    def test_point_mass(self):
        """P concentrated on one letter: E(R) = 1 - R."""
        from src.noise import error_exponent

        assert error_exponent(0.5, [1.0, 0.0, 0.0, 0.0]) == pytest.approx(0.5, abs=1e-9)

    def test_rate_out_of_range(self):
        """R outside [0, 1] is refused."""
        from src.error_handler import InvalidInputError
        from src.noise import error_exponent

        with pytest.raises(InvalidInputError, match="R"):
            error_exponent(1.5, [0.9, 0.05, 0.03, 0.02])

    @pytest.mark.parametrize("R,P,on_grid", [
        # P proportional to the square of (0.9, 0.05, 0.03, 0.02): below the
        # critical rate the minimizer is that grid point
        (0.0, [0.81, 0.0025, 0.0009, 0.0004], True),
        (0.1, [0.81, 0.0025, 0.0009, 0.0004], True),
        (0.3, [0.81, 0.0025, 0.0009, 0.0004], True),
        (0.2, [0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3], False),
        (0.5, [0.95, 0.02, 0.02, 0.01], False),
    ])
    def test_matches_grid_oracle(self, R, P, on_grid):
        """Optimizer never exceeds the 0.002 grid minimum, and matches it when the minimizer is on the grid."""
        from src.noise import error_exponent, exponent_grid

        P = np.asarray(P) / np.sum(P)
        opt = error_exponent(R, P)
        grid = exponent_grid(R, P, resolution=0.002)
        assert opt > 0.0
        assert opt <= grid + 1e-9
        if on_grid:
            assert grid - opt <= 1e-4
        else:
            assert grid - opt <= 5e-3

    def test_curve_is_non_increasing(self):
        """E(R, P) does not grow with R."""
        from src.noise import exponent_curve

        values = [e for _, e in exponent_curve([0.9, 0.05, 0.03, 0.02], np.linspace(0, 0.5, 11))]
        assert all(a >= b - 1e-9 for a, b in zip(values, values[1:]))

    def test_grid_guard(self):
        """Too fine a grid raises ResourceGuardError."""
        from src.error_handler import ResourceGuardError
        from src.noise import exponent_grid

        with pytest.raises(ResourceGuardError):
            exponent_grid(0.1, np.full(9, 1 / 9), resolution=0.001)


class TestNoiseFiles:
    """Test parse_noise, load_noise and dump_noise."""

    def test_load_templates(self, templates_dir):
        """Every shipped noise model parses."""
        from src.noise import load_noise

        for path in sorted((templates_dir / "noise").glob("*.json")):
            dist = load_noise(path)
            assert dist.to_table().sum() == pytest.approx(1.0)

    def test_letter_keys(self, templates_dir):
        """x01.json: iid table keyed by "[i, j]"."""
        from src.noise import load_noise

        dist = load_noise(templates_dir / "noise" / "x01.json")
        assert np.allclose(dist.single_letter, [0.9, 0.0, 0.1, 0.0])

    def test_epsilon_shortcut_starts_stationary(self, templates_dir):
        """A Markov file given by epsilon starts in the stationary law."""
        from src.noise import load_noise

        dist = load_noise(templates_dir / "noise" / "example1.json")
        assert np.allclose(dist.initial, [0.9, 1 / 30, 1 / 30, 1 / 30])

    def test_explicit_roundtrip_through_json(self):
        """dump_noise output, serialized and parsed again, gives the same table."""
        from src.noise import PauliDistribution, dump_noise, parse_noise

        table = np.zeros(16)
        table[[0, 6, 9]] = [0.5, 0.3, 0.2]
        dist = PauliDistribution.explicit(2, 2, table)
        again = parse_noise(json.loads(json.dumps(dump_noise(dist))))
        assert np.allclose(again.to_table(), table)

    def test_missing_field(self):
        """Missing keys name the field."""
        from src.error_handler import InvalidInputError
        from src.noise import parse_noise

        with pytest.raises(InvalidInputError, match="form"):
            parse_noise({"d": 2, "n": 1})

    def test_bad_label(self):
        """Label entries outside Z_d are refused."""
        from src.error_handler import InvalidInputError
        from src.noise import parse_noise

        with pytest.raises(InvalidInputError, match="table"):
            parse_noise({"d": 2, "n": 1, "form": "explicit", "table": {"[[0, 2]]": 1.0}})

    def test_invalid_json(self, tmp_path):
        """Malformed JSON becomes InvalidInputError."""
        from src.error_handler import InvalidInputError
        from src.noise import load_noise

        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InvalidInputError):
            load_noise(path)

    def test_reducible_chain_needs_initial(self):
        """Without an initial law a reducible chain is ambiguous."""
        from src.error_handler import InvalidInputError
        from src.noise import parse_noise

        t = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        with pytest.raises(InvalidInputError, match="initial"):
            parse_noise({"d": 2, "n": 2, "form": "markov", "transition": t})

    def test_entropy_units(self):
        """Uniform distribution over d^2 letters has entropy 2 in base d."""
        from src.noise import entropy

        assert entropy(np.full(9, 1 / 9)) == pytest.approx(2.0)
        assert entropy([0.5, 0.5, 0.0, 0.0]) == pytest.approx(1.0)
        assert math.isclose(entropy([1.0, 0.0, 0.0, 0.0]), 0.0, abs_tol=1e-12)
