import numpy as np
import pytest

from fplreg.errors import RankDeficient
from fplreg.fpca import cross_moment, gram_eigensystem, pc_scores
from fplreg.funcspace import Curve, Grid, fourier_basis, inner_product, l2_norm
from fplreg.simstudy import SimConfig, generate

UNIT = Grid(0.0, 1.0, 201)


def basis(j):
    return fourier_basis(j, UNIT)


def random_curves(seed, n, grid=UNIT):
    rng = np.random.default_rng(seed)
    return [Curve(grid, rng.normal(size=grid.num_points)) for _ in range(n)]


class TestCrossMoment:
    def test_zero_responses(self):
        delta = cross_moment([basis(1), basis(2)], np.zeros(2)).delta
        assert np.all(delta.values == 0.0)

    def test_two_term_average(self):
        delta = cross_moment([basis(1), basis(2)], np.array([2.0, 4.0])).delta
        expect = basis(1) + 2.0 * basis(2)
        np.testing.assert_allclose(delta.values, expect.values, atol=1e-12)

    def test_single_term(self):
        delta = cross_moment([basis(1)], np.array([2.0])).delta
        np.testing.assert_allclose(delta.values, 2.0 * basis(1).values, atol=1e-12)


class TestGramEigensystem:
    def test_reflection_pair(self):
        # Gram matrix [[0.5, -0.5], [-0.5, 0.5]]: eigenvalues {1, 0}
        sys = gram_eigensystem([basis(1), -basis(1)], m_max=1)
        assert sys.eigenvalues[0] == pytest.approx(1.0, abs=1e-6)
        diff = min(
            l2_norm(sys.eigenfunctions[0] - basis(1)),
            l2_norm(sys.eigenfunctions[0] + basis(1)),
        )
        assert diff <= 1e-6

    def test_reflection_pair_rank_deficient(self):
        with pytest.raises(RankDeficient) as err:
            gram_eigensystem([basis(1), -basis(1)], m_max=2)
        assert err.value.achievable_rank == 1

    def test_diagonal_gram_case(self):
        sys = gram_eigensystem([2.0 * basis(1), basis(2)], m_max=2)
        np.testing.assert_allclose(sys.eigenvalues, [2.0, 0.5], atol=1e-6)
        for phi, ref in zip(sys.eigenfunctions, [basis(1), basis(2)]):
            assert min(l2_norm(phi - ref), l2_norm(phi + ref)) <= 1e-6

    def test_all_zero_curves(self):
        zeros = [Curve.zero(UNIT)] * 3
        with pytest.raises(RankDeficient) as err:
            gram_eigensystem(zeros, m_max=1)
        assert err.value.achievable_rank == 0

    def test_orthonormal_eigenfunctions(self):
        curves = random_curves(0, 8)
        sys = gram_eigensystem(curves, m_max=8)
        for j, f in enumerate(sys.eigenfunctions):
            for k, g in enumerate(sys.eigenfunctions):
                assert abs(inner_product(f, g) - (j == k)) <= 1e-8

    def test_descending_nonnegative(self):
        sys = gram_eigensystem(random_curves(1, 6))
        assert np.all(np.diff(sys.eigenvalues) <= 1e-12)
        assert np.all(sys.eigenvalues >= 0.0)

    def test_operator_consistency(self):
        curves = random_curves(2, 10)
        n = len(curves)
        sys = gram_eigensystem(curves, m_max=5)
        scores = np.array([[inner_product(c, phi) for phi in sys.eigenfunctions] for c in curves])
        S = scores.T @ scores / n
        np.testing.assert_allclose(S, np.diag(sys.eigenvalues), atol=1e-8)

    def test_trace_identity(self):
        curves = random_curves(3, 7)
        sys = gram_eigensystem(curves)
        mean_sq_norm = np.mean([l2_norm(c) ** 2 for c in curves])
        assert sys.eigenvalues.sum() == pytest.approx(mean_sq_norm, abs=1e-8)

    def test_simulation_design_spectrum(self):
        # independent design, no residualization beyond centering: the top
        # sample eigenvalues approach j^-2
        cfg = SimConfig(n=2000, seed=11, noise_sd=0.0, dependence=False)
        data, _ = generate(cfg)
        mean = np.mean([c.values for c in data.X], axis=0)
        centered = [Curve(c.grid, c.values - mean) for c in data.X]
        sys = gram_eigensystem(centered, m_max=3)
        for j in range(3):
            target = (j + 1.0) ** -2
            assert abs(sys.eigenvalues[j] - target) <= 0.2 * target


class TestPcScores:
    def test_own_eigenfunction(self):
        sys = gram_eigensystem(random_curves(4, 5), m_max=4)
        scores = pc_scores(sys, sys.eigenfunctions[0])
        np.testing.assert_allclose(scores, [1, 0, 0, 0], atol=1e-8)

    def test_zero_curve(self):
        sys = gram_eigensystem(random_curves(5, 5), m_max=3)
        np.testing.assert_allclose(pc_scores(sys, Curve.zero(UNIT)), 0.0)

    def test_linear_combination(self):
        sys = gram_eigensystem(random_curves(6, 6), m_max=3)
        f = 3.0 * sys.eigenfunctions[0] + 4.0 * sys.eigenfunctions[1]
        np.testing.assert_allclose(pc_scores(sys, f), [3.0, 4.0, 0.0], atol=1e-6)
