"""
Tests for the FUNTF constructions and the numerical search.
"""

import numpy as np
import pytest

from src.core.errors import (
    DimensionMismatchError,
    InvalidInputError,
    UnsupportedConstructionError,
    UnsupportedSpaceError,
)
from src.models.results import DiagonalTarget
from src.models.space import SpaceSpec
from src.services import construct, frames, spaces


def assert_funtf(frame, level=None, tol=1e-9):
    level = frame.length / frame.dim if level is None else level
    result = frames.classify(frame, tol=tol)
    assert frames.is_normalized(frame, tol=tol)
    np.testing.assert_allclose(
        frames.frame_operator(frame).matrix, level * np.eye(frame.dim), atol=tol
    )
    assert result.kind == "funtf"


class TestLozanovskii:
    """αⱼβⱼ = tⱼ with both sides on the unit spheres"""

    @pytest.mark.parametrize("p", [1, 2, 3, "inf"])
    def test_lp_factorization(self, p):
        space = SpaceSpec.lp(3, p)
        t = np.array([0.2, 0.3, 0.5])
        loz = construct.lozanovskii(space, t)
        alphas, betas = np.array(loz.alphas), np.array(loz.betas)
        np.testing.assert_allclose(alphas * betas, t, atol=1e-14)
        assert spaces.norm(space, alphas) == pytest.approx(1.0, rel=1e-12)
        assert spaces.dual_norm(space, betas) == pytest.approx(1.0, rel=1e-12)

    def test_l1_closed_form(self, l1_2):
        loz = construct.lozanovskii(l1_2, [0.25, 0.75])
        assert loz.alphas == (0.25, 0.75)
        assert loz.betas == (1.0, 1.0)

    def test_zero_weight(self, l2_2):
        loz = construct.lozanovskii(l2_2, [1.0, 0.0])
        assert loz.alphas == (1.0, 0.0)
        assert loz.betas == (1.0, 0.0)

    def test_weighted_space(self):
        space = SpaceSpec.weighted_lp(3, [2.0, 0.5])
        loz = construct.lozanovskii(space, [0.5, 0.5])
        alphas, betas = np.array(loz.alphas), np.array(loz.betas)
        np.testing.assert_allclose(alphas * betas, [0.5, 0.5])
        assert spaces.norm(space, alphas) == pytest.approx(1.0)
        assert spaces.dual_norm(space, betas) == pytest.approx(1.0)

    def test_unconditional_polytope(self, octagon):
        loz = construct.lozanovskii(octagon, [0.5, 0.5])
        alphas, betas = np.array(loz.alphas), np.array(loz.betas)
        np.testing.assert_allclose(alphas * betas, [0.5, 0.5], atol=1e-12)
        assert spaces.norm(octagon, alphas) == pytest.approx(1.0, abs=1e-10)
        assert spaces.dual_norm(octagon, betas) == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(alphas, [2 / 3, 2 / 3], atol=1e-10)

    def test_polytope_single_active_facet(self, octagon):
        """t = (0.9, 0.1) touches only the facet α₁ + α₂/2 = 1"""
        loz = construct.lozanovskii(octagon, [0.9, 0.1])
        np.testing.assert_allclose(loz.alphas, [0.9, 0.2], atol=1e-10)
        np.testing.assert_allclose(loz.betas, [1.0, 0.5], atol=1e-10)
        assert spaces.dual_norm(octagon, np.array(loz.betas)) == pytest.approx(1.0, abs=1e-10)

    def test_conditional_polytope_rejected(self, hexagon):
        with pytest.raises(UnsupportedSpaceError):
            construct.lozanovskii(hexagon, [0.5, 0.5])

    def test_weights_off_the_simplex(self, l1_2):
        with pytest.raises(InvalidInputError):
            construct.lozanovskii(l1_2, [0.5, 0.6])
        with pytest.raises(InvalidInputError):
            construct.lozanovskii(l1_2, [1.5, -0.5])

    def test_weights_of_wrong_length(self, l1_2):
        with pytest.raises(DimensionMismatchError):
            construct.lozanovskii(l1_2, [1.0])


class TestHarmonicConstruction:
    """DFT frames with Lozanovskii weights"""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_complex_l1(self, n):
        frame = construct.dft_funtf(SpaceSpec.lp(n, 1, field="complex"))
        assert frame.length == n
        assert_funtf(frame, level=1.0)

    def test_diagonal_target(self):
        space = SpaceSpec.lp(2, 3, field="complex")
        frame = construct.dft_funtf(space, DiagonalTarget(space=space, lambdas=(0.5, 1.5)))
        assert frames.is_normalized(frame, tol=1e-12)
        np.testing.assert_allclose(
            frames.frame_operator(frame).matrix, np.diag([0.5, 1.5]), atol=1e-12
        )

    def test_real_sign_version(self, l1_2):
        frame = construct.dft_funtf(l1_2, [0.5, 1.5])
        assert frame.vectors.dtype == float
        np.testing.assert_allclose(
            frames.frame_operator(frame).matrix, np.diag([0.5, 1.5]), atol=1e-12
        )

    def test_real_dimension_three_unsupported(self):
        with pytest.raises(UnsupportedConstructionError):
            construct.dft_funtf(SpaceSpec.lp(3, 1))

    def test_target_must_sum_to_dimension(self, l2_2):
        with pytest.raises(InvalidInputError):
            construct.dft_funtf(l2_2, [1.0, 2.0])


class TestFuntfOfLength:
    """Induction on the length"""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("p", [1, 3])
    def test_complex_spaces(self, n, p):
        space = SpaceSpec.lp(n, p, field="complex")
        for N in range(n, 9):
            frame = construct.funtf_of_length(space, N)
            assert frame.length == N
            assert_funtf(frame)

    def test_real_l1_2(self, l1_2):
        for N in range(2, 8):
            assert_funtf(construct.funtf_of_length(l1_2, N))

    def test_length_three_recovers_the_counterexample_frame(self, l1_2):
        frame = construct.funtf_of_length(l1_2, 3)
        np.testing.assert_allclose(
            frames.frame_operator(frame).matrix, 1.5 * np.eye(2), atol=1e-12
        )
        assert sorted(np.abs(frame.vectors[:, 0]).round(12)) == [0.25, 0.25, 1.0]

    def test_custom_diagonal(self, l2_2):
        frame = construct.funtf_of_length(l2_2, 4, lambdas=[3.0, 1.0])
        np.testing.assert_allclose(
            frames.frame_operator(frame).matrix, np.diag([3.0, 1.0]), atol=1e-12
        )

    def test_length_below_dimension(self, l1_2):
        with pytest.raises(InvalidInputError):
            construct.funtf_of_length(l1_2, 1)

    def test_multiples_of_auerbach(self, hexagon):
        frame = construct.funtf_by_multiples(hexagon, 4)
        assert_funtf(frame, level=2.0)

    def test_multiples_need_a_multiple(self, hexagon):
        with pytest.raises(UnsupportedConstructionError):
            construct.funtf_by_multiples(hexagon, 3)


class TestEll1Families:
    """Explicit real ℓ₁ⁿ FUNTFs"""

    def test_parameter(self):
        assert construct.ell1_parameter(3) == pytest.approx(1 / 3)
        assert construct.ell1_parameter(5) == pytest.approx((0.5 + 0.2) / 1.5)

    def test_parameter_needs_dimension_three(self):
        with pytest.raises(UnsupportedConstructionError):
            construct.ell1_parameter(2)

    @pytest.mark.parametrize("n", [3, 4, 5, 8])
    def test_length_n_plus_1(self, n):
        frame = construct.ell1_funtf_n_plus_1(n)
        assert frame.length == n + 1
        assert_funtf(frame)

    @pytest.mark.parametrize("dim, length", [(3, 5), (4, 6), (4, 7)])
    def test_special_lengths(self, dim, length):
        frame = construct.ell1_special(dim, length)
        assert frame.length == length
        assert_funtf(frame)

    def test_special_unknown(self):
        with pytest.raises(UnsupportedConstructionError):
            construct.ell1_special(5, 7)

    @pytest.mark.parametrize("n", [3, 4])
    def test_every_length(self, n):
        for N in range(n, 13):
            frame = construct.ell1_funtf_of_length(n, N)
            assert frame.length == N
            assert_funtf(frame)

    def test_unreachable_length(self):
        with pytest.raises(UnsupportedConstructionError):
            construct.ell1_funtf_of_length(5, 7)

    def test_union_of_pieces(self):
        assert_funtf(construct.ell1_funtf_of_length(5, 11))


class TestSearch:
    """Residual minimization over normalized pairs"""

    def test_hilbert_plane(self, l2_2):
        report = construct.search_funtf(l2_2, 3, seed=1, restarts=4)
        assert report.method == "least_squares"
        assert report.success
        assert frames.classify(report.best, tol=1e-5).kind == "funtf"

    def test_parity_obstruction(self, l1_2):
        """With every coordinate nonzero the residual cannot fall below 1/2"""
        for seed in range(3):
            report = construct.search_funtf(l1_2, 3, seed=seed, restarts=2, avoid=0.05)
            assert report.method == "alternating_lp"
            assert not report.success
            assert report.residual >= 0.5 - 1e-6
            assert np.min(np.abs(report.best.vectors)) >= 0.05 - 1e-7

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(64))
    def test_parity_obstruction_across_seeds(self, l1_2, seed):
        report = construct.search_funtf(l1_2, 3, seed=seed, restarts=2, avoid=0.05)
        assert not report.success
        assert report.residual >= 0.5 - 1e-6

    def test_avoiding_run_keeps_its_sign_pattern(self, l1_2):
        start = construct._avoiding_start(l1_2, 3, 0.05, np.random.default_rng(5))
        vectors, _, _, _ = construct._search_polyhedral(
            l1_2, 3, np.random.default_rng(5), 20, 1e-12, 0.05
        )
        np.testing.assert_array_equal(np.sign(vectors), np.sign(start))

    def test_restarts_draw_different_sign_patterns(self, l1_2):
        starts = [
            construct._avoiding_start(l1_2, 3, 0.05, np.random.default_rng(child))
            for child in np.random.SeedSequence(0).spawn(8)
        ]
        patterns = {tuple(np.sign(start).ravel()) for start in starts}
        assert len(patterns) > 1

    @pytest.mark.slow
    def test_unrestricted_l1_plane(self, l1_2):
        report = construct.search_funtf(l1_2, 3, seed=0)
        assert report.success

    def test_threads(self, l2_2):
        report = construct.search_funtf(l2_2, 3, seed=2, restarts=2, threads=2)
        assert report.restarts == 2

    def test_complex_l1_unsupported(self):
        with pytest.raises(UnsupportedSpaceError):
            construct.search_funtf(SpaceSpec.lp(2, 1, field="complex"), 3)

    def test_avoid_needs_polyhedral_space(self, l2_2):
        with pytest.raises(UnsupportedSpaceError):
            construct.search_funtf(l2_2, 3, avoid=0.1)

    def test_avoid_range(self, l1_2):
        with pytest.raises(InvalidInputError):
            construct.search_funtf(l1_2, 3, avoid=0.6)

    def test_length_below_dimension(self, l2_2):
        with pytest.raises(InvalidInputError):
            construct.search_funtf(l2_2, 1)
