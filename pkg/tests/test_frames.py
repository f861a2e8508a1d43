"""
Tests for frame operators, classification and the naive potentials.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import InvalidInputError, UnsupportedSpaceError
from src.models.frame import FrameSystem
from src.models.space import SpaceSpec
from src.services import frames


class TestFrameSystem:
    """Parsing and serialization of frame systems"""

    def test_pairs_form(self, l1_2):
        frame = FrameSystem.model_validate(
            {
                "space": l1_2.model_dump(mode="json"),
                "pairs": [{"x": [1, 0], "f": [1, 0]}, {"x": [0, 1], "f": [0, 1]}],
            }
        )
        assert frame.length == 2
        assert frame.dim == 2
        np.testing.assert_array_equal(frame.vectors, np.eye(2))

    def test_dump_is_reloadable(self, x_frame):
        again = FrameSystem.model_validate(x_frame.model_dump())
        np.testing.assert_array_equal(again.vectors, x_frame.vectors)
        np.testing.assert_array_equal(again.functionals, x_frame.functionals)

    def test_complex_pairs_as_re_im(self):
        space = SpaceSpec.lp(1, 2, field="complex")
        frame = FrameSystem.model_validate(
            {"space": space.model_dump(mode="json"), "pairs": [{"x": [[0, 1]], "f": [[0, -1]]}]}
        )
        assert frame.vectors[0, 0] == 1j
        assert frames.pair_values(frame)[0] == pytest.approx(1.0)

    def test_shape_mismatch(self, l1_2):
        with pytest.raises(ValidationError):
            FrameSystem(space=l1_2, vectors=np.eye(2), functionals=np.eye(3)[:, :2])

    def test_wrong_dimension(self, l1_2):
        with pytest.raises(ValidationError):
            FrameSystem(space=l1_2, vectors=np.eye(3), functionals=np.eye(3))

    def test_vectors_are_read_only(self, x_frame):
        with pytest.raises(ValueError):
            x_frame.vectors[0, 0] = 2.0


class TestFrameOperator:
    """S = Σ fⱼ⊗xⱼ"""

    def test_x_frame_is_tight(self, x_frame):
        np.testing.assert_allclose(frames.frame_operator(x_frame).matrix, 1.5 * np.eye(2))

    def test_y_frame_is_diagonal(self, y_frame):
        np.testing.assert_allclose(frames.frame_operator(y_frame).matrix, np.diag([2.0, 1.0]))

    def test_trace_is_sum_of_pair_values(self, counterexamples):
        for frame in counterexamples.values():
            operator = frames.frame_operator(frame)
            assert operator.trace == pytest.approx(float(np.sum(frames.pair_values(frame))))

    def test_gram_matrix(self, y_frame):
        expected = np.array([[1.0, 0.5, 0.5], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
        np.testing.assert_allclose(frames.gram_matrix(y_frame), expected)


class TestClassify:
    """funtf / schauder / approximate / none"""

    def test_x_frame_is_funtf(self, x_frame):
        result = frames.classify(x_frame)
        assert result.kind == "funtf"
        assert result.scale == pytest.approx(1.5)
        assert result.normalized

    def test_y_frame_is_only_approximate(self, y_frame):
        result = frames.classify(y_frame)
        assert result.kind == "approximate"
        assert result.scale is None
        assert result.normalized
        assert not result.is_schauder
        assert result.sigma_min == pytest.approx(1.0)

    def test_basis_is_funtf_and_schauder(self, l1_2):
        result = frames.classify(frames.basis_frame(l1_2))
        assert result.kind == "funtf"
        assert result.scale == pytest.approx(1.0)
        assert result.is_schauder

    def test_unnormalized_schauder_frame(self, l2_2, rng):
        frame = frames.random_schauder_frame(l2_2, 5, rng)
        result = frames.classify(frame)
        assert result.is_schauder
        assert result.kind in ("funtf", "schauder")
        if not frames.is_normalized(frame):
            assert result.kind == "schauder"

    def test_rank_deficient_frame(self, l1_2):
        frame = FrameSystem(space=l1_2, vectors=[[1.0, 0.0]], functionals=[[1.0, 0.0]])
        result = frames.classify(frame)
        assert result.kind == "none"
        assert not result.is_approximate

    def test_tol_must_be_positive(self, x_frame):
        with pytest.raises(InvalidInputError):
            frames.classify(x_frame, tol=0.0)


class TestNaivePotentials:
    """The naive candidates fail to separate tight from non-tight frames"""

    def test_squared_potential_prefers_non_tight_frame(self, x_frame, y_frame):
        assert frames.naive_potential_sq(x_frame) == pytest.approx(5.625)
        assert frames.naive_potential_sq(y_frame) == pytest.approx(5.5)

    def test_symmetric_potential_prefers_non_tight_frame(self, x_frame, counterexamples):
        z_frame = counterexamples["z"]
        assert frames.normalization_defect(z_frame) == pytest.approx(0.0, abs=1e-12)
        assert frames.naive_potential_sym(x_frame) == pytest.approx(4.5)
        assert frames.naive_potential_sym(z_frame) == pytest.approx(4.0)

    def test_trace_lower_bound(self, x_frame):
        assert frames.trace_lower_bound(x_frame) == pytest.approx(4.5)


class TestFrameAlgebra:
    """Unions, rescalings and bases"""

    def test_union_of_funtfs(self, x_frame):
        joined = frames.union(x_frame, x_frame)
        assert joined.length == 6
        np.testing.assert_allclose(frames.frame_operator(joined).matrix, 3.0 * np.eye(2))

    def test_union_needs_same_space(self, x_frame, linf_2):
        other = frames.basis_frame(linf_2)
        with pytest.raises(InvalidInputError):
            frames.union(x_frame, other)

    def test_scaled_operator(self, y_frame):
        result = frames.scaled(y_frame, 2.0, [1.0, 4.0, 0.5])
        np.testing.assert_allclose(
            frames.frame_operator(result).matrix, 2.0 * frames.frame_operator(y_frame).matrix
        )

    def test_scaled_rejects_zero_weight(self, y_frame):
        with pytest.raises(InvalidInputError):
            frames.scaled(y_frame, 1.0, [1.0, 0.0, 1.0])

    def test_rescaled_to_unit(self, x_frame):
        stretched = frames.scaled(x_frame, 1.0, [2.0, 3.0, 0.5])
        unit = frames.rescaled_to_unit(stretched)
        assert frames.is_normalized(unit)

    def test_weighted_basis_frame(self):
        space = SpaceSpec.weighted_lp(1, [2.0, 5.0])
        basis = frames.basis_frame(space)
        assert frames.is_normalized(basis)
        np.testing.assert_allclose(frames.frame_operator(basis).matrix, np.eye(2))

    def test_basis_frame_needs_lp_family(self, hexagon):
        with pytest.raises(UnsupportedSpaceError):
            frames.basis_frame(hexagon)


class TestAuerbachBasis:
    """Biorthogonal normalized bases of polytope norms"""

    def test_hexagon(self, hexagon):
        basis = frames.auerbach_basis(hexagon, seed=3)
        assert basis.length == 2
        assert frames.is_normalized(basis)
        np.testing.assert_allclose(frames.gram_matrix(basis), np.eye(2), atol=1e-12)
        result = frames.classify(basis)
        assert result.kind == "funtf"
        assert result.is_schauder

    def test_octagon(self, octagon):
        basis = frames.auerbach_basis(octagon)
        assert frames.is_normalized(basis, tol=1e-9)
        np.testing.assert_allclose(frames.frame_operator(basis).matrix, np.eye(2), atol=1e-12)

    def test_lp_uses_canonical_basis(self, l2_2):
        basis = frames.auerbach_basis(l2_2)
        np.testing.assert_array_equal(basis.vectors, np.eye(2))


class TestRandomFrames:
    def test_random_normalized_frame(self, rng):
        space = SpaceSpec.lp(3, 3)
        frame = frames.random_normalized_frame(space, 5, rng)
        assert frames.is_normalized(frame, tol=1e-9)

    def test_random_schauder_frame_identity(self, rng):
        space = SpaceSpec.lp(3, 1, field="complex")
        frame = frames.random_schauder_frame(space, 4, rng)
        np.testing.assert_allclose(frames.frame_operator(frame).matrix, np.eye(3), atol=1e-10)

    def test_schauder_frame_needs_n_pairs(self, l2_2, rng):
        with pytest.raises(InvalidInputError):
            frames.random_schauder_frame(l2_2, 1, rng)
