"""
Tests for norms, duality and dual-ball enumeration.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import InvalidInputError, UnsupportedSpaceError
from src.models.space import SpaceSpec
from src.services import spaces


class TestSpaceSpec:
    """SpaceSpec parsing and classification helpers"""

    def test_json_round_trip_keeps_infinity(self):
        """p = inf is written as the string "inf" and parsed back"""
        space = SpaceSpec.lp(3, "inf", field="complex")
        payload = space.model_dump(mode="json")
        assert payload["norm"]["p"] == "inf"
        assert SpaceSpec.model_validate(payload) == space

    def test_discriminated_union(self):
        """norm.kind selects the norm model"""
        space = SpaceSpec.model_validate(
            {"dim": 2, "norm": {"kind": "weighted_lp", "p": 2, "weights": [4, 1]}}
        )
        assert space.is_hilbert
        np.testing.assert_allclose(space.scales, [2.0, 1.0])

    def test_asymmetric_polytope_rejected(self):
        """Dual vertices must come in ± pairs"""
        with pytest.raises(ValidationError):
            SpaceSpec.polytope([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])

    def test_complex_polytope_rejected(self):
        with pytest.raises(ValidationError):
            SpaceSpec(
                dim=1,
                field="complex",
                norm={"kind": "polytope", "dual_vertices": [[1.0], [-1.0]]},
            )

    def test_flags(self, l1_2, l2_2, hexagon):
        assert l1_2.is_polyhedral and not l1_2.is_smooth
        assert l2_2.is_hilbert and l2_2.is_smooth
        assert hexagon.is_polyhedral and hexagon.p is None
        assert not SpaceSpec.lp(2, 1, field="complex").is_polyhedral


class TestNorms:
    """Primal and dual norms"""

    @pytest.mark.parametrize(
        "p, expected", [(1, 7.0), (2, 5.0), ("inf", 4.0), (3, (27 + 64) ** (1 / 3))]
    )
    def test_lp_norms(self, p, expected):
        space = SpaceSpec.lp(2, p)
        assert spaces.norm(space, [3.0, -4.0]) == pytest.approx(expected, rel=1e-12)

    def test_weighted_norm_and_dual(self):
        """‖x‖ = ‖s∘x‖₂ and ‖f‖* = ‖f/s‖₂ with s = w^{1/2}"""
        space = SpaceSpec.weighted_lp(2, [4.0, 1.0])
        assert spaces.norm(space, [1.0, 1.0]) == pytest.approx(math.sqrt(5.0))
        assert spaces.dual_norm(space, [2.0, 1.0]) == pytest.approx(math.sqrt(2.0))

    def test_polytope_norm(self, hexagon):
        assert spaces.norm(hexagon, [1.0, -1.0]) == pytest.approx(1.0)
        assert spaces.norm(hexagon, [1.0, 1.0]) == pytest.approx(2.0)
        # The primal ball has (1, -1) as a vertex.
        assert spaces.dual_norm(hexagon, [1.0, -1.0]) == pytest.approx(2.0)

    def test_complex_l1_norm(self):
        space = SpaceSpec.lp(2, 1, field="complex")
        assert spaces.norm(space, [3 + 4j, 1j]) == pytest.approx(6.0)

    def test_dual_space(self, l1_2):
        dual = spaces.dual_space(l1_2)
        assert math.isinf(dual.p)
        weighted = spaces.dual_space(SpaceSpec.weighted_lp(2, [4.0, 9.0]))
        f = np.array([1.0, 2.0])
        assert spaces.norm(weighted, f) == pytest.approx(
            spaces.dual_norm(SpaceSpec.weighted_lp(2, [4.0, 9.0]), f)
        )

    def test_complex_coordinates_on_real_space(self, l1_2):
        with pytest.raises(InvalidInputError):
            spaces.norm(l1_2, [1j, 0.0])


class TestDualExtremePoints:
    """Enumeration and sampling of the dual unit ball"""

    def test_real_l1_is_exhaustive(self, l1_2):
        dual = spaces.dual_extreme_points(l1_2)
        assert dual.exhaustive
        assert {tuple(v) for v in dual.vertices} == {
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        }

    def test_real_linf_is_exhaustive(self):
        dual = spaces.dual_extreme_points(SpaceSpec.lp(3, "inf"))
        assert dual.exhaustive
        assert len(dual) == 6

    def test_smooth_space_is_sampled(self, l2_2):
        dual = spaces.dual_extreme_points(l2_2, budget=16)
        assert not dual.exhaustive
        norms = spaces.row_dual_norms(l2_2, dual.vertices)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)

    def test_budget_must_be_positive(self, l2_2):
        with pytest.raises(InvalidInputError):
            spaces.dual_extreme_points(l2_2, budget=0)

    def test_unit_ball_vertices_of_l1(self, l1_2):
        vertices = spaces.unit_ball_vertices(l1_2)
        assert {tuple(v) for v in vertices} == {
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
        }

    def test_unit_ball_vertices_of_hexagon(self, hexagon):
        vertices = spaces.unit_ball_vertices(hexagon)
        assert len(vertices) == 6
        np.testing.assert_allclose(spaces.row_norms(hexagon, vertices), 1.0, atol=1e-12)

    def test_unit_ball_vertices_need_polyhedral_space(self, l2_2):
        with pytest.raises(UnsupportedSpaceError):
            spaces.unit_ball_vertices(l2_2)


class TestNormalizingFunctional:
    """f with ‖f‖* = 1 and f(x) = ‖x‖"""

    def test_hilbert(self, l2_2):
        f = spaces.normalizing_functional(l2_2, [3.0, 4.0])
        np.testing.assert_allclose(f, [0.6, 0.8])

    def test_l1_interior_of_face(self, l1_2):
        f = spaces.normalizing_functional(l1_2, [0.5, -0.5])
        np.testing.assert_allclose(f, [1.0, -1.0])

    def test_polytope(self, hexagon):
        x = np.array([0.5, 0.5])
        f = spaces.normalizing_functional(hexagon, x)
        assert spaces.apply(f, x) == pytest.approx(spaces.norm(hexagon, x))
        assert spaces.dual_norm(hexagon, f) == pytest.approx(1.0)

    def test_complex_lp(self):
        space = SpaceSpec.lp(3, 3, field="complex")
        x = np.array([1 + 1j, -2.0, 0.5j])
        f = spaces.normalizing_functional(space, x)
        assert spaces.apply(f, x) == pytest.approx(spaces.norm(space, x))
        assert spaces.dual_norm(space, f) == pytest.approx(1.0)

    def test_zero_vector(self, l2_2):
        with pytest.raises(InvalidInputError):
            spaces.normalizing_functional(l2_2, [0.0, 0.0])


class TestAdmissibility:
    """sup over the dual ball of Σ|g(xᵢ)|²"""

    def test_basis_in_hilbert_space(self, l2_2):
        value, exact = spaces.admissibility_constant(l2_2, np.eye(2))
        assert exact
        assert value == pytest.approx(1.0)

    def test_basis_in_l1(self, l1_2):
        value, exact = spaces.admissibility_constant(l1_2, np.eye(2))
        assert exact
        assert value == pytest.approx(2.0)

    def test_sampled_space_is_not_exact(self):
        space = SpaceSpec.lp(2, 3)
        _, exact = spaces.admissibility_constant(space, np.eye(2))
        assert not exact
