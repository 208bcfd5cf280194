import pytest
import sympy

from src.gkzpy.errors import GeometryError, NonSimplicialCell
from src.gkzpy.exactla import ConfigMatrix, Simplex, dot
from src.gkzpy.geometry import (
    PerturbedWeight,
    eta_for_simplex,
    hull_facets,
    interior_direction,
    is_vertex_origin,
    outer_facets,
    perturb_weight,
    regular_triangulation,
    sigma_in_outer_facet,
    staged_sign,
    triangulation_volume,
    umbrella_inclusion_check,
    umbrella_positive,
)


class TestHullFacets:
    """Tests for facet enumeration."""

    def test_outer_facet_of_simplex(self):
        faces = outer_facets([(1, 0), (0, 1)])
        assert len(faces) == 1
        assert faces[0].indices == (0, 1)
        assert faces[0].covector == (1, 1)
        assert faces[0].offset == 1
        assert faces[0].labels() == [1, 2]

    def test_facets_through_origin(self):
        faces = hull_facets([(1, 0), (0, 1)])
        through_zero = [f for f in faces if f.contains_zero]
        assert {f.indices for f in through_zero} == {(0,), (1,)}
        for face in through_zero:
            assert face.offset == 0
            assert all(face.value(p) <= 0 for p in [(1, 0), (0, 1)])

    def test_interior_point_is_not_a_vertex(self):
        faces = outer_facets([(1, 0), (1, 1), (1, 2)])
        assert [f.indices for f in faces] == [(0, 1, 2)]
        assert faces[0].covector == (1, 0)

    def test_lower_dimensional_points(self):
        # points in a coordinate plane of R^3 are handled inside that plane
        faces = outer_facets([(1, 0, 0), (0, 1, 0)])
        assert len(faces) == 1
        assert faces[0].indices == (0, 1)
        assert faces[0].value((1, 0, 0)) == 1
        assert faces[0].value((0, 1, 0)) == 1

    def test_one_dimensional(self):
        faces = outer_facets([(1,), (2,), (3,)])
        assert [f.indices for f in faces] == [(2,)]
        assert faces[0].covector == (sympy.Rational(1, 3),)

    def test_single_point_hull(self):
        with pytest.raises(GeometryError):
            hull_facets([(0, 0)], with_origin=False)

    def test_logs_with_given_logger(self, logger):
        hull_facets([(1, 0), (0, 1)], logger=logger)
        logger.debug.assert_called_once()


class TestPointedness:
    """Tests for the pointedness witness."""

    def test_witness(self):
        points = [(1, 0), (1, 1), (0, 1)]
        h = interior_direction(points)
        assert h is not None
        assert all(dot(h, p) > 0 for p in points)
        assert is_vertex_origin(points)

    def test_not_pointed(self):
        assert interior_direction([(1,), (-1,)]) is None
        assert interior_direction([(1, 0), (-1, 0), (0, 1)]) is None

    def test_zero_column(self):
        assert interior_direction([(0, 0), (1, 0)]) is None


class TestUmbrella:
    """Tests for umbrellas."""

    def test_unit_weights(self):
        umbrella = umbrella_positive([[1, 1, 1], [0, 1, 2]], [1, 1, 1])
        assert umbrella.maximal() == [(0, 1, 2)]
        assert umbrella.faces == {(): -1, (0,): 0, (2,): 0, (0, 1, 2): 1}

    def test_weights_move_points(self):
        # weight 1/2 doubles the middle column and makes it a vertex
        umbrella = umbrella_positive([[1, 1, 1], [0, 1, 2]], [1, sympy.Rational(1, 2), 1])
        assert umbrella.maximal() == [(0, 1), (1, 2)]

    def test_rejects_non_positive_weights(self):
        with pytest.raises(GeometryError):
            umbrella_positive([[1, 2]], [1, 0])
        with pytest.raises(GeometryError):
            umbrella_positive([[1, 2]], [1])

    def test_inclusion_fails_for_long_column(self):
        a = [[1, 1, 0, 3], [0, 1, 2, 0]]
        sigma = Simplex.of(a, (0, 1))
        eta = eta_for_simplex(a, sigma)
        assert eta == (0, 1, 3)
        assert not umbrella_inclusion_check(a, eta)

    def test_inclusion_holds_for_short_column(self):
        a = [[1, 1, 0, "3/2"], [0, 1, 2, 0]]
        sigma = Simplex.of(a, (0, 1))
        eta = eta_for_simplex(a, sigma)
        assert eta == (0, 1, 3)
        assert umbrella_inclusion_check(a, eta)

    def test_sigma_in_outer_facet(self):
        a = ConfigMatrix([[1, 2]])
        assert sigma_in_outer_facet(a, Simplex.of(a, (0,)))
        assert not sigma_in_outer_facet(a, Simplex.of(a, (1,)))


class TestTriangulation:
    """Tests for regular triangulations."""

    def test_staged_sign(self):
        assert staged_sign((0, -1, 5)) == -1
        assert staged_sign((0, 0, 2)) == 1
        assert staged_sign((0, 0)) == 0

    def test_perturb_weight(self):
        weight = perturb_weight([[1, 2, 3]], (0, 0, 1))
        assert isinstance(weight, PerturbedWeight)
        assert weight.stages == ((0, 0, 1), (1, 1, 1), (1, 7, 49))
        assert weight.pairing((1, -1, 0)) == (0, 0, -6)
        assert weight.entry(2) == (1, 1, 49)

    def test_perturb_weight_length(self):
        with pytest.raises(GeometryError):
            perturb_weight([[1, 2]], (0,))

    def test_perturbed_triangulation(self):
        a = ConfigMatrix([[1, 2, 3]])
        triangulation = regular_triangulation(a, perturb_weight(a, (0, 0, 1)))
        assert triangulation.index_sets() == [(1,)]
        assert triangulation.total_volume == 2

    def test_long_row(self):
        a = ConfigMatrix([[1, 3, 5, 6]])
        triangulation = regular_triangulation(a, perturb_weight(a, (-4, -2, 0, 1)))
        assert triangulation.index_sets() == [(0,)]

    def test_zero_weight_is_broken_by_ones(self):
        a = ConfigMatrix([[1, 2]])
        assert regular_triangulation(a, perturb_weight(a, (0, 0))).index_sets() == [(1,)]

    def test_unperturbed_tie(self):
        a = ConfigMatrix([[1, 2]])
        with pytest.raises(NonSimplicialCell):
            regular_triangulation(a, (0, 0))

    def test_homogeneous_volume(self):
        a = ConfigMatrix([[1, 1, 1], [0, 1, 2]])
        assert triangulation_volume(a, perturb_weight(a, (0, 0, 0))) == 2
        triangulation = regular_triangulation(a, (0, 1, 0))
        assert triangulation.index_sets() == [(0, 2)]
        assert triangulation.total_volume == 2

    def test_certificates(self):
        a = ConfigMatrix([[1, 1, 1], [0, 1, 2]])
        triangulation = regular_triangulation(a, (0, -1, 0))
        assert triangulation.index_sets() == [(0, 1), (1, 2)]
        for indices, stages in triangulation.certificates.items():
            for i in indices:
                assert dot(stages[0], a.columns[i]) == (0, -1, 0)[i]
