"""Geometric realization: chambers from graphs, separation, point location."""

from __future__ import annotations

import itertools

import pytest

from weylgpd.builtins import builtin_graph
from weylgpd.cartan import CartanGraph, GeneralizedCartanMatrix
from weylgpd.errors import NotSimplyConnected
from weylgpd.exactlin import vec, vneg
from weylgpd.realization import (
    adjacency_equivalences_test,
    gallery_distance,
    local_cartan_graph_at,
    locate_point,
    realize,
    roundtrip_check,
    separating_set,
)


class TestRealize:
    def test_a2(self):
        re = realize(builtin_graph("a2"), depth=8)
        assert re.complete
        assert len(re.order) == 6
        assert len(re.table.roots) == 6

    def test_rank_one(self):
        graph = CartanGraph.standard(GeneralizedCartanMatrix.from_rows([[2]]))
        re = realize(graph, depth=4)
        assert re.complete and len(re.order) == 2
        assert set(re.table.roots) == {vec((1,)), vec((-1,))}

    def test_affine_a1_bases_match_closed_form(self):
        re = realize(builtin_graph("aff-a1"), depth=10)
        assert not re.complete
        assert len(re.order) == 21
        gamma = vec((1, 1))

        def b_pos(n):  # {e2 + n*gamma, -(e2 + (n-1)*gamma)}
            return {vec((n, n + 1)), vneg(vec((n - 1, n)))}

        def b_neg(n):  # {e1 + n*gamma, -(e1 + (n-1)*gamma)}
            return {vec((n + 1, n)), vneg(vec((n, n - 1)))}

        found = {frozenset(basis) for basis in (set(b) for b in re.bases.values())}
        expected = {frozenset({vec((1, 0)), vec((0, 1))})}
        for n in range(1, 11):
            expected.add(frozenset(b_pos(n)))
            expected.add(frozenset(b_neg(n)))
        assert found == expected
        assert re.gamma == gamma

    def test_not_simply_connected_detected(self):
        gcm = GeneralizedCartanMatrix.from_rows([[2, -1], [-1, 2]])
        one_object = CartanGraph.explicit({0: gcm}, {(0, 0): 0, (0, 1): 0}, 0)
        with pytest.raises(NotSimplyConnected):
            realize(one_object, depth=3)


class TestSeparatingSet:
    def test_same_object_empty(self):
        re = realize(builtin_graph("a2"), depth=8)
        b = re.order[0]
        assert len(separating_set(re, b, b)) == 0

    def test_adjacent_singleton_named(self):
        re = realize(builtin_graph("a2"), depth=8)
        b = re.base
        for i in range(2):
            b2 = re.edges[(b, i)]
            sep = separating_set(re, b, b2)
            assert len(sep) == 1
            from weylgpd.exactlin import primitive_normalize

            assert sep.keys == {primitive_normalize(re.bases[b][i])}

    def test_opposite_a2(self):
        re = realize(builtin_graph("a2"), depth=8)
        opposite = next(o for o in re.order if gallery_distance(re, re.base, o) == 3)
        assert len(separating_set(re, re.base, opposite)) == 3

    def test_distance_equals_separation_everywhere(self):
        for name in ("a2", "b2", "g2", "a3"):
            re = realize(builtin_graph(name), depth=16)
            for b, b2 in itertools.combinations(re.order, 2):
                assert gallery_distance(re, b, b2) == len(separating_set(re, b, b2)), name


class TestAdjacencyEquivalences:
    def test_adjacent_pair_all_true(self):
        re = realize(builtin_graph("aff-a1"), depth=6)
        b = re.base
        b2 = re.edges[(b, 0)]
        result = adjacency_equivalences_test(re, b, b2, 0)
        assert result.i_adjacent and result.rho_matches and result.separating_singleton
        assert result.sandwich is None  # incomplete region cannot certify iii)

    def test_same_object_all_false(self):
        re = realize(builtin_graph("a2"), depth=8)
        result = adjacency_equivalences_test(re, re.base, re.base, 0)
        assert result == result.__class__(False, False, False, False)

    def test_opposite_pair_all_false(self):
        re = realize(builtin_graph("a2"), depth=8)
        opposite = next(o for o in re.order if gallery_distance(re, re.base, o) == 3)
        for i in range(2):
            result = adjacency_equivalences_test(re, re.base, opposite, i)
            assert not result.i_adjacent and not result.rho_matches
            assert result.sandwich is False and not result.separating_singleton

    def test_quadruple_agreement_property(self):
        re = realize(builtin_graph("b2"), depth=16)
        assert re.complete
        for b, b2 in itertools.product(re.order, repeat=2):
            for i in range(2):
                result = adjacency_equivalences_test(re, b, b2, i)
                assert result.all_agree(), (b, b2, i, result)


class TestLocatePoint:
    def test_interior_of_base(self):
        re = realize(builtin_graph("a2"), depth=8)
        result = locate_point(re, (2, 1))
        assert result.found and result.obj == re.base and result.steps == 0

    def test_affine_vertex_segmentwalk(self):
        re = realize(builtin_graph("aff-a1"), depth=10)
        result = locate_point(re, (3, -2))  # on the halfspace slice, two walls away
        assert result.found
        basis = re.bases[result.obj]
        assert all(sum(c * x for c, x in zip(beta, (3, -2))) >= 0 for beta in basis)

    def test_affine_negative_side_is_not_in_cone(self):
        re = realize(builtin_graph("aff-a1"), depth=10)
        assert locate_point(re, (1, -2)).status == "not_in_cone"
        assert locate_point(re, (-1, -1)).status == "not_in_cone"

    def test_spherical_far_corner(self):
        re = realize(builtin_graph("a3"), depth=16)
        result = locate_point(re, (-7, -5, -2))
        assert result.found

    def test_zero_rejected(self):
        re = realize(builtin_graph("a2"), depth=8)
        with pytest.raises(ValueError):
            locate_point(re, (0, 0))


class TestLocalCartanGraph:
    def test_interior_point_empty(self):
        re = realize(builtin_graph("a2"), depth=8)
        local = local_cartan_graph_at(re, (2, 1))
        assert local.indices == () and local.graph is None and local.roots == ()

    def test_single_wall_rank_one(self):
        re = realize(builtin_graph("a2"), depth=8)
        local = local_cartan_graph_at(re, (1, 0))  # on the e2-wall only
        assert len(local.indices) == 1
        assert set(local.roots) == {vec((0, 1)), vec((0, -1))}
        assert len(local.graph.objects) == 2

    def test_affine_vertex(self):
        re = realize(builtin_graph("aff-a1"), depth=10)
        local = local_cartan_graph_at(re, (1, 0))  # the first lattice vertex
        assert set(local.roots) == {vec((0, 1)), vec((0, -1))}
        for roots in local.integer_roots.values():
            assert roots == {(1,), (-1,)}

    def test_a3_codim2_point(self):
        re = realize(builtin_graph("a3"), depth=16)
        basis = re.bases[re.base]
        from weylgpd.exactlin import dual_basis

        rays = dual_basis(basis)
        x = rays[2]  # on the walls 0 and 1
        local = local_cartan_graph_at(re, tuple(x))
        assert local.indices == (0, 1)
        assert len(local.graph.objects) == 6  # triple-count fan of the pair residue


class TestRoundTrip:
    @pytest.mark.parametrize("name,objects", [("a2", 6), ("b2", 8), ("g2", 12), ("a3", 24)])
    def test_finite(self, name, objects):
        report = roundtrip_check(builtin_graph(name), depth=16)
        assert report.equivalent, report.mismatches[:3]
        assert report.objects_compared == objects

    def test_affine_certified_interior(self):
        report = roundtrip_check(builtin_graph("aff-a1"), depth=8)
        assert report.equivalent, report.mismatches[:3]
        assert report.objects_compared == 15  # 17 generated, 2 frontier objects excluded
