"""Exact linear algebra: examples and algebraic properties."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylgpd._rational import rat
from weylgpd.errors import SingularBasis, ZeroCovector
from weylgpd.exactlin import (
    dual_basis,
    nullspace,
    primitive_normalize,
    primitive_ray,
    sign_at,
    solve_coordinates,
    solve_in_span,
    vdot,
    vec,
)

from _oracles import gauss_solve

F4_SIMPLE = (
    vec((0, 1, -1, 0)),
    vec((0, 0, 1, -1)),
    vec((0, 0, 0, 1)),
    vec(("1/2", "-1/2", "-1/2", "-1/2")),
)


class TestSolveCoordinates:
    def test_identity_case(self):
        basis = (vec((1, 0)), vec((0, 1)))
        assert solve_coordinates(basis, vec((3, -1))) == vec((3, -1))

    def test_linearity(self):
        basis = (vec((1, 0)), vec((0, 1)))
        assert solve_coordinates(basis, vec((1, 1))) == (rat(1), rat(1))

    def test_f4_simple_root_coordinates_match_oracle(self):
        target = vec((1, 0, 0, 0))
        got = solve_coordinates(F4_SIMPLE, target)
        expected = gauss_solve(F4_SIMPLE, target)
        assert tuple(map(F, map(str, got))) == expected
        assert got == vec((1, 2, 3, 2))

    def test_dependent_basis_raises(self):
        with pytest.raises(SingularBasis):
            solve_coordinates((vec((1, 0)), vec((2, 0))), vec((1, 1)))


class TestDualBasis:
    def test_standard(self):
        basis = (vec((1, 0)), vec((0, 1)))
        assert dual_basis(basis) == [vec((1, 0)), vec((0, 1))]

    def test_example(self):
        duals = dual_basis((vec((1, 1)), vec((0, 1))))
        assert duals == [vec((1, 0)), vec((-1, 1))]

    def test_dependent_raises(self):
        with pytest.raises(SingularBasis):
            dual_basis((vec((1, 0)), vec((2, 0))))

    def test_kronecker_property_randomized(self):
        rng = random.Random(20240917)
        trials = 0
        while trials < 400:
            r = rng.choice((2, 3, 4))
            basis = tuple(
                vec([F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(r)])
                for _ in range(r)
            )
            try:
                duals = dual_basis(basis)
            except SingularBasis:
                continue
            trials += 1
            for i in range(r):
                for j in range(r):
                    assert vdot(basis[i], duals[j]) == (1 if i == j else 0)


class TestPrimitiveNormalize:
    def test_examples(self):
        assert primitive_normalize(vec((2, -4, 0))) == vec((1, -2, 0))
        assert primitive_normalize(vec(("-1/2", "1/2", "1/2", "0"))) == vec((1, -1, -1, 0))
        with pytest.raises(ZeroCovector):
            primitive_normalize(vec((0, 0, 0)))

    def test_ray_preserves_orientation(self):
        assert primitive_ray(vec(("-1/2", "1/2"))) == vec((-1, 1))

    @given(
        st.lists(
            st.fractions(min_value=F(-50), max_value=F(50), max_denominator=40),
            min_size=2,
            max_size=4,
        ),
        st.fractions(min_value=F(1, 30), max_value=F(50), max_denominator=30),
    )
    @settings(max_examples=300, deadline=None)
    def test_idempotent_and_scale_invariant(self, coords, scale):
        if all(c == 0 for c in coords):
            return
        alpha = vec(coords)
        key = primitive_normalize(alpha)
        assert primitive_normalize(key) == key
        assert primitive_normalize(vec([scale * c for c in coords])) == key


class TestSignAt:
    def test_examples(self):
        assert sign_at(vec((1, 0)), vec((3, 5))) == 1
        assert sign_at(vec((1, -1)), vec((2, 2))) == 0
        assert sign_at(vec(("1/2", "-1")), vec((1, 1))) == -1


class TestSolveRoundtrip:
    def test_randomized_exact(self):
        rng = random.Random(77)
        done = 0
        while done < 400:
            r = rng.choice((2, 3, 4))
            basis = tuple(vec([rng.randint(-6, 6) for _ in range(r)]) for _ in range(r))
            lam = vec([F(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(r)])
            target = tuple(
                sum((lam[i] * basis[i][k] for i in range(r)), start=rat(0)) for k in range(r)
            )
            try:
                got = solve_coordinates(basis, target)
            except SingularBasis:
                continue
            done += 1
            assert got == lam


class TestSpanAndKernel:
    def test_solve_in_span(self):
        spanning = (vec((1, 0, 0)), vec((0, 1, 1)))
        assert solve_in_span(spanning, vec((2, 3, 3))) == (rat(2), rat(3))
        assert solve_in_span(spanning, vec((0, 1, 0))) is None

    def test_nullspace_orthogonality(self):
        rows = [vec((1, 1, 0, 0)), vec((0, 0, 1, -1))]
        kernel = nullspace(rows)
        assert len(kernel) == 2
        for v in kernel:
            for row in rows:
                assert vdot(row, v) == 0
