from fractions import Fraction
import logging
from random import Random

import pytest

from src import catalog
from src.algebra import LinearOperator, RBLeibnizAlgebra
from src.cohomology import (
    Cochain,
    CochainSpace,
    ComplexKind,
    NotACocycleError,
    cochain_dimension,
    cohomology_dimension,
    cohomology_dimensions,
    d_matrix,
    delta_matrix,
    differential,
    is_cocycle,
    partial_matrix,
    partial_matrix_expanded,
    phi_matrix,
    rbla_coords,
    same_class,
    split_rbla,
    verify_complex,
    verify_phi_chain_map,
    verify_short_exact_dimensions,
)
from src.config import Settings
from src.linalg import RatMatrix, ShapeError, vector, zero_vector
from src.representations import Representation, self_representation
from tests.oracle import DenseComplexes


def test_cochain_space_indexing():
    space = CochainSpace(2, 3, 2)
    assert space.dimension == 18
    assert space.index((1, 2), 1) == (1 * 3 + 2) * 2 + 1
    assert space.multi_index(space.index((2, 0), 1)) == ((2, 0), 1)
    assert list(space.multi_indices())[:2] == [(0, 0), (0, 1)]
    with pytest.raises(ShapeError):
        _ = space.index((3, 0), 0)


def test_cochain_evaluation_is_multilinear():
    b = catalog.solvable3(1, 1).bracket
    f = Cochain.from_bilinear(b)
    x, y = vector([1, Fraction(1, 2), -2]), vector([3, 0, 1])
    assert f.evaluate([x, y]) == b(x, y)
    assert f.to_bilinear() == b
    op = LinearOperator.from_rows([[1, 2, 0], [0, 1, 5]], dim_in=3)
    assert Cochain.from_operator(op).to_operator() == op


def test_rbla_coordinates_split_back():
    alpha = Cochain.basis(CochainSpace(2, 2, 2), 3)
    beta = Cochain.basis(CochainSpace(1, 2, 2), 1)
    coords = rbla_coords(alpha, beta)
    assert len(coords) == cochain_dimension(ComplexKind.RBLA, 2, 2, 2)
    assert split_rbla(coords, 2, 2, 2) == (alpha, beta)
    with pytest.raises(ShapeError):
        _ = rbla_coords(alpha, alpha)


def test_cochain_dimensions():
    assert cochain_dimension(ComplexKind.LA, 3, 2, 2) == 18
    assert cochain_dimension(ComplexKind.RBO, 3, 2, 0) == 2
    assert cochain_dimension(ComplexKind.RBLA, 3, 2, 0) == 2
    assert cochain_dimension(ComplexKind.RBLA, 3, 2, 2) == 24
    assert cochain_dimension(ComplexKind.LA, 3, 2, -1) == 0


def test_differential_shapes(plane: RBLeibnizAlgebra):
    r = self_representation(plane)
    assert delta_matrix(plane.alg, r, 1).shape == (8, 4)
    assert phi_matrix(plane, r, 2).shape == (8, 8)
    assert d_matrix(plane, r, 0).shape == (6, 2)
    assert d_matrix(plane, r, 2).shape == (16 + 8, 8 + 4)
    assert phi_matrix(plane, r, 0) == RatMatrix.identity(2)


@pytest.mark.parametrize("kind", list(ComplexKind))
def test_differentials_square_to_zero(fixture_algebra: RBLeibnizAlgebra, kind: ComplexKind):
    assert verify_complex(fixture_algebra, self_representation(fixture_algebra), kind, 3)


@pytest.mark.parametrize("seed", range(50))
def test_differentials_square_to_zero_on_random_algebras(seed: int):
    rng = Random(seed)
    a = catalog.random_algebra(rng)
    r = catalog.random_representation(rng, a)
    for kind in ComplexKind:
        assert verify_complex(a, r, kind, 3)
    assert verify_phi_chain_map(a, r, 3)


def test_phi_intertwines_delta_and_partial(fixture_algebra: RBLeibnizAlgebra):
    r = self_representation(fixture_algebra)
    assert verify_phi_chain_map(fixture_algebra, r, 3)
    # φ⁰ is the identity, so the degree 0 square reads φ¹δ⁰ = ∂⁰.
    lhs = phi_matrix(fixture_algebra, r, 1) @ delta_matrix(fixture_algebra.alg, r, 0)
    assert lhs == partial_matrix(fixture_algebra, r, 0)


def test_expanded_partial_matches_star_construction(fixture_algebra: RBLeibnizAlgebra):
    r = self_representation(fixture_algebra)
    for n in range(3):
        expanded = partial_matrix_expanded(fixture_algebra, r, n)
        assert expanded == partial_matrix(fixture_algebra, r, n)


@pytest.mark.parametrize("seed", range(10))
def test_expanded_partial_matches_on_random_representations(seed: int):
    rng = Random(seed)
    a = catalog.random_algebra(rng)
    r = catalog.random_representation(rng, a)
    for n in range(3):
        assert partial_matrix_expanded(a, r, n) == partial_matrix(a, r, n)


def test_short_exact_sequence(fixture_algebra: RBLeibnizAlgebra):
    assert verify_short_exact_dimensions(fixture_algebra, self_representation(fixture_algebra), 3)


def test_plane_golden_values(plane: RBLeibnizAlgebra):
    r = self_representation(plane)
    assert cohomology_dimensions(plane, r, ComplexKind.LA, 2) == [1, 0, 0]
    assert cohomology_dimensions(plane, r, ComplexKind.RBO, 1) == [1, 1]
    assert cohomology_dimensions(plane, r, ComplexKind.RBLA, 2) == [0, 0, 1]
    assert cohomology_dimension(plane, r, 2, ComplexKind.RBLA) == 1


@pytest.mark.parametrize("kind, degree", [("la", 2), ("rbo", 2), ("rbla", 2)])
def test_golden_values_agree_with_dense_oracle(
    plane: RBLeibnizAlgebra, kind: str, degree: int
):
    r = self_representation(plane)
    oracle = DenseComplexes(plane, r)
    complex_kind = ComplexKind(kind)
    for n in range(degree + 1):
        assert differential(plane, r, complex_kind, n).to_rows() == oracle.differential(kind, n)
    dims = cohomology_dimensions(plane, r, complex_kind, degree)
    assert dims == oracle.cohomology(kind, degree)


@pytest.mark.parametrize("seed", range(8))
def test_random_cohomology_agrees_with_dense_oracle(seed: int):
    rng = Random(seed)
    a = catalog.random_algebra(rng, max_dim=2)
    r = catalog.random_representation(rng, a)
    oracle = DenseComplexes(a, r)
    for kind in ComplexKind:
        assert cohomology_dimensions(a, r, kind, 2) == oracle.cohomology(kind.value, 2)


def test_abelian_zero_case_closed_form():
    a = catalog.abelian(3)
    r = self_representation(a)
    assert r == Representation.zero(3, 3)
    dims = cohomology_dimensions(a, r, ComplexKind.RBLA, 3)
    # d⁰ = (0, −id) is injective, so degree 1 loses dim_v classes to it.
    assert dims == [0, 3 * 3, 3 * (9 + 3), 3 * (27 + 9)]
    assert cohomology_dimensions(a, r, ComplexKind.LA, 3) == [3, 9, 27, 81]


def test_operator_infinitesimal_is_a_coboundary(plane: RBLeibnizAlgebra):
    r = self_representation(plane)
    zero_bracket = Cochain.zero(CochainSpace(2, 2, 2))
    z = rbla_coords(zero_bracket, Cochain.from_operator(plane.t))
    assert is_cocycle(plane, r, 2, ComplexKind.RBLA, z)
    assert same_class(plane, r, 2, ComplexKind.RBLA, z, zero_vector(len(z)))


def test_same_class_rejects_non_cocycles(plane: RBLeibnizAlgebra):
    r = self_representation(plane)
    with pytest.raises(NotACocycleError):
        _ = same_class(plane, r, 0, ComplexKind.RBLA, vector([1, 0]), vector([0, 0]))
    with pytest.raises(ShapeError):
        _ = is_cocycle(plane, r, 1, ComplexKind.LA, vector([1]))


def test_coboundaries_share_the_zero_class(solvable3: RBLeibnizAlgebra):
    r = self_representation(solvable3)
    d1 = d_matrix(solvable3, r, 1)
    z = d1.apply(vector(range(d1.cols)))
    assert same_class(solvable3, r, 2, ComplexKind.RBLA, z, zero_vector(len(z)))


def test_parallel_assembly_matches_sequential(solvable3: RBLeibnizAlgebra):
    r = self_representation(solvable3)
    sequential = delta_matrix(solvable3.alg, r, 2, Settings(jobs=1))
    assert delta_matrix(solvable3.alg, r, 2, Settings(jobs=2)) == sequential


def test_large_cochain_spaces_are_reported(
    solvable3: RBLeibnizAlgebra, caplog: pytest.LogCaptureFixture
):
    r = self_representation(solvable3)
    with caplog.at_level(logging.WARNING, logger="src.cohomology"):
        _ = delta_matrix(solvable3.alg, r, 2, Settings(column_warning_limit=10))
    assert "above the limit of 10" in caplog.text


def test_representation_must_match_algebra(plane: RBLeibnizAlgebra):
    r = self_representation(catalog.solvable3(1, 1))
    with pytest.raises(ShapeError):
        _ = delta_matrix(plane.alg, r, 1)
    with pytest.raises(ValueError):
        _ = delta_matrix(plane.alg, self_representation(plane), -1)


def test_zero_bracket_gives_zero_loday_pirashvili_differential():
    a = RBLeibnizAlgebra.raw(catalog.abelian(2).alg, LinearOperator.zero(2))
    r = Representation.zero(2, 1)
    assert delta_matrix(a.alg, r, 2).is_zero()


def test_non_leibniz_bracket_breaks_the_complex():
    a = RBLeibnizAlgebra.raw(catalog.non_leibniz(), LinearOperator.zero(2))
    # δ¹δ⁰u(x, y) is the Leibniz defect at (u, x, y).
    assert not verify_complex(a, self_representation(a), ComplexKind.LA, 1)
