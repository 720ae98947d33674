from random import Random

import pytest

from src import catalog
from src.algebra import (
    BilinearMap,
    LeibnizAlgebra,
    LinearOperator,
    RBLeibnizAlgebra,
    check_leibniz,
    check_rota_baxter,
)
from src.cohomology import (
    Cochain,
    ComplexKind,
    cohomology_dimension,
    d_matrix,
    rbla_coords,
)
from src.deformations import (
    DegreeMismatchError,
    InvalidDeformationError,
    RigidityCertificate,
    TruncatedDeformation,
    TruncatedIsomorphism,
    check_deformation,
    check_equivalence,
    check_infinitesimal_cocycle,
    class_of_infinitesimals_equal,
    extension_residual,
    infinitesimal,
    rigidity_certificate,
    scaling_deformation,
    transport_deformation,
    trivialize,
    trivializing_map,
)
from src.linalg import RatMatrix, RatVector, ShapeError, zero_vector
from src.representations import self_representation


def _zero_bracket(a: RBLeibnizAlgebra) -> BilinearMap:
    return BilinearMap.zero(a.dim, a.dim, a.dim)


def _operator_deformation(a: RBLeibnizAlgebra) -> TruncatedDeformation:
    """(μ, T + tT)."""
    return TruncatedDeformation.new(a, [_zero_bracket(a)], [a.t])


def _order_one_coboundary(a: RBLeibnizAlgebra, psi: LinearOperator) -> RatVector:
    """d¹(ψ, 0) = (δ¹ψ, −φ¹ψ) in RBLA coordinates."""
    coords = Cochain.from_operator(psi).coords + zero_vector(a.dim)
    return d_matrix(a, self_representation(a), 1).apply(coords)


def test_constant_deformation(fixture_algebra: RBLeibnizAlgebra):
    d = TruncatedDeformation.constant(fixture_algebra, 3)
    assert check_deformation(d) == []
    assert infinitesimal(d) is None
    assert check_infinitesimal_cocycle(d)
    assert extension_residual(d).is_zero()


def test_operator_infinitesimal_is_a_cocycle(fixture_algebra: RBLeibnizAlgebra):
    if fixture_algebra.t.is_zero():
        pytest.skip("zero operator gives the constant deformation")
    d = _operator_deformation(fixture_algebra)
    assert check_deformation(d) == []
    inf = infinitesimal(d)
    assert inf is not None
    assert inf.degree == 1
    assert inf.mu.is_zero()
    assert check_infinitesimal_cocycle(d)


def test_scaling_deformation_holds_at_every_order(fixture_algebra: RBLeibnizAlgebra):
    d = scaling_deformation(fixture_algebra, 3)
    assert check_deformation(d) == []
    assert check_infinitesimal_cocycle(d)
    assert extension_residual(d).is_zero()


def test_higher_degree_infinitesimal():
    a = catalog.solvable3(1, 1)
    # (μ, T + t²T)
    d = TruncatedDeformation.new(a, [_zero_bracket(a)] * 2, [LinearOperator.zero(3), a.t])
    assert check_deformation(d) == []
    inf = infinitesimal(d)
    assert inf is not None and inf.degree == 2
    assert check_infinitesimal_cocycle(d)
    with pytest.raises(DegreeMismatchError):
        _ = class_of_infinitesimals_equal(
            d, TruncatedDeformation.new(a, [_zero_bracket(a)] * 2, [a.t, LinearOperator.zero(3)])
        )


def test_residual_of_a_non_leibniz_first_order_term():
    a = catalog.abelian(2)
    d = TruncatedDeformation.new(a, [catalog.non_leibniz().bracket], [LinearOperator.zero(2)])
    assert check_deformation(d) == []
    residual = extension_residual(d)
    assert residual.order == 2
    assert not residual.leibniz.is_zero()
    assert residual.rota_baxter.is_zero()


@pytest.mark.parametrize("seed", range(20))
def test_order_zero_checker_agrees_on_valid_algebras(seed: int):
    a = catalog.random_algebra(Random(seed))
    d = TruncatedDeformation.new(a, [], [])
    assert check_deformation(d, 0) == []


@pytest.mark.parametrize("seed", range(20))
def test_order_zero_checker_agrees_on_random_brackets(seed: int):
    rng = Random(seed)
    dim = rng.randint(2, 3)
    bracket = catalog.random_bracket(rng, dim)
    t = catalog.random_operator(rng, dim, dim)
    a = RBLeibnizAlgebra.raw(LeibnizAlgebra.raw(bracket), t)
    expected = check_leibniz(bracket) + check_rota_baxter(a.alg, t)
    found = check_deformation(TruncatedDeformation.new(a, [], []), 0)
    assert [(v.rule, v.indices, v.defect) for v in found] == [
        (v.rule, v.indices, v.defect) for v in expected
    ]
    assert all(v.order == 0 for v in found)


def test_failing_deformation_cannot_be_checked_for_cocycles():
    base = RBLeibnizAlgebra.raw(catalog.non_leibniz(), LinearOperator.zero(2))
    d = TruncatedDeformation.new(base, [catalog.non_leibniz().bracket], [LinearOperator.zero(2)])
    assert any(v.order == 0 for v in check_deformation(d))
    with pytest.raises(InvalidDeformationError):
        _ = check_infinitesimal_cocycle(d)


@pytest.mark.parametrize("seed", range(10))
def test_first_order_equivalence_is_a_coboundary(fixture_algebra: RBLeibnizAlgebra, seed: int):
    a = fixture_algebra
    psi = catalog.random_operator(Random(seed), a.dim, a.dim)
    iso = TruncatedIsomorphism.new(a.dim, [psi])
    constant = TruncatedDeformation.constant(a, 1)
    moved = transport_deformation(constant, iso)
    assert check_deformation(moved) == []
    assert check_equivalence(constant, moved, iso) == []
    inf = infinitesimal(moved)
    if psi.is_zero() or inf is None:
        return
    # ψ_t = id + tψ turns the undeformed structure into (δ¹ψ, −φ¹ψ).
    assert inf.coords == _order_one_coboundary(a, psi)
    assert class_of_infinitesimals_equal(constant, moved)


@pytest.mark.parametrize("seed", range(5))
def test_equivalent_deformations_have_equal_classes(fixture_algebra: RBLeibnizAlgebra, seed: int):
    a = fixture_algebra
    rng = Random(seed)
    iso = TruncatedIsomorphism.new(
        a.dim, [catalog.random_operator(rng, a.dim, a.dim) for _ in range(2)]
    )
    operator_only = TruncatedDeformation.new(
        a, [_zero_bracket(a)] * 2, [a.t, LinearOperator.zero(a.dim)]
    )
    for d in (scaling_deformation(a, 2), operator_only):
        moved = transport_deformation(d, iso)
        assert check_deformation(moved) == []
        assert check_equivalence(d, moved, iso) == []
        inf, inf_moved = infinitesimal(d), infinitesimal(moved)
        if inf is not None and inf_moved is not None and inf.degree != inf_moved.degree:
            # ψ₁ cancelled the whole first-order term.
            with pytest.raises(DegreeMismatchError):
                _ = class_of_infinitesimals_equal(d, moved)
            continue
        assert class_of_infinitesimals_equal(d, moved)


def test_broken_equivalence_is_reported(plane: RBLeibnizAlgebra):
    d = _operator_deformation(plane)
    iso = TruncatedIsomorphism.new(2, [LinearOperator.identity(2)])
    moved = transport_deformation(d, iso)
    wrong = TruncatedIsomorphism.identity(2, 1)
    violations = check_equivalence(d, moved, wrong)
    assert violations
    assert all(v.order == 1 for v in violations)


def test_isomorphism_must_start_at_identity():
    with pytest.raises(ValueError):
        _ = TruncatedIsomorphism(1, (LinearOperator.zero(2), LinearOperator.zero(2)))
    with pytest.raises(ShapeError):
        _ = TruncatedDeformation.new(catalog.plane(1), [], [LinearOperator.zero(2)])


def test_trivializing_map_kills_a_coboundary_infinitesimal(solvable3: RBLeibnizAlgebra):
    a = solvable3
    psi = LinearOperator.from_rows([[1, 0, 2], [0, -1, 1], [1, 1, 0]])
    d = transport_deformation(
        TruncatedDeformation.constant(a, 1), TruncatedIsomorphism.new(3, [psi])
    )
    inf = infinitesimal(d)
    assert inf is not None
    found = trivializing_map(d)
    assert found is not None
    degree, psi_found = found
    assert degree == 1
    assert _order_one_coboundary(a, psi_found) == inf.coords
    result = trivialize(d)
    assert result is not None
    iso, transported = result
    assert check_equivalence(d, transported, iso) == []
    assert infinitesimal(transported) is None


def test_operator_infinitesimal_of_plane_is_trivial(plane: RBLeibnizAlgebra):
    d = _operator_deformation(plane)
    assert trivializing_map(d) is not None
    result = trivialize(d)
    assert result is not None
    assert infinitesimal(result[1]) is None


def test_rigidity_certificate_matches_second_cohomology(fixture_algebra: RBLeibnizAlgebra):
    a = fixture_algebra
    h2 = cohomology_dimension(a, self_representation(a), 2, ComplexKind.RBLA)
    certificate = rigidity_certificate(a)
    assert (certificate is not None) == (h2 == 0)
    if certificate is not None:
        d2 = d_matrix(a, self_representation(a), 2)
        assert certificate.cochain_dim == d2.cols
        assert certificate.rank_d1 + certificate.rank_d2 == d2.cols


def test_plane_is_not_certified_rigid(plane: RBLeibnizAlgebra):
    assert rigidity_certificate(plane) is None


def test_infinitesimal_coordinates(plane: RBLeibnizAlgebra):
    inf = infinitesimal(_operator_deformation(plane))
    assert inf is not None
    assert inf.coords == rbla_coords(inf.mu, inf.t)
    assert inf.t.to_operator().m == RatMatrix.from_rows([[0, 1], [0, 0]])


def test_empty_algebra_is_certified_rigid():
    assert rigidity_certificate(catalog.abelian(0)) == RigidityCertificate(0, 0, 0)


def test_operator_deformation_of_plane_holds_through_order_three(plane: RBLeibnizAlgebra):
    zero = LinearOperator.zero(2)
    d = TruncatedDeformation.new(plane, [_zero_bracket(plane)] * 3, [plane.t, zero, zero])
    assert d.order == 3
    assert check_deformation(d) == []
    assert check_infinitesimal_cocycle(d)
