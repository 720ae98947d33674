from dataclasses import dataclass
from functools import cached_property
import logging
from typing import final

from .algebra import (
    BilinearMap,
    LeibnizAlgebra,
    LinearOperator,
    RBLeibnizAlgebra,
    Violation,
    check_leibniz,
    check_morphism,
    check_rota_baxter,
)
from .cohomology import Cochain, CochainSpace, ComplexKind, rbla_coords, same_class
from .config import DEFAULT_SETTINGS, Settings
from .linalg import (
    RatMatrix,
    RatVector,
    ShapeError,
    hstack,
    is_invertible,
    is_zero_vector,
    left_inverse,
    rank,
    right_inverse,
    sub_vectors,
    unit_vector,
    vstack,
    zero_vector,
)
from .representations import Representation

l = logging.getLogger(__name__)


class InvalidExtensionError(ValueError):
    pass


@final
@dataclass(frozen=True)
class AbelianExtension:
    """0 → (V, T_V) --i--> (ĝ, T̂) --p--> (g, T) → 0 with V an abelian ideal of ĝ."""

    total: RBLeibnizAlgebra
    fiber_t: LinearOperator
    inclusion: LinearOperator
    projection: LinearOperator
    base: RBLeibnizAlgebra

    def __post_init__(self):
        if not self.fiber_t.is_square:
            raise ShapeError("T_V must be square")
        if (self.inclusion.dim_in, self.inclusion.dim_out) != (self.dim_v, self.total.dim):
            raise ShapeError(f"Inclusion must map V (dim {self.dim_v}) into ĝ")
        if (self.projection.dim_in, self.projection.dim_out) != (self.total.dim, self.base.dim):
            raise ShapeError("Projection must map ĝ onto g")

    @property
    def dim_v(self) -> int:
        return self.fiber_t.dim_in

    def fiber_coordinates(self, w: RatVector) -> RatVector:
        if not is_zero_vector(self.projection(w)):
            raise InvalidExtensionError("Element does not lie in the image of V")
        return self._fiber_inverse.apply(w)

    @cached_property
    def _fiber_inverse(self) -> RatMatrix:
        try:
            return left_inverse(self.inclusion.m)
        except ShapeError:
            raise InvalidExtensionError("Inclusion is not injective") from None


@final
@dataclass(frozen=True)
class Section:
    s: LinearOperator

    @staticmethod
    def checked(e: AbelianExtension, s: LinearOperator) -> "Section":
        if (s.dim_in, s.dim_out) != (e.base.dim, e.total.dim):
            raise ShapeError("A section must map g into ĝ")
        if e.projection.m @ s.m != RatMatrix.identity(e.base.dim):
            raise InvalidExtensionError("Section is not a right inverse of the projection")
        return Section(s)


def check_extension(e: AbelianExtension) -> list[Violation]:
    violations: list[Violation] = []
    total, base = e.total, e.base
    i, p = e.inclusion, e.projection

    violations += [
        Violation(f"total-{v.rule}", v.indices, v.defect) for v in check_leibniz(total.bracket)
    ]
    violations += [
        Violation(f"total-{v.rule}", v.indices, v.defect)
        for v in check_rota_baxter(total.alg, total.t)
    ]

    if total.dim != base.dim + e.dim_v:
        violations.append(Violation("dimension", (total.dim, base.dim, e.dim_v), ()))
    if rank(i.m) != e.dim_v:
        violations.append(Violation("inclusion-injective", (), ()))
    if rank(p.m) != base.dim:
        violations.append(Violation("projection-surjective", (), ()))

    composite = p.m @ i.m
    for a in range(e.dim_v):
        defect = composite.column(a)
        if not is_zero_vector(defect):
            violations.append(Violation("exactness", (a,), defect))

    for a in range(e.dim_v):
        for b in range(e.dim_v):
            defect = total.bracket(i.on_basis(a), i.on_basis(b))
            if not is_zero_vector(defect):
                violations.append(Violation("abelian-fiber", (a, b), defect))

    # V is a two-sided ideal: brackets with i(V) die under p.
    for x in range(total.dim):
        ex = unit_vector(total.dim, x)
        for a in range(e.dim_v):
            for rule, value in (
                ("left-ideal", total.bracket(ex, i.on_basis(a))),
                ("right-ideal", total.bracket(i.on_basis(a), ex)),
            ):
                defect = p(value)
                if not is_zero_vector(defect):
                    violations.append(Violation(rule, (x, a), defect))

    for x in range(total.dim):
        for y in range(total.dim):
            defect = sub_vectors(
                p(total.bracket.on_basis(x, y)), base.bracket(p.on_basis(x), p.on_basis(y))
            )
            if not is_zero_vector(defect):
                violations.append(Violation("projection-homomorphism", (x, y), defect))

    fiber_square = total.t.m @ i.m - i.m @ e.fiber_t.m
    for a in range(e.dim_v):
        defect = fiber_square.column(a)
        if not is_zero_vector(defect):
            violations.append(Violation("inclusion-operator", (a,), defect))
    base_square = p.m @ total.t.m - base.t.m @ p.m
    for x in range(total.dim):
        defect = base_square.column(x)
        if not is_zero_vector(defect):
            violations.append(Violation("projection-operator", (x,), defect))
    return violations


def default_section(e: AbelianExtension) -> Section:
    try:
        s = right_inverse(e.projection.m)
    except ShapeError:
        raise InvalidExtensionError("Projection is not surjective") from None
    return Section(LinearOperator.of(s))


def section_induced_actions(e: AbelianExtension, s: Section) -> Representation:
    """l̄(x, u) = [s(x), u]^ and r̄(u, x) = [u, s(x)]^, read back in V."""
    section = Section.checked(e, s.s)
    bracket, i = e.total.bracket, e.inclusion
    dim_g, dim_v = e.base.dim, e.dim_v

    def left(x: int, a: int) -> RatVector:
        return e.fiber_coordinates(bracket(section.s.on_basis(x), i.on_basis(a)))

    def right(a: int, x: int) -> RatVector:
        return e.fiber_coordinates(bracket(i.on_basis(a), section.s.on_basis(x)))

    return Representation(
        dim_g,
        dim_v,
        BilinearMap.from_function(dim_g, dim_v, dim_v, left),
        BilinearMap.from_function(dim_v, dim_g, dim_v, right),
        e.fiber_t,
    )


def extension_cocycle(e: AbelianExtension, s: Section) -> tuple[Cochain, Cochain]:
    """ψ(x, y) = [s(x), s(y)]^ − s([x, y]) and χ(x) = T̂(s(x)) − s(T(x)), in V-coordinates."""
    section = Section.checked(e, s.s).s
    total, base = e.total, e.base
    dim_g, dim_v = base.dim, e.dim_v

    def psi(multi: tuple[int, ...]) -> RatVector:
        x, y = multi
        lifted = total.bracket(section.on_basis(x), section.on_basis(y))
        return e.fiber_coordinates(sub_vectors(lifted, section(base.bracket.on_basis(x, y))))

    def chi(multi: tuple[int, ...]) -> RatVector:
        (x,) = multi
        lifted = total.t(section.on_basis(x))
        return e.fiber_coordinates(sub_vectors(lifted, section(base.t.on_basis(x))))

    return (
        Cochain.from_function(CochainSpace(2, dim_g, dim_v), psi),
        Cochain.from_function(CochainSpace(1, dim_g, dim_v), chi),
    )


def sections_same_class(
    e: AbelianExtension, s1: Section, s2: Section, settings: Settings = DEFAULT_SETTINGS
) -> bool:
    r = section_induced_actions(e, s1)
    z1 = rbla_coords(*extension_cocycle(e, s1))
    z2 = rbla_coords(*extension_cocycle(e, s2))
    return same_class(e.base, r, 2, ComplexKind.RBLA, z1, z2, settings)


def check_extension_isomorphism(
    e1: AbelianExtension, e2: AbelianExtension, xi: LinearOperator
) -> list[Violation]:
    if e1.base != e2.base or e1.fiber_t != e2.fiber_t:
        raise InvalidExtensionError("Extensions of different algebras or by different fibers")
    violations = check_morphism(e1.total, e2.total, xi)
    if not is_invertible(xi.m):
        violations.append(Violation("invertible", (), ()))
    inclusion_square = xi.m @ e1.inclusion.m - e2.inclusion.m
    for a in range(e1.dim_v):
        defect = inclusion_square.column(a)
        if not is_zero_vector(defect):
            violations.append(Violation("inclusion-compatible", (a,), defect))
    projection_square = e2.projection.m @ xi.m - e1.projection.m
    for x in range(e1.total.dim):
        defect = projection_square.column(x)
        if not is_zero_vector(defect):
            violations.append(Violation("projection-compatible", (x,), defect))
    return violations


def extensions_same_class(
    e1: AbelianExtension,
    e2: AbelianExtension,
    xi: LinearOperator,
    settings: Settings = DEFAULT_SETTINGS,
) -> bool:
    violations = check_extension_isomorphism(e1, e2, xi)
    if violations:
        raise InvalidExtensionError(f"Not an isomorphism of extensions: {violations[0].describe()}")
    s1 = default_section(e1)
    s2 = Section.checked(e2, xi.compose(s1.s))
    r = section_induced_actions(e1, s1)
    z1 = rbla_coords(*extension_cocycle(e1, s1))
    z2 = rbla_coords(*extension_cocycle(e2, s2))
    if z1 != z2:
        l.debug("Isomorphic extensions produced different cocycles for transported sections")
    return same_class(e1.base, r, 2, ComplexKind.RBLA, z1, z2, settings)


def synthesize_extension(
    a: RBLeibnizAlgebra, rep: Representation, psi: Cochain, chi: Cochain
) -> AbelianExtension:
    """ĝ = g ⊕ V with [(x,u), (y,v)] = ([x,y], l(x,v) + r(u,y) + ψ(x,y)).

    The operator is T̂(x,u) = (Tx, χ(x) + T_V u).
    """
    dim_g, dim_v = a.dim, rep.dim_v
    if psi.space != CochainSpace(2, dim_g, dim_v) or chi.space != CochainSpace(1, dim_g, dim_v):
        raise ShapeError("Cocycle parts do not match the algebra and representation")
    dim = dim_g + dim_v

    def bracket(x: int, y: int) -> RatVector:
        match (x < dim_g, y < dim_g):
            case (True, True):
                return a.bracket.on_basis(x, y) + psi.value((x, y))
            case (True, False):
                return zero_vector(dim_g) + rep.left.on_basis(x, y - dim_g)
            case (False, True):
                return zero_vector(dim_g) + rep.right.on_basis(x - dim_g, y)
            case _:
                return zero_vector(dim)

    total_bracket = BilinearMap.from_function(dim, dim, dim, bracket)
    chi_matrix = chi.to_operator().m
    total_t = vstack(
        [
            hstack([a.t.m, RatMatrix.zeros(dim_g, dim_v)]),
            hstack([chi_matrix, rep.t_v.m]),
        ]
    )
    inclusion = vstack([RatMatrix.zeros(dim_g, dim_v), RatMatrix.identity(dim_v)])
    projection = hstack([RatMatrix.identity(dim_g), RatMatrix.zeros(dim_g, dim_v)])
    return AbelianExtension(
        RBLeibnizAlgebra.raw(LeibnizAlgebra.raw(total_bracket), LinearOperator.of(total_t)),
        rep.t_v,
        LinearOperator.of(inclusion),
        LinearOperator.of(projection),
        a,
    )


def split_extension(a: RBLeibnizAlgebra, rep: Representation) -> AbelianExtension:
    return synthesize_extension(
        a,
        rep,
        Cochain.zero(CochainSpace(2, a.dim, rep.dim_v)),
        Cochain.zero(CochainSpace(1, a.dim, rep.dim_v)),
    )


def shifted_section(e: AbelianExtension, s: Section, gamma: LinearOperator) -> Section:
    """s + i∘γ for γ: g → V."""
    return Section.checked(e, LinearOperator.of(s.s.m + e.inclusion.m @ gamma.m))
