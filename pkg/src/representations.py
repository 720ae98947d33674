from dataclasses import dataclass
import logging
from typing import final

from .algebra import (
    BilinearMap,
    LeibnizAlgebra,
    LinearOperator,
    RBLeibnizAlgebra,
    Violation,
    induced_bracket_star,
)
from .linalg import (
    InternalError,
    RatVector,
    ShapeError,
    add_vectors,
    is_zero_vector,
    sub_vectors,
    unit_vector,
)

l = logging.getLogger(__name__)


class InvalidRepresentationError(ValueError):
    pass


@final
@dataclass(frozen=True)
class Representation:
    """(V, l_V, r_V, T_V).

    `left` maps g × V → V and `right` maps V × g → V, both as structure constants in the
    fixed bases of g and V.
    """

    dim_g: int
    dim_v: int
    left: BilinearMap
    right: BilinearMap
    t_v: LinearOperator

    def __post_init__(self):
        if (self.left.left_dim, self.left.right_dim, self.left.out_dim) != (
            self.dim_g,
            self.dim_v,
            self.dim_v,
        ):
            raise ShapeError("Left action must map g × V → V")
        if (self.right.left_dim, self.right.right_dim, self.right.out_dim) != (
            self.dim_v,
            self.dim_g,
            self.dim_v,
        ):
            raise ShapeError("Right action must map V × g → V")
        if self.t_v.dim_in != self.dim_v or self.t_v.dim_out != self.dim_v:
            raise ShapeError(f"T_V must be {self.dim_v}x{self.dim_v}")

    @staticmethod
    def zero(dim_g: int, dim_v: int, t_v: LinearOperator | None = None) -> "Representation":
        return Representation(
            dim_g,
            dim_v,
            BilinearMap.zero(dim_g, dim_v, dim_v),
            BilinearMap.zero(dim_v, dim_g, dim_v),
            t_v if t_v is not None else LinearOperator.zero(dim_v),
        )

    def l(self, x: RatVector, u: RatVector) -> RatVector:
        return self.left(x, u)

    def r(self, u: RatVector, x: RatVector) -> RatVector:
        return self.right(u, x)


def _check_shapes(dim_g: int, r: Representation):
    if r.dim_g != dim_g:
        raise ShapeError(f"Representation is over an algebra of dimension {r.dim_g}, not {dim_g}")


def check_representation(a: LeibnizAlgebra, r: Representation) -> list[Violation]:
    _check_shapes(a.dim, r)
    xs = [unit_vector(a.dim, i) for i in range(a.dim)]
    us = [unit_vector(r.dim_v, k) for k in range(r.dim_v)]
    violations: list[Violation] = []
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            xy = a.bracket.on_basis(i, j)
            for k, u in enumerate(us):
                left_left = sub_vectors(
                    r.l(x, r.l(y, u)), add_vectors(r.l(xy, u), r.l(y, r.l(x, u)))
                )
                if not is_zero_vector(left_left):
                    violations.append(Violation("left-left", (i, j, k), left_left))
                left_right = sub_vectors(
                    r.l(x, r.r(u, y)), add_vectors(r.r(r.l(x, u), y), r.r(u, xy))
                )
                if not is_zero_vector(left_right):
                    violations.append(Violation("left-right", (i, j, k), left_right))
                right_right = sub_vectors(
                    r.r(u, xy), add_vectors(r.r(r.r(u, x), y), r.l(x, r.r(u, y)))
                )
                if not is_zero_vector(right_right):
                    violations.append(Violation("right-right", (i, j, k), right_right))
    return violations


def check_rb_representation(a: RBLeibnizAlgebra, r: Representation) -> list[Violation]:
    _check_shapes(a.dim, r)
    t, t_v = a.t, r.t_v
    violations: list[Violation] = []
    for i in range(a.dim):
        x = unit_vector(a.dim, i)
        tx = t(x)
        for k in range(r.dim_v):
            u = unit_vector(r.dim_v, k)
            tu = t_v(u)
            left = sub_vectors(r.l(tx, tu), t_v(add_vectors(r.l(tx, u), r.l(x, tu))))
            if not is_zero_vector(left):
                violations.append(Violation("operator-left", (i, k), left))
            right = sub_vectors(r.r(tu, tx), t_v(add_vectors(r.r(tu, x), r.r(u, tx))))
            if not is_zero_vector(right):
                violations.append(Violation("operator-right", (k, i), right))
    return violations


def validate_rb_representation(a: RBLeibnizAlgebra, r: Representation):
    violations = check_representation(a.alg, r) + check_rb_representation(a, r)
    if violations:
        raise InvalidRepresentationError(f"Invalid representation: {violations[0].describe()}")


def self_representation(a: RBLeibnizAlgebra) -> Representation:
    return Representation(a.dim, a.dim, a.bracket, a.bracket, a.t)


def induced_representation(a: RBLeibnizAlgebra, r: Representation) -> Representation:
    """(V, l′_V, r′_V, T_V) over the star algebra."""
    validate_rb_representation(a, r)
    induced = _induced_actions(a, r)

    star = induced_bracket_star(a)
    violations = check_representation(star.alg, induced) + check_rb_representation(star, induced)
    if violations:
        l.error(f"Induced representation failed validation: {violations[0].describe()}")
        raise InternalError("Induced representation is not a representation of the star algebra")
    return induced


def _induced_actions(a: RBLeibnizAlgebra, r: Representation) -> Representation:
    dim_g, dim_v = a.dim, r.dim_v
    t, t_v = a.t, r.t_v

    def left(i: int, k: int) -> RatVector:
        u = unit_vector(dim_v, k)
        return sub_vectors(r.l(t.on_basis(i), u), t_v(r.left.on_basis(i, k)))

    def right(k: int, i: int) -> RatVector:
        u = unit_vector(dim_v, k)
        return sub_vectors(r.r(u, t.on_basis(i)), t_v(r.right.on_basis(k, i)))

    return Representation(
        dim_g,
        dim_v,
        BilinearMap.from_function(dim_g, dim_v, dim_v, left),
        BilinearMap.from_function(dim_v, dim_g, dim_v, right),
        t_v,
    )


def dual_representation(a: RBLeibnizAlgebra, r: Representation) -> Representation:
    """(V*, l_V*, r_V*, −T_V*) in the dual basis of V."""
    validate_rb_representation(a, r)
    dim_g, dim_v = a.dim, r.dim_v

    # l*(e_i, f_a)(v_c) = −f_a(l(e_i, v_c)); r*(f_a, e_i)(v_c) = f_a(l(e_i, v_c) + r(v_c, e_i))
    def left(i: int, fa: int) -> RatVector:
        return tuple(-r.left.c[i][c][fa] for c in range(dim_v))

    def right(fa: int, i: int) -> RatVector:
        return tuple(r.left.c[i][c][fa] + r.right.c[c][i][fa] for c in range(dim_v))

    return Representation(
        dim_g,
        dim_v,
        BilinearMap.from_function(dim_g, dim_v, dim_v, left),
        BilinearMap.from_function(dim_v, dim_g, dim_v, right),
        -r.t_v.transpose(),
    )

