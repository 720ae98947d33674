"""Named Rota-Baxter Leibniz algebras and seeded random generators of valid ones."""

from collections.abc import Sequence
from dataclasses import replace
from fractions import Fraction
from random import Random

from .algebra import (
    BilinearMap,
    LeibnizAlgebra,
    LinearOperator,
    RBLeibnizAlgebra,
    check_leibniz,
    check_rota_baxter,
)
from .extensions import AbelianExtension
from .linalg import RatMatrix
from .representations import (
    Representation,
    check_rb_representation,
    check_representation,
    dual_representation,
    self_representation,
)

type Scalar = int | Fraction

ATTEMPTS = 100


def plane_algebra() -> LeibnizAlgebra:
    """ℝ² with [e₂,e₁] = [e₂,e₂] = e₁, i.e. [x,y] = x₂(y₁ + y₂)e₁."""
    return LeibnizAlgebra.raw(BilinearMap.square(2, {(1, 0, 0): 1, (1, 1, 0): 1}))


def plane(b: Scalar = 1) -> RBLeibnizAlgebra:
    return RBLeibnizAlgebra.raw(plane_algebra(), LinearOperator.from_rows([[0, b], [0, 0]]))


def solvable3_algebra() -> LeibnizAlgebra:
    # [e₃,e₂] = e₂, [e₃,e₁] = e₁ + e₂
    return LeibnizAlgebra.raw(
        BilinearMap.square(3, {(2, 1, 1): 1, (2, 0, 0): 1, (2, 0, 1): 1})
    )


def solvable3(b: Scalar = 1, c: Scalar = 1) -> RBLeibnizAlgebra:
    return RBLeibnizAlgebra.raw(
        solvable3_algebra(), LinearOperator.from_rows([[0, 0, b], [0, 0, c], [0, 0, 0]])
    )


def solvable3_idempotent() -> RBLeibnizAlgebra:
    return RBLeibnizAlgebra.raw(
        solvable3_algebra(), LinearOperator.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, 1]])
    )


def abelian(dim: int, t: Sequence[Sequence[Scalar]] | None = None) -> RBLeibnizAlgebra:
    op = LinearOperator.zero(dim) if t is None else LinearOperator.from_rows(t, dim_in=dim)
    return RBLeibnizAlgebra.raw(LeibnizAlgebra.abelian(dim), op)


def heisenberg_automorphic() -> RBLeibnizAlgebra:
    """Heisenberg algebra with T = diag(2, −1, −2), an automorphism that is also Rota-Baxter."""
    bracket = BilinearMap.square(3, {(0, 1, 2): 1, (1, 0, 2): -1})
    return RBLeibnizAlgebra.raw(
        LeibnizAlgebra.raw(bracket), LinearOperator.from_rows([[2, 0, 0], [0, -1, 0], [0, 0, -2]])
    )


def non_leibniz() -> LeibnizAlgebra:
    # Fails on (e₁, e₂, e₁).
    return LeibnizAlgebra.raw(BilinearMap.square(2, {(0, 0, 1): 1, (0, 1, 0): 1}))


def conjugate(a: RBLeibnizAlgebra, p: RatMatrix, p_inv: RatMatrix) -> RBLeibnizAlgebra:
    """Transport along x ↦ P⁻¹x: [x, y]′ = P⁻¹[Px, Py] and T′ = P⁻¹TP."""
    n = a.dim
    bracket = BilinearMap.from_function(
        n, n, n, lambda i, j: p_inv.apply(a.bracket(p.column(i), p.column(j)))
    )
    return RBLeibnizAlgebra.raw(LeibnizAlgebra.raw(bracket), LinearOperator.of(p_inv @ a.t.m @ p))


def random_unimodular(rng: Random, dim: int, steps: int = 4) -> tuple[RatMatrix, RatMatrix]:
    """An integer matrix with determinant ±1 and its integer inverse."""
    p = RatMatrix.identity(dim)
    p_inv = RatMatrix.identity(dim)
    if dim < 2:
        return p, p_inv
    for _ in range(steps):
        i, j = rng.sample(range(dim), 2)
        c = rng.choice([-2, -1, 1, 2])
        rows = RatMatrix.identity(dim).to_rows()
        rows[i][j] = Fraction(c)
        elementary = RatMatrix.from_rows(rows)
        rows[i][j] = Fraction(-c)
        elementary_inv = RatMatrix.from_rows(rows)
        p = p @ elementary
        p_inv = elementary_inv @ p_inv
    return p, p_inv


def _nonzero(rng: Random, bound: int) -> int:
    return rng.choice([v for v in range(-bound, bound + 1) if v != 0])


def random_operator(
    rng: Random, dim_in: int, dim_out: int, bound: int = 2, nonzero: int | None = None
) -> LinearOperator:
    """Entries in [−bound, bound]; with `nonzero`, only that many entries are set."""
    if nonzero is None:
        return LinearOperator.from_rows(
            [[rng.randint(-bound, bound) for _ in range(dim_in)] for _ in range(dim_out)],
            dim_in=dim_in,
        )
    rows = [[0] * dim_in for _ in range(dim_out)]
    cells = [(i, j) for i in range(dim_out) for j in range(dim_in)]
    for i, j in rng.sample(cells, min(nonzero, len(cells))):
        rows[i][j] = _nonzero(rng, bound)
    return LinearOperator.from_rows(rows, dim_in=dim_in)


def random_bilinear(
    rng: Random,
    left_dim: int,
    right_dim: int,
    out_dim: int,
    bound: int = 1,
    nonzero: int | None = None,
) -> BilinearMap:
    if nonzero is None:
        return BilinearMap.from_function(
            left_dim,
            right_dim,
            out_dim,
            lambda i, j: tuple(Fraction(rng.randint(-bound, bound)) for _ in range(out_dim)),
        )
    cells = [
        (i, j, k) for i in range(left_dim) for j in range(right_dim) for k in range(out_dim)
    ]
    picked = rng.sample(cells, min(nonzero, len(cells)))
    return BilinearMap.from_entries(
        left_dim, right_dim, out_dim, {cell: _nonzero(rng, bound) for cell in picked}
    )


def random_bracket(
    rng: Random, dim: int, bound: int = 1, nonzero: int | None = None
) -> BilinearMap:
    """Structure constants drawn independently, usually not Leibniz."""
    return random_bilinear(rng, dim, dim, dim, bound, nonzero)


def random_leibniz_bracket(rng: Random, dim: int, attempts: int = ATTEMPTS) -> BilinearMap:
    for _ in range(attempts):
        bracket = random_bracket(rng, dim, nonzero=rng.randint(1, dim + 1))
        if not check_leibniz(bracket):
            return bracket
    return BilinearMap.zero(dim, dim, dim)


def random_rota_baxter_operator(
    rng: Random, alg: LeibnizAlgebra, attempts: int = ATTEMPTS
) -> LinearOperator:
    for _ in range(attempts):
        t = random_operator(rng, alg.dim, alg.dim, nonzero=rng.randint(1, alg.dim))
        if not check_rota_baxter(alg, t):
            return t
    return LinearOperator.zero(alg.dim)


def _random_family_member(rng: Random, max_dim: int) -> RBLeibnizAlgebra:
    families = ["abelian", "plane", "solvable3", "idempotent", "heisenberg"]
    if max_dim < 3:
        families = ["abelian", "plane"]
    match rng.choice(families):
        case "abelian":
            dim = rng.randint(1, max_dim)
            return abelian(dim, random_operator(rng, dim, dim).m.to_rows())
        case "plane":
            return plane(Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        case "solvable3":
            return solvable3(rng.randint(-3, 3), rng.randint(-3, 3))
        case "idempotent":
            return solvable3_idempotent()
        case _:
            return heisenberg_automorphic()


def random_algebra(rng: Random, max_dim: int = 3) -> RBLeibnizAlgebra:
    """A valid Rota-Baxter Leibniz algebra of dimension 1..max_dim in a random integral basis.

    Mostly sparse random structure constants and operators kept only when they pass the
    Leibniz and Rota-Baxter checks, sometimes one of the named families.
    """
    if rng.random() < 0.25:
        a = _random_family_member(rng, max_dim)
    else:
        dim = rng.randint(1, max_dim)
        alg = LeibnizAlgebra.raw(random_leibniz_bracket(rng, dim))
        a = RBLeibnizAlgebra.raw(alg, random_rota_baxter_operator(rng, alg))
    p, p_inv = random_unimodular(rng, a.dim)
    return conjugate(a, p, p_inv)


def _random_actions(
    rng: Random, a: RBLeibnizAlgebra, dim_v: int, attempts: int = ATTEMPTS
) -> Representation:
    r = Representation.zero(a.dim, dim_v)
    for _ in range(attempts):
        total = rng.randint(1, 3)
        on_left = rng.randint(0, total)
        candidate = Representation(
            a.dim,
            dim_v,
            random_bilinear(rng, a.dim, dim_v, dim_v, nonzero=on_left),
            random_bilinear(rng, dim_v, a.dim, dim_v, nonzero=total - on_left),
            LinearOperator.zero(dim_v),
        )
        if not check_representation(a.alg, candidate):
            r = candidate
            break
    # Any actions with T_V = 0 form a Rota-Baxter representation.
    for _ in range(attempts):
        candidate = replace(
            r, t_v=random_operator(rng, dim_v, dim_v, nonzero=rng.randint(1, dim_v))
        )
        if not check_rb_representation(a, candidate):
            return candidate
    return r


def random_representation(rng: Random, a: RBLeibnizAlgebra, max_dim_v: int = 2) -> Representation:
    match rng.choice(["actions", "actions", "self", "dual"]):
        case "self":
            return self_representation(a)
        case "dual":
            return dual_representation(a, self_representation(a))
        case _:
            return _random_actions(rng, a, rng.randint(1, max_dim_v))


def transport_extension(
    e: AbelianExtension, p: RatMatrix, p_inv: RatMatrix
) -> tuple[AbelianExtension, LinearOperator]:
    """The same extension in the basis P of ĝ, with the isomorphism ξ = P⁻¹ onto it."""
    moved = AbelianExtension(
        conjugate(e.total, p, p_inv),
        e.fiber_t,
        LinearOperator.of(p_inv @ e.inclusion.m),
        LinearOperator.of(e.projection.m @ p),
        e.base,
    )
    return moved, LinearOperator.of(p_inv)
