from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import final

from .linalg import (
    ZERO,
    RatMatrix,
    RatVector,
    ShapeError,
    add_vectors,
    format_rational,
    is_invertible,
    is_zero_vector,
    scale_vector,
    sub_vectors,
    unit_vector,
    zero_vector,
)

type Tensor3 = tuple[tuple[RatVector, ...], ...]


class NotLeibnizError(ValueError):
    pass


class NotRotaBaxterError(ValueError):
    pass


class NotNilpotentError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    rule: str
    indices: tuple[int, ...]
    defect: RatVector
    order: int | None = None

    def describe(self) -> str:
        where = ",".join(str(i) for i in self.indices)
        defect = " ".join(format_rational(x) for x in self.defect)
        prefix = f"order {self.order}: " if self.order is not None else ""
        return f"{prefix}{self.rule} at ({where}): defect [{defect}]"


@final
@dataclass(frozen=True)
class BilinearMap:
    """β(e_i, f_j) = Σ_k c[i][j][k] g_k for a map A × B → C given on bases."""

    left_dim: int
    right_dim: int
    out_dim: int
    c: Tensor3

    def __post_init__(self):
        if len(self.c) != self.left_dim or any(len(r) != self.right_dim for r in self.c):
            raise ShapeError("Structure constant tensor does not match the declared dimensions")
        if any(len(v) != self.out_dim for r in self.c for v in r):
            raise ShapeError("Structure constant tensor does not match the declared dimensions")

    @staticmethod
    def zero(left_dim: int, right_dim: int, out_dim: int) -> "BilinearMap":
        return BilinearMap(
            left_dim,
            right_dim,
            out_dim,
            tuple(tuple(zero_vector(out_dim) for _ in range(right_dim)) for _ in range(left_dim)),
        )

    @staticmethod
    def square(dim: int, entries: dict[tuple[int, int, int], Fraction | int]) -> "BilinearMap":
        return BilinearMap.from_entries(dim, dim, dim, entries)

    @staticmethod
    def from_entries(
        left_dim: int,
        right_dim: int,
        out_dim: int,
        entries: dict[tuple[int, int, int], Fraction | int],
    ) -> "BilinearMap":
        c = [[[ZERO] * out_dim for _ in range(right_dim)] for _ in range(left_dim)]
        for (i, j, k), value in entries.items():
            if not (0 <= i < left_dim and 0 <= j < right_dim and 0 <= k < out_dim):
                raise ShapeError(f"Structure constant index ({i},{j},{k}) is out of range")
            c[i][j][k] = Fraction(value)
        return BilinearMap(
            left_dim, right_dim, out_dim, tuple(tuple(tuple(v) for v in r) for r in c)
        )

    @staticmethod
    def from_function(
        left_dim: int,
        right_dim: int,
        out_dim: int,
        fn: Callable[[int, int], Sequence[Fraction]],
    ) -> "BilinearMap":
        return BilinearMap(
            left_dim,
            right_dim,
            out_dim,
            tuple(
                tuple(tuple(fn(i, j)) for j in range(right_dim)) for i in range(left_dim)
            ),
        )

    @property
    def is_square(self) -> bool:
        return self.left_dim == self.right_dim == self.out_dim

    @property
    def dim_in(self) -> int:
        return self.left_dim

    @property
    def dim_out(self) -> int:
        return self.out_dim

    def on_basis(self, i: int, j: int) -> RatVector:
        return self.c[i][j]

    def __call__(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> RatVector:
        if len(x) != self.left_dim or len(y) != self.right_dim:
            raise ShapeError("Bilinear map applied to vectors of the wrong length")
        out = [ZERO] * self.out_dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                s = xi * yj
                for k, v in enumerate(self.c[i][j]):
                    if v != 0:
                        out[k] += s * v
        return tuple(out)

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        self._same_shape(other)
        return BilinearMap.from_function(
            self.left_dim,
            self.right_dim,
            self.out_dim,
            lambda i, j: add_vectors(self.c[i][j], other.c[i][j]),
        )

    def __sub__(self, other: "BilinearMap") -> "BilinearMap":
        self._same_shape(other)
        return BilinearMap.from_function(
            self.left_dim,
            self.right_dim,
            self.out_dim,
            lambda i, j: sub_vectors(self.c[i][j], other.c[i][j]),
        )

    def is_zero(self) -> bool:
        return all(is_zero_vector(v) for r in self.c for v in r)

    def flat(self) -> RatVector:
        """Coordinates in the cochain basis order: (i, j) lexicographic, output index fastest."""
        return tuple(x for r in self.c for v in r for x in v)

    def _same_shape(self, other: "BilinearMap"):
        if (self.left_dim, self.right_dim, self.out_dim) != (
            other.left_dim,
            other.right_dim,
            other.out_dim,
        ):
            raise ShapeError("Bilinear maps have different shapes")


@final
@dataclass(frozen=True)
class LinearOperator:
    dim_in: int
    dim_out: int
    m: RatMatrix

    def __post_init__(self):
        if self.m.shape != (self.dim_out, self.dim_in):
            raise ShapeError(
                f"Operator matrix has shape {self.m.shape}, expected {(self.dim_out, self.dim_in)}"
            )

    @staticmethod
    def of(m: RatMatrix) -> "LinearOperator":
        return LinearOperator(m.cols, m.rows, m)

    @staticmethod
    def from_rows(
        rows: Sequence[Sequence[int | Fraction]], dim_in: int | None = None
    ) -> "LinearOperator":
        m = RatMatrix.from_rows(rows, cols=dim_in)
        return LinearOperator(m.cols, m.rows, m)

    @staticmethod
    def zero(dim_in: int, dim_out: int | None = None) -> "LinearOperator":
        dim_out = dim_in if dim_out is None else dim_out
        return LinearOperator(dim_in, dim_out, RatMatrix.zeros(dim_out, dim_in))

    @staticmethod
    def identity(dim: int) -> "LinearOperator":
        return LinearOperator(dim, dim, RatMatrix.identity(dim))

    @property
    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    def __call__(self, x: Sequence[Fraction]) -> RatVector:
        return self.m.apply(x)

    def on_basis(self, j: int) -> RatVector:
        return self.m.column(j)

    def compose(self, other: "LinearOperator") -> "LinearOperator":
        """self ∘ other."""
        return LinearOperator.of(self.m @ other.m)

    def power(self, k: int) -> "LinearOperator":
        if not self.is_square:
            raise ShapeError("Only square operators have powers")
        return LinearOperator.of(self.m.power(k))

    def transpose(self) -> "LinearOperator":
        return LinearOperator.of(self.m.transpose())

    def __neg__(self) -> "LinearOperator":
        return LinearOperator.of(-self.m)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator.of(self.m + other.m)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator.of(self.m - other.m)

    def is_zero(self) -> bool:
        return self.m.is_zero()

    def is_invertible(self) -> bool:
        return is_invertible(self.m)


@final
@dataclass(frozen=True)
class LeibnizAlgebra:
    dim: int
    bracket: BilinearMap

    @staticmethod
    def raw(bracket: BilinearMap) -> "LeibnizAlgebra":
        if not bracket.is_square:
            raise ShapeError("A bracket must map g × g → g")
        return LeibnizAlgebra(bracket.out_dim, bracket)

    @staticmethod
    def validated(bracket: BilinearMap) -> "LeibnizAlgebra":
        violations = check_leibniz(bracket)
        if violations:
            raise NotLeibnizError(
                f"Bracket violates the Leibniz identity: {violations[0].describe()}"
            )
        return LeibnizAlgebra.raw(bracket)

    @staticmethod
    def abelian(dim: int) -> "LeibnizAlgebra":
        return LeibnizAlgebra(dim, BilinearMap.zero(dim, dim, dim))

    def __call__(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> RatVector:
        return self.bracket(x, y)

    def is_lie(self) -> bool:
        for i in range(self.dim):
            if not is_zero_vector(self.bracket.on_basis(i, i)):
                return False
            for j in range(i + 1, self.dim):
                if not is_zero_vector(
                    add_vectors(self.bracket.on_basis(i, j), self.bracket.on_basis(j, i))
                ):
                    return False
        return True


@final
@dataclass(frozen=True)
class RBLeibnizAlgebra:
    alg: LeibnizAlgebra
    t: LinearOperator

    @staticmethod
    def raw(alg: LeibnizAlgebra, t: LinearOperator) -> "RBLeibnizAlgebra":
        if t.dim_in != alg.dim or t.dim_out != alg.dim:
            raise ShapeError(f"Operator must be {alg.dim}x{alg.dim}")
        return RBLeibnizAlgebra(alg, t)

    @staticmethod
    def validated(alg: LeibnizAlgebra, t: LinearOperator) -> "RBLeibnizAlgebra":
        violations = check_leibniz(alg.bracket)
        if violations:
            raise NotLeibnizError(
                f"Bracket violates the Leibniz identity: {violations[0].describe()}"
            )
        violations = check_rota_baxter(alg, t)
        if violations:
            raise NotRotaBaxterError(
                f"Operator violates the Rota-Baxter identity: {violations[0].describe()}"
            )
        return RBLeibnizAlgebra.raw(alg, t)

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def bracket(self) -> BilinearMap:
        return self.alg.bracket


def check_leibniz(b: BilinearMap) -> list[Violation]:
    if not b.is_square:
        raise ShapeError("The Leibniz identity needs a map g × g → g")
    n = b.out_dim
    basis = [unit_vector(n, i) for i in range(n)]
    violations: list[Violation] = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = b(basis[i], b.on_basis(j, k))
                rhs = add_vectors(b(b.on_basis(i, j), basis[k]), b(basis[j], b.on_basis(i, k)))
                defect = sub_vectors(lhs, rhs)
                if not is_zero_vector(defect):
                    violations.append(Violation("leibniz", (i, j, k), defect))
    return violations


def rota_baxter_defect(b: BilinearMap, t: LinearOperator, i: int, j: int) -> RatVector:
    """[T e_i, T e_j] − T([T e_i, e_j] + [e_i, T e_j])."""
    n = b.out_dim
    ti, tj = t.on_basis(i), t.on_basis(j)
    ei, ej = unit_vector(n, i), unit_vector(n, j)
    return sub_vectors(b(ti, tj), t(add_vectors(b(ti, ej), b(ei, tj))))


def check_rota_baxter(a: LeibnizAlgebra, t: LinearOperator) -> list[Violation]:
    if t.dim_in != a.dim or t.dim_out != a.dim:
        raise ShapeError(f"Operator must be {a.dim}x{a.dim}")
    violations: list[Violation] = []
    for i in range(a.dim):
        for j in range(a.dim):
            defect = rota_baxter_defect(a.bracket, t, i, j)
            if not is_zero_vector(defect):
                violations.append(Violation("rota-baxter", (i, j), defect))
    return violations


def check_morphism(
    src: RBLeibnizAlgebra, dst: RBLeibnizAlgebra, f: LinearOperator
) -> list[Violation]:
    if f.dim_in != src.dim or f.dim_out != dst.dim:
        raise ShapeError(f"Map must go from dimension {src.dim} to {dst.dim}")
    violations: list[Violation] = []
    for i in range(src.dim):
        for j in range(src.dim):
            defect = sub_vectors(
                f(src.bracket.on_basis(i, j)), dst.bracket(f.on_basis(i), f.on_basis(j))
            )
            if not is_zero_vector(defect):
                violations.append(Violation("homomorphism", (i, j), defect))
    commutator = dst.t.m @ f.m - f.m @ src.t.m
    for j in range(src.dim):
        defect = commutator.column(j)
        if not is_zero_vector(defect):
            violations.append(Violation("operator-intertwining", (j,), defect))
    return violations


def is_isomorphism(src: RBLeibnizAlgebra, dst: RBLeibnizAlgebra, f: LinearOperator) -> bool:
    return f.is_invertible() and not check_morphism(src, dst, f)


def _star(b: BilinearMap, t: LinearOperator) -> BilinearMap:
    n = b.out_dim
    return BilinearMap.from_function(
        n,
        n,
        n,
        lambda i, j: add_vectors(
            b(unit_vector(n, i), t.on_basis(j)), b(t.on_basis(i), unit_vector(n, j))
        ),
    )


def induced_bracket_star(a: RBLeibnizAlgebra) -> RBLeibnizAlgebra:
    """(g, [x,y]_* = [x,Ty] + [Tx,y], T)."""
    return RBLeibnizAlgebra(LeibnizAlgebra(a.dim, _star(a.bracket, a.t)), a.t)


def check_star_morphism(a: RBLeibnizAlgebra) -> list[Violation]:
    return check_morphism(a, induced_bracket_star(a), a.t)


def iterated_bracket(a: RBLeibnizAlgebra, n: int) -> BilinearMap:
    if n < 0:
        raise ValueError("Bracket power must be non-negative")
    b = a.bracket
    for _ in range(n):
        b = _star(b, a.t)
    return b


def iterated_bracket_closed(a: RBLeibnizAlgebra, n: int) -> BilinearMap:
    if n < 0:
        raise ValueError("Bracket power must be non-negative")
    dim = a.dim
    powers = [a.t.power(r) for r in range(n + 1)]

    def value(i: int, j: int) -> RatVector:
        out = zero_vector(dim)
        for r in range(n + 1):
            term = a.bracket(powers[n - r].on_basis(i), powers[r].on_basis(j))
            out = add_vectors(out, scale_vector(comb(n, r), term))
        return out

    return BilinearMap.from_function(dim, dim, dim, value)


def idempotent_bracket(a: RBLeibnizAlgebra, n: int) -> BilinearMap:
    """[·,·]_1 + (2ⁿ − 2)[T·,T·], the closed form of [·,·]_n for idempotent T."""
    if n < 1:
        raise ValueError("The idempotent closed form starts at n = 1")
    dim = a.dim
    first = iterated_bracket(a, 1)
    return BilinearMap.from_function(
        dim,
        dim,
        dim,
        lambda i, j: add_vectors(
            first.on_basis(i, j),
            scale_vector(2**n - 2, a.bracket(a.t.on_basis(i), a.t.on_basis(j))),
        ),
    )


def nilpotency_degree(t: LinearOperator) -> int | None:
    if not t.is_square:
        raise ShapeError("Nilpotency is defined for square operators")
    power = t.m
    for n in range(1, max(t.dim_in, 1) + 1):
        if power.is_zero():
            return n
        power = power @ t.m
    return None


def verify_nilpotent_vanishing(a: RBLeibnizAlgebra, k: int) -> bool:
    n = nilpotency_degree(a.t)
    if n is None:
        raise NotNilpotentError("Rota-Baxter operator is not nilpotent")
    if k < 2 * n + 1:
        raise ValueError(f"Vanishing is only guaranteed from k = {2 * n + 1}, got {k}")
    return iterated_bracket(a, k).is_zero()
