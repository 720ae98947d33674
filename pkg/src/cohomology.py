from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache, partial
from itertools import product
import logging
from typing import final

from .algebra import (
    BilinearMap,
    LeibnizAlgebra,
    LinearOperator,
    RBLeibnizAlgebra,
    induced_bracket_star,
)
from .config import DEFAULT_SETTINGS, Settings
from .linalg import (
    ZERO,
    RatMatrix,
    RatVector,
    ShapeError,
    add_vectors,
    hstack,
    in_column_space,
    kron,
    rank,
    scale_vector,
    sub_vectors,
    unit_vector,
    vstack,
    zero_vector,
)
from .representations import (
    Representation,
    induced_representation,
    validate_rb_representation,
)

l = logging.getLogger(__name__)


class NotACocycleError(ValueError):
    pass


class ComplexKind(StrEnum):
    LA = "la"
    RBO = "rbo"
    RBLA = "rbla"


@final
@dataclass(frozen=True)
class CochainSpace:
    """Hom(g^⊗n, V) with basis ordered lexicographically by (i₁, …, i_n), V-index fastest."""

    arity: int
    dim_g: int
    dim_v: int

    @property
    def dimension(self) -> int:
        return self.dim_v * self.dim_g**self.arity

    def multi_indices(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.dim_g), repeat=self.arity)

    def index(self, multi: Sequence[int], b: int) -> int:
        if len(multi) != self.arity:
            raise ShapeError(f"Expected {self.arity} arguments, got {len(multi)}")
        flat = 0
        for i in multi:
            if not 0 <= i < self.dim_g:
                raise ShapeError(f"Argument index {i} is out of range")
            flat = flat * self.dim_g + i
        if not 0 <= b < self.dim_v:
            raise ShapeError(f"Value index {b} is out of range")
        return flat * self.dim_v + b

    def multi_index(self, index: int) -> tuple[tuple[int, ...], int]:
        if not 0 <= index < self.dimension:
            raise ShapeError(f"Cochain coordinate {index} is out of range")
        flat, b = divmod(index, self.dim_v)
        multi: list[int] = []
        for _ in range(self.arity):
            flat, i = divmod(flat, self.dim_g)
            multi.append(i)
        return tuple(reversed(multi)), b


@final
@dataclass(frozen=True)
class Cochain:
    space: CochainSpace
    coords: RatVector

    def __post_init__(self):
        if len(self.coords) != self.space.dimension:
            raise ShapeError(
                f"Cochain has {len(self.coords)} coordinates, expected {self.space.dimension}"
            )

    @staticmethod
    def zero(space: CochainSpace) -> "Cochain":
        return Cochain(space, zero_vector(space.dimension))

    @staticmethod
    def basis(space: CochainSpace, index: int) -> "Cochain":
        return Cochain(space, unit_vector(space.dimension, index))

    @staticmethod
    def from_function(
        space: CochainSpace, fn: Callable[[tuple[int, ...]], Sequence[Fraction]]
    ) -> "Cochain":
        coords: list[Fraction] = []
        for multi in space.multi_indices():
            value = fn(multi)
            if len(value) != space.dim_v:
                raise ShapeError(f"Cochain value has length {len(value)}, expected {space.dim_v}")
            coords.extend(value)
        return Cochain(space, tuple(coords))

    @staticmethod
    def from_operator(op: LinearOperator) -> "Cochain":
        return Cochain.from_function(
            CochainSpace(1, op.dim_in, op.dim_out), lambda multi: op.on_basis(multi[0])
        )

    @staticmethod
    def from_bilinear(b: BilinearMap) -> "Cochain":
        if b.left_dim != b.right_dim:
            raise ShapeError("Only maps g × g → V are 2-cochains")
        return Cochain(CochainSpace(2, b.left_dim, b.out_dim), b.flat())

    def value(self, multi: Sequence[int]) -> RatVector:
        start = self.space.index(multi, 0) if self.space.dim_v else 0
        return self.coords[start : start + self.space.dim_v]

    def evaluate(self, args: Sequence[Sequence[Fraction]]) -> RatVector:
        if len(args) != self.space.arity:
            raise ShapeError(f"Expected {self.space.arity} arguments, got {len(args)}")
        if any(len(x) != self.space.dim_g for x in args):
            raise ShapeError("Cochain argument has the wrong length")
        supports = [[(i, x) for i, x in enumerate(arg) if x != 0] for arg in args]
        out = zero_vector(self.space.dim_v)
        for combo in product(*supports):
            coeff = Fraction(1)
            for _, x in combo:
                coeff *= x
            value = self.value(tuple(i for i, _ in combo))
            out = add_vectors(out, scale_vector(coeff, value))
        return out

    def to_operator(self) -> LinearOperator:
        if self.space.arity != 1:
            raise ShapeError("Only 1-cochains are linear maps")
        return LinearOperator.of(
            RatMatrix.from_columns(
                [self.value((j,)) for j in range(self.space.dim_g)], self.space.dim_v
            )
        )

    def to_bilinear(self) -> BilinearMap:
        if self.space.arity != 2:
            raise ShapeError("Only 2-cochains are bilinear maps")
        n = self.space.dim_g
        return BilinearMap.from_function(n, n, self.space.dim_v, lambda i, j: self.value((i, j)))

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same_space(other)
        return Cochain(self.space, add_vectors(self.coords, other.coords))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same_space(other)
        return Cochain(self.space, sub_vectors(self.coords, other.coords))

    def __neg__(self) -> "Cochain":
        return Cochain(self.space, scale_vector(-1, self.coords))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def _same_space(self, other: "Cochain"):
        if self.space != other.space:
            raise ShapeError("Cochains live in different spaces")


def rbla_coords(alpha: Cochain, beta: Cochain | None = None) -> RatVector:
    """Coordinates of (α, β) ∈ C^n_LA ⊕ C^{n-1}_RBO; β is absent in degree 0."""
    if beta is None:
        assert alpha.space.arity == 0
        return alpha.coords
    if beta.space.arity + 1 != alpha.space.arity:
        raise ShapeError("The operator part must have one argument fewer")
    return alpha.coords + beta.coords


def split_rbla(
    coords: Sequence[Fraction], n: int, dim_g: int, dim_v: int
) -> tuple[Cochain, Cochain | None]:
    la = CochainSpace(n, dim_g, dim_v)
    if n == 0:
        return Cochain(la, tuple(coords)), None
    rbo = CochainSpace(n - 1, dim_g, dim_v)
    if len(coords) != la.dimension + rbo.dimension:
        raise ShapeError("Coordinate vector does not match C^n_RBLA")
    return (
        Cochain(la, tuple(coords[: la.dimension])),
        Cochain(rbo, tuple(coords[la.dimension :])),
    )


def cochain_dimension(kind: ComplexKind, dim_g: int, dim_v: int, n: int) -> int:
    if n < 0:
        return 0
    match kind:
        case ComplexKind.LA | ComplexKind.RBO:
            return dim_v * dim_g**n
        case ComplexKind.RBLA:
            if n == 0:
                return dim_v
            return dim_v * (dim_g**n + dim_g ** (n - 1))


def _map_ordered[T, R](fn: Callable[[T], R], items: list[T], jobs: int) -> list[R]:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


type _SparseRow = dict[int, Fraction]


def _delta_rows(
    bracket: BilinearMap, left: BilinearMap, right: BilinearMap, n: int, out: tuple[int, ...]
) -> list[_SparseRow]:
    # The dim_v rows of δⁿ belonging to the output arguments (e_{out_1}, …, e_{out_{n+1}}).
    dim_g, dim_v = bracket.out_dim, left.out_dim
    source = CochainSpace(n, dim_g, dim_v)
    rows: list[_SparseRow] = [{} for _ in range(dim_v)]

    def add(multi: tuple[int, ...], c: int, b: int, value: Fraction):
        if value == 0:
            return
        col = source.index(multi, c)
        rows[b][col] = rows[b].get(col, ZERO) + value

    for p in range(n):
        sign = 1 if p % 2 == 0 else -1
        rest = out[:p] + out[p + 1 :]
        for c in range(dim_v):
            for b, x in enumerate(left.c[out[p]][c]):
                add(rest, c, b, sign * x)

    sign = -1 if n % 2 == 0 else 1
    for c in range(dim_v):
        for b, x in enumerate(right.c[c][out[n]]):
            add(out[:n], c, b, sign * x)

    for p in range(n + 1):
        sign = -1 if p % 2 == 0 else 1
        for q in range(p + 1, n + 1):
            for k, x in enumerate(bracket.c[out[p]][out[q]]):
                if x == 0:
                    continue
                multi = out[:p] + out[p + 1 : q] + (k,) + out[q + 1 :]
                for b in range(dim_v):
                    add(multi, b, b, sign * x)
    return rows


def _rows_to_matrix(blocks: Iterable[list[_SparseRow]], rows: int, cols: int) -> RatMatrix:
    entries: list[Fraction] = []
    for block in blocks:
        for row in block:
            dense = [ZERO] * cols
            for j, x in row.items():
                dense[j] = x
            entries.extend(dense)
    return RatMatrix(rows, cols, tuple(entries))


@lru_cache(maxsize=256)
def _loday_pirashvili(
    bracket: BilinearMap, left: BilinearMap, right: BilinearMap, n: int, jobs: int
) -> RatMatrix:
    dim_g, dim_v = bracket.out_dim, left.out_dim
    source = CochainSpace(n, dim_g, dim_v)
    target = CochainSpace(n + 1, dim_g, dim_v)
    blocks = _map_ordered(
        partial(_delta_rows, bracket, left, right, n), list(target.multi_indices()), jobs
    )
    m = _rows_to_matrix(blocks, target.dimension, source.dimension)
    l.debug(f"Assembled Loday-Pirashvili differential of degree {n}: {m.rows}x{m.cols}")
    return m


def _warn_if_large(dim_g: int, dim_v: int, n: int, settings: Settings):
    columns = dim_v * dim_g**n
    if columns > settings.column_warning_limit:
        l.warning(
            f"Cochain space of degree {n} has {columns} columns, above the limit of "
            + f"{settings.column_warning_limit}"
        )


def delta_matrix(
    a: LeibnizAlgebra, r: Representation, n: int, settings: Settings = DEFAULT_SETTINGS
) -> RatMatrix:
    if n < 0:
        raise ValueError("Degree must be non-negative")
    if r.dim_g != a.dim:
        raise ShapeError(f"Representation is over dimension {r.dim_g}, algebra has {a.dim}")
    _warn_if_large(a.dim, r.dim_v, n, settings)
    return _loday_pirashvili(a.bracket, r.left, r.right, n, settings.jobs)


def partial_matrix(
    a: RBLeibnizAlgebra, r: Representation, n: int, settings: Settings = DEFAULT_SETTINGS
) -> RatMatrix:
    """∂ⁿ as δⁿ of the star algebra with coefficients in the induced representation."""
    return delta_matrix(induced_bracket_star(a).alg, induced_representation(a, r), n, settings)


def partial_matrix_expanded(a: RBLeibnizAlgebra, r: Representation, n: int) -> RatMatrix:
    """∂ⁿ evaluated column by column from its expansion in T, T_V and the original actions."""
    if n < 0:
        raise ValueError("Degree must be non-negative")
    validate_rb_representation(a, r)
    source = CochainSpace(n, a.dim, r.dim_v)
    target = CochainSpace(n + 1, a.dim, r.dim_v)
    t, t_v = a.t, r.t_v
    basis = [unit_vector(a.dim, i) for i in range(a.dim)]

    def column(f: Cochain) -> RatVector:
        def value(out: tuple[int, ...]) -> RatVector:
            xs = [basis[i] for i in out]
            acc = zero_vector(r.dim_v)
            for p in range(n):
                rest = f.evaluate(xs[:p] + xs[p + 1 :])
                term = sub_vectors(r.l(t(xs[p]), rest), t_v(r.l(xs[p], rest)))
                acc = add_vectors(acc, scale_vector((-1) ** p, term))
            head = f.evaluate(xs[:n])
            term = sub_vectors(r.r(head, t(xs[n])), t_v(r.r(head, xs[n])))
            acc = add_vectors(acc, scale_vector((-1) ** (n + 1), term))
            for p in range(n + 1):
                for q in range(p + 1, n + 1):
                    star = add_vectors(a.bracket(t(xs[p]), xs[q]), a.bracket(xs[p], t(xs[q])))
                    args = xs[:p] + xs[p + 1 : q] + [star] + xs[q + 1 :]
                    acc = add_vectors(acc, scale_vector((-1) ** (p + 1), f.evaluate(args)))
            return acc

        return Cochain.from_function(target, value).coords

    columns = [column(Cochain.basis(source, j)) for j in range(source.dimension)]
    return RatMatrix.from_columns(columns, target.dimension)


def phi_matrix(a: RBLeibnizAlgebra, r: Representation, n: int) -> RatMatrix:
    """φⁿ(f)(x₁…x_n) = f(Tx₁,…,Tx_n) − Σ_i T_V f(Tx₁,…,x_i,…,Tx_n); φ⁰ is the identity."""
    if n < 0:
        raise ValueError("Degree must be non-negative")
    if r.dim_g != a.dim:
        raise ShapeError(f"Representation is over dimension {r.dim_g}, algebra has {a.dim}")
    # f(Te_j) = Σ_i T[i][j] f(e_i), so every argument slot carries Tᵀ.
    t_transposed = a.t.m.transpose()
    identity_g = RatMatrix.identity(a.dim)
    m = kron([t_transposed] * n + [RatMatrix.identity(r.dim_v)])
    for p in range(n):
        factors = [t_transposed] * n
        factors[p] = identity_g
        m = m - kron(factors + [r.t_v.m])
    return m


def d_matrix(
    a: RBLeibnizAlgebra, r: Representation, n: int, settings: Settings = DEFAULT_SETTINGS
) -> RatMatrix:
    """dⁿ(α, β) = (δⁿα, −∂ⁿ⁻¹β − φⁿα) on C^n_LA ⊕ C^{n-1}_RBO."""
    if n < 0:
        raise ValueError("Degree must be non-negative")
    delta = delta_matrix(a.alg, r, n, settings)
    if n == 0:
        return vstack([delta, -RatMatrix.identity(r.dim_v)])
    partial_prev = partial_matrix(a, r, n - 1, settings)
    upper = hstack([delta, RatMatrix.zeros(delta.rows, partial_prev.cols)])
    lower = hstack([-phi_matrix(a, r, n), -partial_prev])
    m = vstack([upper, lower])
    l.debug(f"Assembled RBLA differential of degree {n}: {m.rows}x{m.cols}")
    return m


def differential(
    a: RBLeibnizAlgebra,
    r: Representation,
    kind: ComplexKind,
    n: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> RatMatrix:
    match kind:
        case ComplexKind.LA:
            return delta_matrix(a.alg, r, n, settings)
        case ComplexKind.RBO:
            return partial_matrix(a, r, n, settings)
        case ComplexKind.RBLA:
            return d_matrix(a, r, n, settings)


def cohomology_dimensions(
    a: RBLeibnizAlgebra,
    r: Representation,
    kind: ComplexKind,
    max_degree: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> list[int]:
    """dim Hⁿ for n = 0..max_degree, each differential ranked once."""
    ranks = [rank(differential(a, r, kind, n, settings)) for n in range(max_degree + 1)]
    dims: list[int] = []
    for n in range(max_degree + 1):
        kernel = cochain_dimension(kind, a.dim, r.dim_v, n) - ranks[n]
        dims.append(kernel - (ranks[n - 1] if n > 0 else 0))
    l.debug(f"Cohomology of the {kind.value} complex up to degree {max_degree}: {dims}")
    return dims


def cohomology_dimension(
    a: RBLeibnizAlgebra,
    r: Representation,
    n: int,
    kind: ComplexKind,
    settings: Settings = DEFAULT_SETTINGS,
) -> int:
    if n < 0:
        raise ValueError("Degree must be non-negative")
    current = differential(a, r, kind, n, settings)
    kernel = current.cols - rank(current)
    image = rank(differential(a, r, kind, n - 1, settings)) if n > 0 else 0
    return kernel - image


def verify_complex(
    a: RBLeibnizAlgebra,
    r: Representation,
    kind: ComplexKind,
    n_max: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> bool:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for n in range(n_max):
        product_matrix = differential(a, r, kind, n + 1, settings) @ differential(
            a, r, kind, n, settings
        )
        if not product_matrix.is_zero():
            l.debug(f"{kind.value} differentials of degrees {n + 1} and {n} do not compose to 0")
            return False
    return True


def verify_phi_chain_map(
    a: RBLeibnizAlgebra, r: Representation, n_max: int, settings: Settings = DEFAULT_SETTINGS
) -> bool:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for n in range(1, n_max):
        lhs = phi_matrix(a, r, n + 1) @ delta_matrix(a.alg, r, n, settings)
        rhs = partial_matrix(a, r, n, settings) @ phi_matrix(a, r, n)
        if lhs != rhs:
            return False
    return True


def is_cocycle(
    a: RBLeibnizAlgebra,
    r: Representation,
    n: int,
    kind: ComplexKind,
    z: Sequence[Fraction],
    settings: Settings = DEFAULT_SETTINGS,
) -> bool:
    m = differential(a, r, kind, n, settings)
    if len(z) != m.cols:
        raise ShapeError(f"Cochain has {len(z)} coordinates, expected {m.cols}")
    return all(x == 0 for x in m.apply(z))


def same_class(
    a: RBLeibnizAlgebra,
    r: Representation,
    n: int,
    kind: ComplexKind,
    z1: Sequence[Fraction],
    z2: Sequence[Fraction],
    settings: Settings = DEFAULT_SETTINGS,
) -> bool:
    for z in (z1, z2):
        if not is_cocycle(a, r, n, kind, z, settings):
            raise NotACocycleError(f"Cochain is not a {kind.value} cocycle of degree {n}")
    difference = sub_vectors(z1, z2)
    if n == 0:
        return all(x == 0 for x in difference)
    return in_column_space(differential(a, r, kind, n - 1, settings), difference)


def verify_short_exact_dimensions(
    a: RBLeibnizAlgebra, r: Representation, n_max: int, settings: Settings = DEFAULT_SETTINGS
) -> bool:
    """0 → C^{n-1}_RBO → C^n_RBLA → C^n_LA → 0 is exact and compatible with the differentials."""
    for n in range(1, n_max + 1):
        la = cochain_dimension(ComplexKind.LA, a.dim, r.dim_v, n)
        rbo = cochain_dimension(ComplexKind.RBO, a.dim, r.dim_v, n - 1)
        if cochain_dimension(ComplexKind.RBLA, a.dim, r.dim_v, n) != la + rbo:
            return False
        d = d_matrix(a, r, n, settings)
        la_next = cochain_dimension(ComplexKind.LA, a.dim, r.dim_v, n + 1)
        # The projection onto the LA part intertwines dⁿ with δⁿ, and the inclusion of the
        # RBO part intertwines −∂ⁿ⁻¹ with dⁿ.
        if d.block(0, la_next, 0, la) != delta_matrix(a.alg, r, n, settings):
            return False
        if not d.block(0, la_next, la, la + rbo).is_zero():
            return False
        if d.block(la_next, d.rows, la, la + rbo) != -partial_matrix(a, r, n - 1, settings):
            return False
    return True
