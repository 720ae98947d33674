"""JSON documents describing an algebra with optional representation, deformation and extension.

Indices are 0-based. Rationals are strings "p" or "p/q". Unlisted structure constants are zero.
"""

from collections.abc import Sequence
from fractions import Fraction
import re
import typing

import pydantic

from .algebra import BilinearMap, LeibnizAlgebra, LinearOperator, RBLeibnizAlgebra
from .deformations import TruncatedDeformation
from .extensions import AbelianExtension
from .linalg import RatMatrix, format_rational
from .representations import Representation

_RATIONAL = re.compile(r"(?P<num>[+-]?\d+)(?:/(?P<den>\d+))?")
_POSITION = re.compile(r"line (\d+) column (\d+)")


class DocumentError(ValueError):
    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        location: tuple[str | int, ...] = (),
    ):
        self.message = message
        self.line = line
        self.column = column
        self.location = location
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        elif location:
            where = f" at {'.'.join(str(part) for part in location)}"
        super().__init__(f"{message}{where}")


def _parse_rational(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        raise ValueError(f"Rational must be a string like '3' or '-2/5', got {value!r}")
    match = _RATIONAL.fullmatch(value)
    if match is None:
        raise ValueError(f"Invalid rational {value!r}")
    den = int(match["den"]) if match["den"] is not None else 1
    if den == 0:
        raise ValueError(f"Zero denominator in {value!r}")
    return Fraction(int(match["num"]), den)


type Rational = typing.Annotated[
    Fraction,
    pydantic.PlainValidator(_parse_rational),
    pydantic.PlainSerializer(format_rational, return_type=str),
]
type Entry = tuple[int, int, int, Rational]
type Grid = list[list[Rational]]
type Count = typing.Annotated[int, pydantic.Field(ge=0)]


class _Block(pydantic.BaseModel):
    model_config: typing.ClassVar[pydantic.ConfigDict] = pydantic.ConfigDict(
        strict=True, extra="forbid", frozen=True
    )


def _check_entries(name: str, entries: Sequence[Entry], dims: tuple[int, int, int]):
    seen: set[tuple[int, int, int]] = set()
    for i, j, k, _ in entries:
        if not all(0 <= index < dim for index, dim in zip((i, j, k), dims)):
            raise ValueError(f"{name} entry ({i},{j},{k}) is out of range for dimensions {dims}")
        if (i, j, k) in seen:
            raise ValueError(f"{name} entry ({i},{j},{k}) is given twice")
        seen.add((i, j, k))


def _check_grid(name: str, grid: Grid | None, rows: int, cols: int):
    if grid is None:
        return
    if len(grid) != rows or any(len(row) != cols for row in grid):
        raise ValueError(f"{name} must be a {rows}x{cols} grid")


def _bilinear(entries: Sequence[Entry], dims: tuple[int, int, int]) -> BilinearMap:
    return BilinearMap.from_entries(*dims, {(i, j, k): value for i, j, k, value in entries})


def _operator(grid: Grid | None, rows: int, cols: int) -> LinearOperator:
    if grid is None:
        return LinearOperator.zero(cols, rows)
    return LinearOperator(cols, rows, RatMatrix.from_rows(grid, cols=cols))


def entries_of(b: BilinearMap) -> list[Entry]:
    return [
        (i, j, k, b.c[i][j][k])
        for i in range(b.left_dim)
        for j in range(b.right_dim)
        for k in range(b.out_dim)
        if b.c[i][j][k] != 0
    ]


def grid_of(op: LinearOperator) -> Grid:
    return op.m.to_rows()


class RepresentationBlock(_Block):
    dim: Count
    left: list[Entry] = []
    right: list[Entry] = []
    t_v: Grid | None = None


class DeformationBlock(_Block):
    """Terms of order 1..N."""

    mu: list[list[Entry]]
    t: list[Grid]


class FiberBlock(_Block):
    dim: Count
    t_v: Grid | None = None


class ExtensionBlock(_Block):
    total_dim: Count
    bracket: list[Entry] = []
    operator: Grid | None = None
    inclusion: Grid
    projection: Grid
    fiber: FiberBlock


class AlgebraDocument(_Block):
    dim: Count
    bracket: list[Entry] = []
    rb_operator: Grid | None = None
    representation: RepresentationBlock | None = None
    deformation: DeformationBlock | None = None
    extension: ExtensionBlock | None = None

    @pydantic.model_validator(mode="after")
    def _check_ranges(self) -> typing.Self:
        n = self.dim
        _check_entries("bracket", self.bracket, (n, n, n))
        _check_grid("rb_operator", self.rb_operator, n, n)
        if (r := self.representation) is not None:
            _check_entries("representation.left", r.left, (n, r.dim, r.dim))
            _check_entries("representation.right", r.right, (r.dim, n, r.dim))
            _check_grid("representation.t_v", r.t_v, r.dim, r.dim)
        if (d := self.deformation) is not None:
            if len(d.mu) != len(d.t):
                raise ValueError("deformation.mu and deformation.t must have the same length")
            for order, (entries, grid) in enumerate(zip(d.mu, d.t), start=1):
                _check_entries(f"deformation.mu[{order}]", entries, (n, n, n))
                _check_grid(f"deformation.t[{order}]", grid, n, n)
        if (e := self.extension) is not None:
            total = e.total_dim
            _check_entries("extension.bracket", e.bracket, (total, total, total))
            _check_grid("extension.operator", e.operator, total, total)
            _check_grid("extension.inclusion", e.inclusion, total, e.fiber.dim)
            _check_grid("extension.projection", e.projection, n, total)
            _check_grid("extension.fiber.t_v", e.fiber.t_v, e.fiber.dim, e.fiber.dim)
        return self

    def algebra(self) -> RBLeibnizAlgebra:
        """Unvalidated, so `validate` can report axiom violations instead of failing to load."""
        n = self.dim
        return RBLeibnizAlgebra.raw(
            LeibnizAlgebra.raw(_bilinear(self.bracket, (n, n, n))),
            _operator(self.rb_operator, n, n),
        )

    def representation_for(self) -> Representation | None:
        if (r := self.representation) is None:
            return None
        n = self.dim
        return Representation(
            n,
            r.dim,
            _bilinear(r.left, (n, r.dim, r.dim)),
            _bilinear(r.right, (r.dim, n, r.dim)),
            _operator(r.t_v, r.dim, r.dim),
        )

    def deformation_for(self) -> TruncatedDeformation | None:
        if (d := self.deformation) is None:
            return None
        n = self.dim
        return TruncatedDeformation.new(
            self.algebra(),
            [_bilinear(entries, (n, n, n)) for entries in d.mu],
            [_operator(grid, n, n) for grid in d.t],
        )

    def extension_for(self) -> AbelianExtension | None:
        if (e := self.extension) is None:
            return None
        total = e.total_dim
        return AbelianExtension(
            RBLeibnizAlgebra.raw(
                LeibnizAlgebra.raw(_bilinear(e.bracket, (total, total, total))),
                _operator(e.operator, total, total),
            ),
            _operator(e.fiber.t_v, e.fiber.dim, e.fiber.dim),
            _operator(e.inclusion, total, e.fiber.dim),
            _operator(e.projection, self.dim, total),
            self.algebra(),
        )

    @staticmethod
    def from_domain(
        a: RBLeibnizAlgebra,
        rep: Representation | None = None,
        deformation: TruncatedDeformation | None = None,
        extension: AbelianExtension | None = None,
    ) -> "AlgebraDocument":
        """Canonical form: nonzero entries only, in index order, with every grid written out."""
        return AlgebraDocument(
            dim=a.dim,
            bracket=entries_of(a.bracket),
            rb_operator=grid_of(a.t),
            representation=None
            if rep is None
            else RepresentationBlock(
                dim=rep.dim_v,
                left=entries_of(rep.left),
                right=entries_of(rep.right),
                t_v=grid_of(rep.t_v),
            ),
            deformation=None
            if deformation is None
            else DeformationBlock(
                mu=[entries_of(b) for b in deformation.mu[1:]],
                t=[grid_of(op) for op in deformation.t[1:]],
            ),
            extension=None
            if extension is None
            else ExtensionBlock(
                total_dim=extension.total.dim,
                bracket=entries_of(extension.total.bracket),
                operator=grid_of(extension.total.t),
                inclusion=grid_of(extension.inclusion),
                projection=grid_of(extension.projection),
                fiber=FiberBlock(dim=extension.dim_v, t_v=grid_of(extension.fiber_t)),
            ),
        )

    def dump(self) -> str:
        return self.model_dump_json(indent=4, exclude_none=True)


def parse_document(text: bytes) -> AlgebraDocument:
    try:
        return AlgebraDocument.model_validate_json(text)
    except pydantic.ValidationError as e:
        error = e.errors()[0]
        message = error["msg"]
        if error["type"] == "json_invalid":
            if (position := _POSITION.search(message)) is not None:
                raise DocumentError(
                    message, int(position.group(1)), int(position.group(2))
                ) from None
        raise DocumentError(message, location=tuple(error["loc"])) from None
