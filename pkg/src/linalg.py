from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import final

type RatVector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class ShapeError(ValueError):
    pass


class InternalError(RuntimeError):
    pass


def vector(values: Iterable[int | Fraction]) -> RatVector:
    return tuple(Fraction(v) for v in values)


def zero_vector(n: int) -> RatVector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> RatVector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def add_vectors(a: Sequence[Fraction], b: Sequence[Fraction]) -> RatVector:
    if len(a) != len(b):
        raise ShapeError(f"Cannot add vectors of length {len(a)} and {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub_vectors(a: Sequence[Fraction], b: Sequence[Fraction]) -> RatVector:
    if len(a) != len(b):
        raise ShapeError(f"Cannot subtract vectors of length {len(a)} and {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def scale_vector(s: Fraction | int, v: Sequence[Fraction]) -> RatVector:
    return tuple(s * x for x in v)


@final
@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("Matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"Expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} "
                + f"matrix, got {len(self.entries)}"
            )

    @staticmethod
    def zeros(rows: int, cols: int) -> "RatMatrix":
        return RatMatrix(rows, cols, (ZERO,) * (rows * cols))

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int | Fraction]], cols: int | None = None) -> "RatMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ShapeError("All rows must have the same length")
        return RatMatrix(len(rows), cols, tuple(Fraction(x) for row in rows for x in row))

    @staticmethod
    def from_columns(columns: Sequence[Sequence[Fraction]], rows: int) -> "RatMatrix":
        for column in columns:
            if len(column) != rows:
                raise ShapeError("All columns must have the same length")
        cols = len(columns)
        return RatMatrix(
            rows, cols, tuple(columns[j][i] for i in range(rows) for j in range(cols))
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> RatVector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> RatVector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def block(self, row_start: int, row_end: int, col_start: int, col_end: int) -> "RatMatrix":
        return RatMatrix(
            row_end - row_start,
            col_end - col_start,
            tuple(
                self.entries[i * self.cols + j]
                for i in range(row_start, row_end)
                for j in range(col_start, col_end)
            ),
        )

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols,
            self.rows,
            tuple(
                self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)
            ),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(
            self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(
            self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries))
        )

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"Cannot multiply {self.shape} by {other.shape}")
        # Cochain matrices are mostly zeros, so only nonzero entries of each row are visited.
        out: list[Fraction] = []
        for i in range(self.rows):
            nonzero = [(k, x) for k, x in enumerate(self.row(i)) if x != 0]
            for j in range(other.cols):
                s = ZERO
                for k, x in nonzero:
                    y = other.entries[k * other.cols + j]
                    if y != 0:
                        s += x * y
                out.append(s)
        return RatMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[Fraction]) -> RatVector:
        if len(v) != self.cols:
            raise ShapeError(f"Cannot apply a {self.shape} matrix to a vector of length {len(v)}")
        out: list[Fraction] = []
        for i in range(self.rows):
            s = ZERO
            for x, y in zip(self.row(i), v):
                if x != 0 and y != 0:
                    s += x * y
            out.append(s)
        return tuple(out)

    def power(self, k: int) -> "RatMatrix":
        if self.rows != self.cols:
            raise ShapeError("Only square matrices have powers")
        result = RatMatrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def _same_shape(self, other: "RatMatrix"):
        if self.shape != other.shape:
            raise ShapeError(f"Shape mismatch: {self.shape} vs {other.shape}")


def hstack(blocks: Sequence[RatMatrix]) -> RatMatrix:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ShapeError("Horizontally stacked blocks must have equal row counts")
    entries: list[Fraction] = []
    for i in range(rows):
        for b in blocks:
            entries.extend(b.row(i))
    return RatMatrix(rows, sum(b.cols for b in blocks), tuple(entries))


def vstack(blocks: Sequence[RatMatrix]) -> RatMatrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ShapeError("Vertically stacked blocks must have equal column counts")
    entries: list[Fraction] = []
    for b in blocks:
        entries.extend(b.entries)
    return RatMatrix(sum(b.rows for b in blocks), cols, tuple(entries))


def kron(factors: Sequence[RatMatrix]) -> RatMatrix:
    """Kronecker product with the first factor varying slowest; the empty product is [[1]]."""
    result = RatMatrix.identity(1)
    for f in factors:
        entries: list[Fraction] = []
        for i1 in range(result.rows):
            for i2 in range(f.rows):
                for j1 in range(result.cols):
                    a = result.entries[i1 * result.cols + j1]
                    for j2 in range(f.cols):
                        entries.append(a * f.entries[i2 * f.cols + j2] if a != 0 else ZERO)
        result = RatMatrix(result.rows * f.rows, result.cols * f.cols, tuple(entries))
    return result


@dataclass
class _Echelon:
    rows: list[list[int]]
    pivots: list[int]


def _integer_rows(m: RatMatrix, extra: Sequence[Fraction] | None = None) -> list[list[int]]:
    out: list[list[int]] = []
    for i in range(m.rows):
        row = list(m.row(i))
        if extra is not None:
            row.append(extra[i])
        scale = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def _bareiss(rows: list[list[int]], ncols: int) -> _Echelon:
    # Fraction-free elimination; the pivot is the first nonzero entry at or below the
    # current row, and every division by the previous pivot is exact.
    pivots: list[int] = []
    r = 0
    prev = 1
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        p = rows[r][c]
        top = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - f * top[j]) // prev
            row[c] = 0
        # Rows above the pivot row never change, so they stay at the older scale.
        pivots.append(c)
        prev = p
        r += 1
    return _Echelon(rows, pivots)


def rank(m: RatMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_bareiss(_integer_rows(m), m.cols).pivots)


def _back_substitute(
    echelon: _Echelon, ncols: int, free_values: dict[int, Fraction], rhs_col: int | None
) -> list[Fraction]:
    x = [ZERO] * ncols
    for c, v in free_values.items():
        x[c] = v
    for r in reversed(range(len(echelon.pivots))):
        c = echelon.pivots[r]
        row = echelon.rows[r]
        s = Fraction(row[rhs_col]) if rhs_col is not None else ZERO
        for j in range(c + 1, ncols):
            if row[j] != 0 and x[j] != 0:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x


def kernel_basis(m: RatMatrix) -> list[RatVector]:
    if m.rows == 0:
        return [unit_vector(m.cols, j) for j in range(m.cols)]
    echelon = _bareiss(_integer_rows(m), m.cols)
    pivot_set = set(echelon.pivots)
    basis: list[RatVector] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        basis.append(tuple(_back_substitute(echelon, m.cols, {free: ONE}, None)))
    return basis


def solve(m: RatMatrix, b: Sequence[Fraction]) -> RatVector | None:
    """Some x with m·x = b, or None when the system is inconsistent."""
    if len(b) != m.rows:
        raise ShapeError(f"Right-hand side has length {len(b)}, expected {m.rows}")
    if m.rows == 0:
        return zero_vector(m.cols)
    echelon = _bareiss(_integer_rows(m, b), m.cols + 1)
    if echelon.pivots and echelon.pivots[-1] == m.cols:
        return None
    return tuple(_back_substitute(echelon, m.cols, {}, m.cols))


def in_column_space(m: RatMatrix, b: Sequence[Fraction]) -> bool:
    return solve(m, b) is not None


def left_inverse(m: RatMatrix) -> RatMatrix:
    """L with L·m = I for a matrix of full column rank."""
    mt = m.transpose()
    rows: list[RatVector] = []
    for a in range(m.cols):
        x = solve(mt, unit_vector(m.cols, a))
        if x is None:
            raise ShapeError("Matrix does not have full column rank")
        rows.append(x)
    return RatMatrix.from_rows(rows, cols=m.rows)


def right_inverse(m: RatMatrix) -> RatMatrix:
    """R with m·R = I for a matrix of full row rank."""
    columns: list[RatVector] = []
    for a in range(m.rows):
        x = solve(m, unit_vector(m.rows, a))
        if x is None:
            raise ShapeError("Matrix does not have full row rank")
        columns.append(x)
    return RatMatrix.from_columns(columns, m.cols)


def is_invertible(m: RatMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
