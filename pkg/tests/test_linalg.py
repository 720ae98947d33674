from fractions import Fraction
from random import Random

import pytest

from src.linalg import (
    RatMatrix,
    ShapeError,
    format_rational,
    hstack,
    in_column_space,
    is_invertible,
    kernel_basis,
    kron,
    left_inverse,
    rank,
    right_inverse,
    solve,
    vector,
    vstack,
)
from tests.oracle import naive_rank


def _random_matrix(rng: Random, rows: int, cols: int) -> RatMatrix:
    entries = [
        [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(cols)] for _ in range(rows)
    ]
    return RatMatrix.from_rows(entries, cols=cols)


def test_rank_small_cases():
    assert rank(RatMatrix.identity(4)) == 4
    assert rank(RatMatrix.zeros(3, 5)) == 0
    assert rank(RatMatrix.from_rows([[1, 2], [2, 4]])) == 1
    assert rank(RatMatrix.from_rows([[Fraction(1, 2), 1], [1, Fraction(1, 3)]])) == 2
    assert rank(RatMatrix.zeros(0, 3)) == 0


@pytest.mark.parametrize("seed", range(20))
def test_rank_agrees_with_naive_elimination(seed: int):
    rng = Random(seed)
    m = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
    # Force rank deficiency half of the time.
    if seed % 2 and m.rows > 1:
        rows = m.to_rows()
        rows[-1] = [x + 2 * y for x, y in zip(rows[0], rows[1 % len(rows)])]
        m = RatMatrix.from_rows(rows, cols=m.cols)
    assert rank(m) == naive_rank(m.to_rows())


@pytest.mark.parametrize("seed", range(20))
def test_kernel_basis_spans_the_kernel(seed: int):
    rng = Random(seed)
    m = _random_matrix(rng, rng.randint(1, 4), rng.randint(2, 6))
    basis = kernel_basis(m)
    assert len(basis) == m.cols - rank(m)
    for v in basis:
        assert all(x == 0 for x in m.apply(v))
    if basis:
        assert rank(RatMatrix.from_rows(basis)) == len(basis)


def test_solve_consistent_and_inconsistent():
    m = RatMatrix.from_rows([[1, 1], [2, 2]])
    x = solve(m, vector([3, 6]))
    assert x is not None
    assert m.apply(x) == vector([3, 6])
    assert solve(m, vector([3, 7])) is None
    assert in_column_space(m, vector([1, 2]))
    assert not in_column_space(m, vector([1, 0]))


def test_solve_rejects_wrong_length():
    with pytest.raises(ShapeError):
        _ = solve(RatMatrix.identity(2), vector([1, 2, 3]))


def test_one_sided_inverses():
    tall = RatMatrix.from_rows([[1, 0], [2, 1], [0, 3]])
    assert left_inverse(tall) @ tall == RatMatrix.identity(2)
    wide = tall.transpose()
    assert wide @ right_inverse(wide) == RatMatrix.identity(2)
    with pytest.raises(ShapeError):
        _ = left_inverse(RatMatrix.from_rows([[1, 2], [2, 4]]))


def test_kron_orders_first_factor_slowest():
    a = RatMatrix.from_rows([[1, 2]])
    b = RatMatrix.from_rows([[0], [1]])
    assert kron([a, b]) == RatMatrix.from_rows([[0, 0], [1, 2]])
    assert kron([]) == RatMatrix.identity(1)


def test_stacking_and_blocks():
    top = hstack([RatMatrix.identity(2), RatMatrix.zeros(2, 1)])
    m = vstack([top, RatMatrix.from_rows([[4, 5, 6]])])
    assert m.shape == (3, 3)
    assert m.block(2, 3, 0, 3) == RatMatrix.from_rows([[4, 5, 6]])
    assert m.block(0, 2, 0, 2) == RatMatrix.identity(2)
    with pytest.raises(ShapeError):
        _ = hstack([RatMatrix.identity(2), RatMatrix.identity(3)])


def test_shape_errors():
    with pytest.raises(ShapeError):
        _ = RatMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ShapeError):
        _ = RatMatrix.identity(2) @ RatMatrix.identity(3)


def test_invertibility_and_formatting():
    assert is_invertible(RatMatrix.from_rows([[1, 1], [0, 1]]))
    assert not is_invertible(RatMatrix.from_rows([[1, 1], [1, 1]]))
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(Fraction(7)) == "7"
