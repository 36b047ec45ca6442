from fractions import Fraction

from exact.simplex import phase_one, solve_linear_system


def _column_products(y, A):
    return [sum(y[i] * A[i][j] for i in range(len(A))) for j in range(len(A[0]))]


def test_feasible_system():
    A = [[1, 1, 0], [0, 1, 1]]
    b = [1, 1]
    result = phase_one(A, b)
    assert result.feasible
    x = result.solution
    assert all(v >= 0 for v in x)
    assert [sum(A[i][j] * x[j] for j in range(3)) for i in range(2)] == [1, 1]


def test_infeasible_system_has_farkas_dual():
    A = [[1, 1]]
    b = [-1]
    result = phase_one(A, b)
    assert not result.feasible
    assert result.solution is None
    assert all(v <= 0 for v in _column_products(result.dual, A))
    assert sum(y * bi for y, bi in zip(result.dual, b)) > 0


def test_infeasible_hull_system():
    # points (1,0), (0,1): no convex combination reaches the origin
    A = [[1, 0], [0, 1], [1, 1]]
    b = [0, 0, 1]
    result = phase_one(A, b)
    assert not result.feasible
    assert all(v <= 0 for v in _column_products(result.dual, A))
    assert result.dual[2] > 0


def test_degenerate_system_terminates():
    A = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [1, 1, 1, 1]]
    b = [0, 0, 0, 1]
    result = phase_one(A, b)
    assert result.feasible
    assert result.solution == [Fraction(1, 4)] * 4


def test_solve_linear_system():
    assert solve_linear_system([[1, 2], [3, 4]], [5, 6]) == [Fraction(-4), Fraction(9, 2)]
    assert solve_linear_system([[1, 1], [1, 1]], [1, 2]) is None
    assert solve_linear_system([[1, 1]], [2]) == [Fraction(2), Fraction(0)]
