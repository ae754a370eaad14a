import numpy as np
import pytest

from siegelmodp.linalg import Inconsistent, RankDeficiency, nullspace, rank, rref, solve


def test_identity():
    R, piv = rref(np.eye(4, dtype=np.int64), 7)
    assert np.array_equal(R, np.eye(4)) and piv == [0, 1, 2, 3]
    assert nullspace(np.eye(4, dtype=np.int64), 7).shape == (0, 4)


def test_zero_matrix():
    N = nullspace(np.zeros((3, 5), dtype=np.int64), 5)
    assert rank(N, 5) == 5


@pytest.mark.parametrize("seed", range(5))
def test_random_6x9(seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, 7, size=(6, 9))
    N = nullspace(A, 7)
    assert not np.any(A @ N.T % 7)
    assert rank(A, 7) + len(N) == 9


def test_solve_and_errors():
    A = np.array([[1, 2], [3, 4], [5, 6]])
    x = np.array([3, 1])
    assert np.array_equal(solve(A, A @ x % 11, 11), x)
    with pytest.raises(Inconsistent):
        solve(A, np.array([1, 0, 0]), 11)
    with pytest.raises(RankDeficiency):
        solve(np.array([[1, 1], [2, 2]]), np.array([1, 2]), 11)
