"""Reference matrices used by the reproduction runs and the test-suite."""
import numpy as np

__all__ = ["a6", "a12", "a6_givens_cured", "FIXTURES", "fixture"]

_A6 = [
    [1, 0, 0, 1, 2, 0],
    [2, 1, 0, 2, 1, 0],
    [0, 2, 1, 0, 2, 1],
    [0, 2, 0, 1, 0, 0],
    [0, 1, 2, 3, 1, 0],
    [0, 0, 1, 0, 3, 1],
]

_A12 = [
    [1, 5, 7, 9, 5, 1, 1, 3, 1, 3, 7, 2],
    [0, 1, 4, 6, 1, 2, 2, 1, 5, 4, 3, 5],
    [0, 0, 1, 2, 3, 2, 0, 0, 1, 2, 5, 3],
    [0, 0, 2, 1, 9, 8, 0, 0, 2, 1, 2, 4],
    [0, 0, 0, 2, 1, 3, 0, 0, 5, 2, 1, 2],
    [0, 0, 0, 4, 2, 1, 0, 0, 4, 3, 2, 1],
    [1, 4, 7, 2, 1, 3, 1, 7, 6, 1, 6, 7],
    [0, 1, 9, 3, 5, 1, 0, 1, 4, 5, 8, 3],
    [0, 0, 0, 2, 7, 9, 0, 0, 1, 3, 4, 5],
    [0, 0, 0, 1, 2, 8, 0, 0, 3, 1, 7, 3],
    [0, 0, 0, 2, 1, 2, 0, 0, 4, 3, 1, 2],
    [0, 0, 0, 9, 3, 1, 0, 0, 1, 2, 3, 1],
]


def a6():
    """6x6 matrix on which the uncured reductions break down at step 1."""
    return np.array(_A6, dtype=float)


def a12():
    """12x12 matrix on which the uncured reductions break down at step 3."""
    return np.array(_A12, dtype=float)


def a6_givens_cured():
    """S A6 S^{-1} for S = diag(G2, 1, G2, 1), G2 = [[c, s], [-s, c]], c = 1/sqrt(5), s = 2c.

    Recomputed rather than copied: the (4, 5) entry is -12/5 and the (2, 5)
    entry is -3/5. The latter is commonly quoted as +3/5, which contradicts the
    intermediate product S A6 whose second row is (0, 1, 0, 0, -3, 0)/sqrt(5).
    """
    r5 = np.sqrt(5.0)
    return np.array([
        [9 / 5, -8 / 5, 0, 13 / 5, -6 / 5, 0],
        [2 / 5, 1 / 5, 0, -6 / 5, -3 / 5, 0],
        [4 / r5, 2 / r5, 1, 4 / r5, 2 / r5, 1],
        [8 / 5, 4 / 5, 4 / r5, 11 / 5, -12 / 5, 0],
        [-6 / 5, -3 / 5, 2 / r5, 3 / 5, -1 / 5, 0],
        [0, 0, 1, 6 / r5, 3 / r5, 1],
    ])


FIXTURES = {"a6": a6, "a12": a12}


def fixture(name):
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
