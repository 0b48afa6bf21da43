import numpy as np
import pytest


def dense_j(n):
    # independent of the library's J
    Z, I = np.zeros((n, n)), np.eye(n)
    return np.block([[Z, I], [-I, Z]])


def adjoint_oracle(M):
    m, k = M.shape
    return dense_j(k // 2).T @ M.T @ dense_j(m // 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
