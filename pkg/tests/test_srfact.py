import warnings

import numpy as np
import pytest

from symplectic_sr.core import (
    check_structure,
    j_triangular_zero_mask,
    pattern_defect,
    symplectic_adjoint,
)
from symplectic_sr.srfact import (
    NearBreakdownWarning,
    diagnose_existence,
    sr_factor,
    srdeco,
    srmsh,
    verify_minor_identity,
)
from symplectic_sr.transforms import BreakdownError

# first column e_1 and column n+1 equal to e_2: stage 1 ends with
# r_{n+1,n+1} = 0 while r_{2,n+1} != 0
BREAKDOWN_4 = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])


@pytest.mark.parametrize("factor", [srdeco, srmsh])
def test_identity(factor):
    # the reflector convention sends e_1 to -e_1, so S = R = -I
    out = factor(np.eye(6))
    np.testing.assert_array_equal(out.s, -np.eye(6))
    np.testing.assert_array_equal(out.r, -np.eye(6))
    assert out.residual == 0.0


@pytest.mark.parametrize("factor", [srdeco, srmsh])
def test_random_reconstruction(factor, rng):
    A = rng.standard_normal((8, 8))
    out = factor(A)
    assert np.linalg.norm(A - out.s @ out.r, 2) <= 1e-11 * np.linalg.norm(A, 2)
    assert check_structure(out.r, 0.0).is_j_triangular
    assert out.symplecticity_defect <= 1e-10


@pytest.mark.parametrize("factor", [srdeco, srmsh])
def test_breakdown_at_stage_one(factor):
    with pytest.raises(BreakdownError) as info:
        factor(BREAKDOWN_4)
    assert info.value.step == 1


def test_input_not_mutated(rng):
    A = rng.standard_normal((6, 6))
    B = A.copy()
    srdeco(A)
    srmsh(A)
    np.testing.assert_array_equal(A, B)


def test_tolerance_check():
    A = np.diag([1.0, 1e-9, 1.0, 1e9]) + np.triu(np.ones((4, 4)), 1)
    with pytest.raises(ArithmeticError):
        sr_factor(A, "srdeco", tol=1e-300)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        sr_factor(np.eye(2), "qr")


def test_near_breakdown_warns():
    eps = 1e-10
    A = BREAKDOWN_4.copy()
    A[2, 2] = eps
    with pytest.warns(NearBreakdownWarning):
        out = srdeco(A, tau=1e8)
    assert out.near_breakdowns and out.near_breakdowns[0][0] == 1


def test_srdeco_srmsh_related_by_diagonal_symplectic(rng):
    A = rng.standard_normal((8, 8))
    f1, f2 = srdeco(A), srmsh(A)
    n = 4
    D = np.linalg.solve(f1.s, f2.s)
    off = D.copy()
    idx = np.arange(n)
    for r, c in [(idx, idx), (idx, n + idx), (n + idx, n + idx)]:
        off[r, c] = 0.0
    assert np.abs(off).max() <= 1e-9 * np.abs(D).max()
    np.testing.assert_allclose(np.diag(D[n:, n:]) * np.diag(D[:n, :n]), 1.0, rtol=1e-9)
    np.testing.assert_allclose(np.linalg.solve(D, f1.r), f2.r, atol=1e-9 * np.abs(f1.r).max())


def test_same_success_and_failure(rng):
    cases = [BREAKDOWN_4, np.eye(4)] + [rng.standard_normal((6, 6)) for _ in range(10)]
    for A in cases:
        outcome = []
        for factor in (srdeco, srmsh):
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", NearBreakdownWarning)
                    factor(A)
                outcome.append(True)
            except BreakdownError:
                outcome.append(False)
        assert outcome[0] == outcome[1]


class TestMinorIdentity:
    def test_identity_matrix(self):
        for j in (1, 2, 3):
            assert verify_minor_identity(np.eye(6), j) == pytest.approx((1.0, 1.0))

    def test_random(self, rng):
        A = rng.standard_normal((8, 8))
        for j in (1, 2, 3):
            brute, prod = verify_minor_identity(A, j)
            assert prod == pytest.approx(brute, rel=1e-8)

    def test_repeated_columns(self, rng):
        A = rng.standard_normal((6, 6))
        A[:, 3] = A[:, 0]
        # columns 1 and n+1 coincide, so the first skew product vanishes
        brute, prod = verify_minor_identity(A, 1)
        assert abs(brute) <= 1e-12 and abs(prod) <= 1e-12

    def test_range(self):
        with pytest.raises(ValueError):
            verify_minor_identity(np.eye(4), 0)


class TestDiagnosis:
    def test_identity(self):
        d = diagnose_existence(np.eye(6))
        assert d.exists and d.verdict == "exists"
        assert [abs(s.r_njnj) for s in d.stages] == [1.0, 1.0, 1.0]

    def test_breakdown_matrix(self):
        d = diagnose_existence(BREAKDOWN_4)
        assert d.verdict == "fails-at-stage-1"
        s = d.stages[0]
        assert s.r_njnj == 0.0 and s.r_j1nj != 0.0
        assert d.nonsingular and d.corollary_consistent

    def test_random_consistent_with_srdeco(self, rng):
        for _ in range(10):
            A = rng.standard_normal((8, 8))
            d = diagnose_existence(A)
            assert d.exists and d.corollary_consistent
            for j, brute, prod in d.minor_checks:
                assert prod == pytest.approx(brute, rel=1e-8)
            srdeco(A)

    def test_never_raises_on_singular(self):
        d = diagnose_existence(np.zeros((4, 4)))
        assert d.exists and not d.nonsingular


def test_r_pattern_exact_after_cleanup(rng):
    out = srmsh(rng.standard_normal((10, 10)))
    assert pattern_defect(out.r, j_triangular_zero_mask(5)) == 0.0
    S = out.s
    assert np.linalg.norm(symplectic_adjoint(S) @ S - np.eye(10), 2) == pytest.approx(
        out.symplecticity_defect)
