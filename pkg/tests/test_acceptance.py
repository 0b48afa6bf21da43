"""Acceptance criteria 1-10.

Each check prints one ``PASS``/``FAIL`` line. Run with ``pytest -v
tests/test_acceptance.py`` or directly with ``python tests/test_acceptance.py``.
"""
import sys
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from symplectic_sr.core import (  # noqa: E402
    check_structure,
    pattern_defect,
    symplecticity_defect,
)
from symplectic_sr.eigen import initial_state, restart_similarity, solve_spectrum  # noqa: E402
from symplectic_sr.fixtures import a6, a6_givens_cured, a12  # noqa: E402
from symplectic_sr.jhessenberg import (  # noqa: E402
    Reduction,
    ReductionConfig,
    diag_equivalence,
    established_zero_mask,
    jhess,
    jhm2sh,
    jhmsh,
    mjhess,
    reduce,
    similarity_residual,
)
from symplectic_sr.srfact import NearBreakdownWarning, srdeco, srmsh, verify_minor_identity  # noqa: E402
from symplectic_sr.transforms import BreakdownError  # noqa: E402

from test_eigen import charpoly_exact, match, quadratic_oracle  # noqa: E402
from test_transforms import FAMILIES, adjoint_oracle, random_transform  # noqa: E402


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def criterion_1():
    A = a12()
    r1, t1 = timed(mjhess, A)
    r2, t2 = timed(jhm2sh, A)
    d1, d2 = symplecticity_defect(r1.s), symplecticity_defect(r2.s)
    ok = d1 <= 1e-12 and d2 <= 1e-12 and t1 < 1 and t2 < 1
    return ok, f"||I - S^J S||_2: mjhess {d1:.3e}, jhm2sh {d2:.3e}; {t1 + t2:.3f} s"


def criterion_2():
    A = a12()
    r1, t1 = timed(mjhess, A)
    r2, t2 = timed(jhm2sh, A)
    e1, e2 = similarity_residual(A, r1.s, r1.h), similarity_residual(A, r2.s, r2.h)
    ok = e1 <= 1e-11 and e2 <= 1e-10 and t1 < 1 and t2 < 1
    return ok, f"||A - S H S^-1||_2: mjhess {e1:.3e}, jhm2sh {e2:.3e}; {t1 + t2:.3f} s"


def criterion_3():
    expected = {("jhess", "a6"): 1, ("jhmsh", "a6"): 1, ("jhess", "a12"): 3, ("jhmsh", "a12"): 3}
    got = {}
    for (alg, fx), step in expected.items():
        fn = {"jhess": jhess, "jhmsh": jhmsh}[alg]
        try:
            fn({"a6": a6, "a12": a12}[fx]())
            got[(alg, fx)] = None
        except BreakdownError as exc:
            got[(alg, fx)] = exc.step
    return got == expected, ", ".join(f"{a}/{f}: j={s}" for (a, f), s in got.items())


def criterion_4():
    red = Reduction(a6(), ReductionConfig(cure=True, cure_kind="g2"))
    red.cure(1)
    ref = a6_givens_cured()
    err = float(np.abs(red.H - ref).max())
    # the two hard-to-read entries, recomputed from S = diag(G, 1, G, 1)
    c, s = 1 / np.sqrt(5), 2 / np.sqrt(5)
    S = np.eye(6)
    S[:2, :2] = S[3:5, 3:5] = [[c, s], [-s, c]]
    direct = S @ a6() @ S.T
    amb = abs(direct[1, 4] + 3 / 5) + abs(direct[3, 4] + 12 / 5)
    ok = err <= 1e-12 and amb <= 1e-12
    return ok, f"max entry error {err:.2e}; (2,5) = {direct[1, 4]:.6f}, (4,5) = {direct[3, 4]:.6f}"


def criterion_5():
    C = np.array([1, 1, 0.4113, 0.3688, 0.7747, 0.6638])
    F = np.array([0, 0, -2.3962, -2.3371, 1.2880, -1.9982])
    r1, r2 = mjhess(a12()), jhm2sh(a12())
    eq = diag_equivalence(r1.s, r1.h, r2.s, r2.h)
    dc, df = np.abs(eq.c - C).max(), np.abs(eq.f - F).max()
    ok = dc <= 5e-5 and df <= 5e-5 and eq.similarity_defect <= 1e-10
    return ok, (f"|C - ref| {dc:.1e}, |F - ref| {df:.1e}, "
                f"||D^-1 H1 D - H2||_2 {eq.similarity_defect:.3e}")


def criterion_6():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    worst, checked, skipped = 0.0, 0, 0
    for t in range(200):
        n = (2, 4, 6)[t % 3]
        A = rng.standard_normal((2 * n, 2 * n))
        for j in range(1, n + 1):
            try:
                brute, prod = verify_minor_identity(A, j)
            except BreakdownError:
                skipped += 1
                break
            worst = max(worst, abs(brute - prod) / abs(brute))
            checked += 1
    dt = time.perf_counter() - t0
    ok = worst <= 1e-8 and dt < 10
    return ok, f"{checked} stages, worst relative gap {worst:.2e}, {skipped} unreachable; {dt:.2f} s"


def criterion_7():
    rng = np.random.default_rng(7)
    worst, used = 0.0, 0
    pattern_ok = True
    for _ in range(200):
        n = int(rng.integers(1, 9))
        A = rng.standard_normal((2 * n, 2 * n))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearBreakdownWarning)
            facs = [srdeco(A), srmsh(A)]
        if any(f.near_breakdowns for f in facs):
            continue
        used += 1
        for f in facs:
            worst = max(worst, np.linalg.norm(A - f.s @ f.r, 2) / np.linalg.norm(A, 2))
            pattern_ok &= check_structure(f.r, 0.0).is_j_triangular
    ok = worst <= 1e-11 and pattern_ok and used > 150
    return ok, f"{used} matrices, worst ||A - SR||_2 / ||A||_2 = {worst:.2e}"


def criterion_8():
    worst, count = 0.0, {}
    for family in FAMILIES:
        rng = np.random.default_rng(800 + FAMILIES.index(family))
        count[family] = 0
        for _ in range(60):
            n, t, T = random_transform(rng, family)
            M = rng.standard_normal((2 * n, 2 * n))
            Tinv = adjoint_oracle(T)
            nT, nI, nM = (np.linalg.norm(X, 2) for X in (T, Tinv, M))
            pairs = [(t.left(M), T @ M, nT * nM), (t.right(M), M @ T, nT * nM),
                     (t.left(M, inverse=True), Tinv @ M, nI * nM),
                     (t.right(M, inverse=True), M @ Tinv, nI * nM),
                     (t.similarity(M), T @ M @ Tinv, nT * nI * nM)]
            for got, ref, scale in pairs:
                worst = max(worst, np.linalg.norm(got - ref, 2) / scale)
            count[family] += 1
    ok = worst <= 1e-12 and min(count.values()) >= 50
    return ok, f"{sum(count.values())} cases over {len(count)} families, worst {worst:.2e}"


def criterion_9():
    cured = mjhess(a6(), cure_kind="g2").h
    e_a6 = match(solve_spectrum(cured).eigenvalues, np.roots(charpoly_exact(a6())))
    rng = np.random.default_rng(9)
    e_2 = 0.0
    for _ in range(100):
        B = rng.standard_normal((2, 2))
        e_2 = max(e_2, match(solve_spectrum(B).eigenvalues, quadratic_oracle(B)))
    # The restart similarity is orthogonal, and so is the restoration for
    # i >= 2. Restoring after i = 1 moves the first column, which forces a
    # fresh non-orthogonal reduction; its drift is reported, not gated.
    e_r, e_1 = 0.0, 0.0
    for t in range(20):
        state = initial_state(rng.standard_normal((10, 10)))
        before = np.linalg.eigvals(state.m)
        i = 1 + t % 3
        bare = restart_similarity(state, i, 2, rng=t, restore=False).m
        e_r = max(e_r, match(np.linalg.eigvals(bare), before))
        restored = match(np.linalg.eigvals(restart_similarity(state, i, 2, rng=t).m), before)
        if i == 1:
            e_1 = max(e_1, restored)
        else:
            e_r = max(e_r, restored)
    ok = e_a6 <= 1e-6 and e_2 <= 1e-12 and e_r <= 1e-10
    return ok, (f"A6 vs charpoly {e_a6:.2e}, 2x2 vs quadratic {e_2:.2e}, "
                f"orthogonal restart drift {e_r:.2e} (i = 1 re-reduction {e_1:.2e})")


def criterion_10():
    rng = np.random.default_rng(10)
    inputs = [("a6", a6()), ("a12", a12())] + [
        (f"random{k}", rng.standard_normal((10, 10))) for k in range(3)]
    worst, events = 0.0, 0
    for name, A in inputs:
        n = A.shape[0] // 2
        for variant in ("jhess", "jhmsh"):
            for kind in ("h2", "g2", "block"):
                def monitor(red, label):
                    nonlocal worst
                    mask = established_zero_mask(n, red.completed)
                    worst = max(worst, pattern_defect(red.H, mask) / np.linalg.norm(red.H, 2))

                res = reduce(A, ReductionConfig(cure=True, variant=variant, cure_kind=kind,
                                                block_size=3), monitor=monitor)
                events += len(res.cures)
    ok = worst <= 1e-13 and events > 0
    return ok, f"worst degradation {worst:.2e} x ||H||, {events} cures observed"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def report(k, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok, line


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k, capsys):
    ok, line = report(k, CRITERIA[k - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(k, fn) for k, fn in enumerate(CRITERIA, 1)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
