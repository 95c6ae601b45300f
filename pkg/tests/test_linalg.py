import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ostab.grid import build_grid
from ostab.linalg import (AdjointMismatchError, SingularMatrixError, leftmost, lu_solve, op_norm,
                          resolvent_norms, sigma_min, spectrum)
from ostab.operators import SpectralParams, assemble_os, assemble_schrodinger


def _rand(rng, n, cond_shift=0.0):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) + cond_shift * np.eye(n)


def test_lu_solve_examples(rng):
    b = rng.standard_normal(4) + 1j
    np.testing.assert_array_equal(lu_solve(np.eye(4), b), b)
    np.testing.assert_allclose(lu_solve(np.diag([1, 2j]), np.array([1, 2j])), [1, 1])
    a = _rand(rng, 50, 20.0)
    b = rng.standard_normal(50)
    x = lu_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(a, 2) * np.linalg.norm(x)
    xh = lu_solve(a, b, adjoint=True)
    assert np.linalg.norm(a.conj().T @ xh - b) <= 1e-10 * np.linalg.norm(a, 2) * np.linalg.norm(xh)


def test_lu_solve_errors():
    with pytest.raises(SingularMatrixError):
        lu_solve(np.zeros((3, 3)), np.ones(3))
    with pytest.raises(ValueError):
        lu_solve(np.ones((2, 3)), np.ones(2))


def test_sigma_min_examples():
    assert sigma_min(np.diag([3.0, 1.0, 2.0])) == pytest.approx(1.0, rel=1e-12)
    assert sigma_min(np.array([[0.0, 1.0], [2.0, 0.0]])) == pytest.approx(1.0, rel=1e-12)
    assert sigma_min(np.zeros((3, 3))) == 0.0


def test_sigma_min_weighted(rng):
    a = _rand(rng, 20, 3.0)
    ws = rng.uniform(0.5, 2.0, 20)
    ref = np.linalg.svd(ws[:, None] * a / ws[None, :], compute_uv=False)[-1]
    assert abs(sigma_min(a, ws) - ref) / ref < 1e-8


def test_sigma_min_reports_convergence(rng):
    val, ok, its = sigma_min(_rand(rng, 10, 5.0), full_output=True)
    assert ok and its >= 1 and val > 0


def test_op_norm_examples():
    n = 7
    assert op_norm(lambda x: x, lambda x: x, n) == pytest.approx(1.0, rel=1e-6)
    assert op_norm(lambda x: 2j * x, lambda x: -2j * x, n) == pytest.approx(2.0, rel=1e-6)
    d = np.arange(1, n + 1)
    assert op_norm(lambda x: d * x, lambda x: d * x, n) == pytest.approx(float(n), rel=1e-6)


def test_op_norm_adjoint_check(rng):
    a = _rand(rng, 6)
    with pytest.raises(AdjointMismatchError):
        op_norm(lambda x: a @ x, lambda x: a @ x, 6)
    ws = rng.uniform(0.5, 2.0, 6)
    w = ws**2
    # adjoint in the weighted inner product is W^{-1} A^H W
    val = op_norm(lambda x: a @ x, lambda x: (a.conj().T @ (w * x)) / w, 6, weight_sqrt=ws)
    ref = np.linalg.norm(ws[:, None] * a / ws[None, :], 2)
    assert val == pytest.approx(ref, rel=1e-6)


def test_sigma_min_times_inverse_norm(rng):
    for _ in range(3):
        a = _rand(rng, 30, 2.0)
        inv = np.linalg.inv(a)
        s = sigma_min(a)
        big = op_norm(lambda x: inv @ x, lambda x: inv.conj().T @ x, 30, tol=1e-12)
        assert abs(s * big - 1) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 30))
def test_sigma_min_matches_svd_property(seed, n):
    a = _rand(np.random.default_rng(seed), n, 1.0)
    ref = np.linalg.svd(a, compute_uv=False)[-1]
    assert abs(sigma_min(a) - ref) <= 1e-8 * ref


def test_spectrum_examples():
    sp = spectrum((np.diag([3.0, 1.0, 2.0]), np.eye(3)))
    np.testing.assert_allclose(sp.eigenvalues, [1, 2, 3])
    assert sp.infinite_filtered == 0
    sp = spectrum((np.diag([1.0, 2.0]), np.diag([1.0, 0.0])))
    np.testing.assert_allclose(sp.eigenvalues, [1])
    assert sp.infinite_filtered >= 1
    assert np.all(sp.residuals <= 1e-8)


def test_spectrum_sorted_and_counted(g64, pois):
    op = assemble_os(g64, pois, SpectralParams(1.0, 2000.0))
    sp = spectrum(op)
    assert np.all(np.diff(sp.eigenvalues.real) >= 0)
    assert len(sp) + sp.infinite_filtered + sp.rejected == op.dim
    assert np.all(sp.residuals <= 1e-8)


def test_spectrum_needs_mass(g64, pois):
    op = assemble_schrodinger(g64, pois, 1.0)
    from dataclasses import replace
    with pytest.raises(ValueError):
        spectrum(replace(op, m=None))


def test_leftmost_examples(g64, pois):
    a = np.diag([1 + 1j, -2, 3])
    assert leftmost((a, np.eye(3))) == pytest.approx(-2)
    lam = leftmost(assemble_schrodinger(g64, pois, 0.0))
    assert abs(lam - np.pi**2 / 4) < 1e-8
    op = assemble_os(build_grid(128), pois, SpectralParams.from_reynolds(1.02, 12000.0))
    assert leftmost(op).real < 0


def test_conjugate_profile_pairs_eigenvalues(g64, pois):
    from ostab.profiles import negated
    p = SpectralParams(1.0, 2000.0)
    e1 = spectrum(assemble_os(g64, pois, p)).eigenvalues
    e2 = spectrum(assemble_os(g64, negated(pois), p)).eigenvalues
    e1 = e1[np.abs(e1) < 2]
    e2 = e2[np.abs(e2) < 2]
    np.testing.assert_allclose(np.sort_complex(e1), np.sort_complex(np.conj(e2)), atol=1e-8)


def test_resolvent_norm_matches_dense_inverse(g16, pois):
    op = assemble_schrodinger(g16, pois, 50.0)
    lam = 0.3j
    norm, dnorm = resolvent_norms(op, lam)
    # dense oracle: rows of the inverse mapping interior data to the solution
    inv = np.linalg.inv(op.at(lam))[:, op.source_rows]
    ws = g16.weight_sqrt
    ref = np.linalg.norm(ws[:, None] * inv / ws[op.source_nodes][None, :], 2)
    dref = np.linalg.norm(ws[:, None] * (g16.d1 @ inv) / ws[op.source_nodes][None, :], 2)
    assert norm == pytest.approx(ref, rel=1e-10)
    assert dnorm == pytest.approx(dref, rel=1e-10)


def test_resolvent_norm_at_eigenvalue_is_large(g64, pois):
    op = assemble_schrodinger(g64, pois, 0.0)
    norm, _ = resolvent_norms(op, np.pi**2 / 4)
    assert norm > 1e6


def test_resolvent_norm_far_from_spectrum(pois):
    # -D^2 - lam on ND functions: the norm is 1/dist(lam, spectrum) for real lam
    # below it.  Dropping the boundary rows from the data space costs O(n^-2).
    exact = 1 / (np.pi**2 / 4 + 10)
    errs = []
    for n in (32, 64, 128):
        norm, _ = resolvent_norms(assemble_schrodinger(build_grid(n), pois, 0.0), -10.0,
                                  derivative=False)
        errs.append(abs(norm / exact - 1))
    assert errs[1] < 1e-3
    assert errs[2] < errs[1] / 3 < errs[0] / 9
