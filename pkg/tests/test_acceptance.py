"""Acceptance criteria 1-11, one test each, at their stated tolerances.

Each test records a one-line verdict that is printed in the terminal
summary, then asserts it.
"""
import os
import time

import numpy as np
import pytest
import scipy.linalg as sl

from ostab import airy, audits
from ostab.grid import build_grid, chebdif
from ostab.linalg import op_norm, sigma_min, spectrum
from ostab.operators import assemble_m_u, assemble_schrodinger
from ostab.profiles import linear, poiseuille
from ostab.sweeps import critical_reynolds, exponent_fit, neutral_curve, sup_resolvent

LADDER = (1e4, 1e5, 1e6)
WORKERS = int(os.environ.get("OSTAB_WORKERS", "8"))


def _tan_root():
    # first positive root of tan k = k, the oracle for the second Neumann eigenvalue of the ball
    from scipy.optimize import brentq
    return brentq(lambda k: np.sin(k) - k * np.cos(k), 4.0, 4.6, xtol=1e-15)


def test_criterion_01_analytic_spectra(criterion):
    t = time.time()
    sp = spectrum(assemble_schrodinger(build_grid(64), poiseuille(), 0.0))
    elapsed = time.time() - t
    exact = ((np.arange(1, 6) - 0.5) * np.pi) ** 2
    err = float(np.max(np.abs(sp.eigenvalues[:5] - exact) / exact))
    ok = err < 1e-8 and elapsed < 1.0
    criterion(1, ok, f"max rel err {err:.2e} (< 1e-8), {elapsed:.2f} s (< 1 s)")
    assert ok


def test_criterion_02_weighted_operator(criterion):
    t = time.time()
    g = build_grid(64)
    op_p, op_l = assemble_m_u(g, poiseuille()), assemble_m_u(g, linear())
    pois = spectrum((op_p.a, op_p.m), shift=-1.0)
    lin = spectrum((op_l.a, op_l.m), shift=-1.0)
    elapsed = time.time() - t
    kappa1 = abs(pois.eigenvalues[0])
    k2_lin = lin.eigenvalues[1].real
    oracle = _tan_root() ** 2
    bound = oracle * poiseuille().u0 ** 2
    k2_pois = pois.eigenvalues[1].real
    ok = (kappa1 < 1e-9 and abs(k2_lin - 20.1907) < 1e-3 and abs(oracle - 20.1907) < 1e-3
          and k2_pois >= bound and elapsed < 5)
    criterion(2, ok, f"kappa1 {kappa1:.1e}, kappa2(1-x) {k2_lin:.6f} vs {oracle:.6f}, "
                     f"kappa2(pois) {k2_pois:.4f} >= {bound:.4f}, {elapsed:.2f} s")
    assert ok


def test_criterion_03_airy_layer(criterion):
    t = time.time()
    lam = 0.3j
    norm_err = max(abs(b ** (1 / 3) * airy.psi_tilde_integral(lam, b) - 1) for b in (1e4, 1e6))
    endpoint = [airy.bound_check_psi(lam, b, norm="endpoint")["ratio"] for b in LADDER]
    slopes = []
    for s in (0.0, 1.0, 2.0, 3.0):
        ratios = [airy.bound_check_psi(lam, b, s=s, norm="l1")["ratio"] for b in LADDER]
        slopes.append(exponent_fit(zip(LADDER, ratios))["slope"])
    elapsed = time.time() - t
    ok = (norm_err < 1e-6 and all(0.1 <= e <= 10 for e in endpoint) and max(slopes) <= 0.1
          and elapsed < 10)
    criterion(3, ok, f"normalization err {norm_err:.1e}, endpoint ratios "
                     f"[{min(endpoint):.3f}, {max(endpoint):.3f}], max L1-ratio slope "
                     f"{max(slopes):.3f}, {elapsed:.1f} s")
    assert ok


def _classical_os_eigs(alpha, re, n):
    """Independent oracle: full channel (-1, 1), U = 1 - y^2, clamped walls.

    phi = (1 - y^2) q with q vanishing at the walls carries both boundary
    conditions; the eigenvalue is the classical phase speed c.
    """
    y, dm = chebdif(n + 1, 4)
    d = [np.eye(n + 1)] + list(dm)
    w = [1 - y**2, -2 * y, -2 * np.ones_like(y), np.zeros_like(y), np.zeros_like(y)]
    binom = [[1], [1, 1], [1, 2, 1], [1, 3, 3, 1], [1, 4, 6, 4, 1]]

    def deriv(k):
        return sum(binom[k][j] * w[j][:, None] * d[k - j] for j in range(k + 1))

    inner = slice(1, n)
    phi, d2, d4 = (deriv(k)[inner, inner] for k in (0, 2, 4))
    u = (1 - y**2)[inner]
    lap = d2 - alpha**2 * phi
    a = d4 - 2 * alpha**2 * d2 + alpha**4 * phi - 1j * alpha * re * (u[:, None] * lap + 2 * phi)
    b = -1j * alpha * re * lap
    c = sl.eigvals(a, b)
    return c[np.isfinite(c)]


def test_criterion_04_critical_reynolds(criterion):
    t = time.time()
    r = critical_reynolds("poiseuille", n=128, criterion="classical")
    elapsed = time.time() - t
    # oracle: classical solver at R' = R/2, c' = 2c must sit on the neutral curve
    c = _classical_os_eigs(r["alpha_c"], r["R_c"] / 2, 160)
    top = c[np.argmax(c.imag)]
    ok = (abs(r["R_c"] - 11544.4) <= 1.0 and abs(r["alpha_c"] - 1.0206) <= 0.002
          and elapsed < 60 and abs(r["residual"]) < 1e-7
          and abs(top.imag) < 1e-6 and abs(top.real - 2 * r["c_c"].real) < 1e-6)
    criterion(4, ok, f"R_c {r['R_c']:.4f}, alpha_c {r['alpha_c']:.5f}, c_c {r['c_c'].real:.6f}; "
                     f"oracle max Im c' {top.imag:.1e}, Re c' {top.real:.6f}; {elapsed:.1f} s")
    assert ok


def test_criterion_05_instability_band(criterion):
    t = time.time()
    rs = [1e5, 1e6, 1e7]
    pts = neutral_curve("poiseuille", rs, criterion="paper", workers=WORKERS)
    elapsed = time.time() - t
    has = [p.has_band for p in pts]
    detail = f"bands {[(round(p.alpha_lower, 4), round(p.alpha_upper, 4)) for p in pts]}"
    ok = has[0] and all(has) and elapsed < 15 * 60
    if all(has):
        lo = exponent_fit([(p.reynolds, p.alpha_lower) for p in pts])["slope"]
        hi = exponent_fit([(p.reynolds, p.alpha_upper) for p in pts])["slope"]
        ok = ok and abs(lo + 1 / 7) <= 0.05 and abs(hi + 1 / 11) <= 0.04
        detail += (f"; lower slope {lo:.4f} (window [{-1/7-0.05:.3f}, {-1/7+0.05:.3f}]), "
                   f"upper slope {hi:.4f} (window [{-1/11-0.04:.3f}, {-1/11+0.04:.3f}])")
    criterion(5, ok, detail + f"; {elapsed:.0f} s")
    assert ok


def _sup_ladder(alpha_of_beta):
    out = []
    for b in LADDER:
        out.append(sup_resolvent("poiseuille", alpha_of_beta(b), b))
    return out


def test_criterion_06_zero_alpha_sup(criterion):
    t = time.time()
    res = _sup_ladder(lambda b: 0.0)
    elapsed = time.time() - t
    finite = all(np.isfinite(r.value) for r in res)
    slope = exponent_fit([(r.beta, r.value) for r in res])["slope"] if finite else np.nan
    ok = finite and -0.65 <= slope <= -0.35 and elapsed < 600
    criterion(6, ok, f"sups {[f'{r.value:.4e}' for r in res]}, slope {slope:.4f} "
                     f"(window [-0.65, -0.35]); {elapsed:.0f} s")
    assert ok


def test_criterion_07_band_edge_sup(criterion):
    t = time.time()
    delta = 0.05
    res = _sup_ladder(lambda b: b ** (-1 / 10 + delta / 2))
    elapsed = time.time() - t
    finite = all(np.isfinite(r.value) for r in res)
    slope = exponent_fit([(r.beta, r.value) for r in res])["slope"] if finite else np.nan
    ok = finite and -0.65 <= slope <= -0.30 and elapsed < 600
    detail = ", ".join(f"beta {r.beta:.0e}: " + ("unstable, leftmost Re "
                                                 f"{r.leftmost.real:.3e}" if r.unstable
                                                 else f"{r.value:.4e}") for r in res)
    criterion(7, ok, f"{detail}; slope {slope:.4f} (window [-0.65, -0.30]); {elapsed:.0f} s")
    assert ok


def test_criterion_08_schrodinger_scaling(criterion):
    u0 = poiseuille().u0
    zero = [(b, audits.schrodinger_resolvent_norm("poiseuille", b, 0j)) for b in LADDER]
    layer = [(b, audits.schrodinger_resolvent_norm("poiseuille", b, 1j * u0)) for b in LADDER]
    s0 = exponent_fit(zero)["slope"]
    s1 = exponent_fit(layer)["slope"]
    ok = abs(s0 + 2 / 3) <= 0.08 and abs(s1 + 0.5) <= 0.08
    criterion(8, ok, f"slope at lam=0 {s0:.4f} (-2/3 +- 0.08), at lam=iU(0) {s1:.4f} (-1/2 +- 0.08)")
    assert ok


def test_criterion_09_damping_inequality(criterion):
    case = audits.AuditCase("NEG_MU", beta=1e5, lam=complex(-1.0, 0.25), ladder=1e5)
    recs = audits.audit_schrodinger(case, seed_count=20, refine=False)
    l2 = [r for r in recs if r.case == "NEG_MU:l2"]
    random = [r for r in l2 if r.seed >= 0]
    worst = max(r.ratio for r in l2)
    ok = len(random) == 20 and worst <= 1 + 1e-6
    criterion(9, ok, f"{len(random)} random data + worst case, max ratio {worst:.8f} (<= 1 + 1e-6)")
    assert ok


def test_criterion_10_audit_suite(criterion):
    failed = {}
    count = 0
    for cid in audits.INVISCID_CASES + audits.SCHRODINGER_CASES:
        summary = audits.summarize(audits.run_case(cid))
        count += len(summary)
        for key, s in summary.items():
            if not s.passed:
                failed[key] = s.reasons
    ok = not failed
    criterion(10, ok, f"{count} case groups summarized, failures: {failed or 'none'}")
    assert ok


def test_criterion_11_linalg_oracles(criterion):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        a = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
        ref = np.linalg.svd(a, compute_uv=False)[-1]
        worst = max(worst, abs(sigma_min(a) - ref) / ref)
    dual = 0.0
    for _ in range(5):
        a = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
        inv = np.linalg.inv(a)
        big = op_norm(lambda x: inv @ x, lambda x: inv.conj().T @ x, 30, tol=1e-12)
        dual = max(dual, abs(sigma_min(a) * big - 1))
    ok = worst < 1e-8 and dual < 1e-6
    criterion(11, ok, f"max rel err vs SVD {worst:.1e} (< 1e-8), duality defect {dual:.1e} (< 1e-6)")
    assert ok
