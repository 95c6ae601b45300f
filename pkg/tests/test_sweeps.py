import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ostab.linalg import leftmost, sigma_min
from ostab.operators import SpectralParams
from ostab.profiles import negated, poiseuille
from ostab.sweeps import (NoBandError, SweepRecord, classify_region, convert_c, exponent_fit,
                          growth, lambda_from_c, n_for_beta, neutral_band, neutral_curve,
                          os_operator, region_map, resolvent_at, resolvent_line, sup_resolvent)


def test_n_for_beta():
    assert n_for_beta(1e4) == 128
    assert n_for_beta(1e8) == 1200
    assert n_for_beta(1e6) % 2 == 0 and n_for_beta(1e6) >= 12 * 1e6**0.25


def test_exponent_fit_examples(rng):
    betas = np.logspace(3, 7, 6)
    fit = exponent_fit(zip(betas, betas**-0.5))
    assert abs(fit["slope"] + 0.5) < 1e-12 and fit["r2"] == pytest.approx(1.0)
    noisy = betas ** (-2 / 3) * (1 + 0.01 * rng.standard_normal(6))
    assert abs(exponent_fit(zip(betas, noisy))["slope"] + 2 / 3) < 0.02
    with pytest.raises(ValueError):
        exponent_fit([(1e4, 1.0), (1e4, 2.0), (1e5, 3.0)])
    with pytest.raises(ValueError):
        exponent_fit([(1e4, 1.0), (1e5, -2.0), (1e6, 3.0)])
    with pytest.raises(ValueError):
        exponent_fit([(1e4, 1.0), (1e5, 2.0)])


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-5, 5))
def test_exponent_fit_recovers_power_law(slope, logc):
    betas = [1e4, 1e5, 1e6, 1e7]
    fit = exponent_fit([(b, np.exp(logc) * b**slope) for b in betas])
    assert abs(fit["slope"] - slope) < 1e-9


def test_convert_c_examples():
    p = SpectralParams(0.8, 400.0)
    assert abs(convert_c(p, -0.8**2 / 400)) < 1e-16
    c = convert_c(p, 0.3j)
    assert c.real == pytest.approx(0.3)
    with pytest.raises(ValueError):
        convert_c(SpectralParams(0.0, 1.0), 0.1j)
    with pytest.raises(ValueError):
        lambda_from_c(SpectralParams(0.0, 1.0), 0.1)


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.01, 3), st.floats(1, 1e7))
def test_convert_c_round_trip(cr, ci, alpha, beta):
    p = SpectralParams(alpha, beta)
    c = complex(cr, ci)
    assert abs(convert_c(p, lambda_from_c(p, c)) - c) < 1e-14 * (1 + abs(c))


def test_resolvent_at_damped_region():
    rec = resolvent_at("poiseuille", SpectralParams(0.0, 1e4, -10.0))
    assert rec.flag == "ok"
    assert rec.resolvent_norm <= 1 / (10 * 1e4) * (1 + 1e-6)
    op = os_operator("poiseuille", 0.0, 1e4)
    s = sigma_min(op.at(-10.0))
    assert s > 0


def test_resolvent_at_eigenvalue_is_flagged():
    op = os_operator("poiseuille", 1.0, 2000.0, 64)
    lam = leftmost(op)
    rec = resolvent_at("poiseuille", SpectralParams(1.0, 2000.0, lam), n=64)
    assert rec.flag == "singular" and rec.resolvent_norm == np.inf
    near = resolvent_at("poiseuille", SpectralParams(1.0, 2000.0, lam + 1e-3), n=64)
    assert near.flag == "ok" and np.isfinite(near.total)


def test_resolvent_line_deterministic_across_workers():
    lams = [0.05j * k for k in range(6)]
    a = resolvent_line("poiseuille", 0.5, 1e4, lams, n=64)
    b = resolvent_line("poiseuille", 0.5, 1e4, lams[::-1], n=64, workers=2)
    assert a == b
    assert [r.lam.imag for r in a] == sorted(r.lam.imag for r in a)
    assert all(isinstance(r, SweepRecord) and r.resolvent_norm > 0 for r in a)


@pytest.fixture(scope="module")
def sup_1e4():
    return sup_resolvent("poiseuille", 0.0, 1e4, npts=60)


def test_sup_resolvent_finite_and_boundary_dominated(sup_1e4):
    r = sup_1e4
    assert not r.unstable and np.isfinite(r.value)
    assert r.value == pytest.approx(r.resolvent_norm + r.derivative_norm)
    assert r.boundary_dominated
    assert r.far_field < r.value


def test_sup_scan_continuity(sup_1e4):
    vals = np.array([v for _, v in sup_1e4.scan])
    assert np.all(vals[1:] / vals[:-1] < 10) and np.all(vals[:-1] / vals[1:] < 10)


def test_sup_shrinks_when_beta_doubles(sup_1e4):
    r2 = sup_resolvent("poiseuille", 0.0, 2e4, npts=60)
    assert r2.value < sup_1e4.value


def test_sup_unstable_in_band():
    r = sup_resolvent("poiseuille", 0.7, 7e4, npts=10, interior=0)
    assert r.unstable and r.value == np.inf and r.leftmost.real < 0


def test_growth_examples():
    assert growth("poiseuille", 1.02, 2000).real > 0
    assert growth("poiseuille", 1.02, 20000).real < 0
    with pytest.raises(ValueError):
        growth("poiseuille", 0.0, 1000)


def test_growth_conjugate_profile():
    lam = growth(poiseuille(), 1.02, 8000, n=96)
    lam_neg = growth(negated(poiseuille()), 1.02, 8000, n=96)
    assert abs(lam - np.conj(lam_neg)) < 1e-8


@pytest.fixture(scope="module")
def band_2e4():
    return neutral_band("poiseuille", 2e4, npts=16)


def test_neutral_band_contains_critical_alpha(band_2e4):
    assert band_2e4.alpha_lower < 1.02 < band_2e4.alpha_upper


def test_band_narrows_toward_critical(band_2e4):
    near = neutral_band("poiseuille", 1.3e4, npts=16, alpha_range=(0.8, 1.3))
    assert near.has_band
    assert near.alpha_upper - near.alpha_lower < band_2e4.alpha_upper - band_2e4.alpha_lower


def test_no_band_below_critical():
    pts = neutral_curve("poiseuille", [5000.0], npts=12)
    assert not pts[0].has_band
    with pytest.raises(NoBandError):
        neutral_band("poiseuille", 5000.0, npts=12)


def test_classify_region_examples():
    beta = 1e6
    assert classify_region(0.5, 0.5 + 20 * beta**-0.5, beta, 0.5) == ("above_u0", beta**-0.5)
    label, scale = classify_region(0.5, -0.5, beta, 0.5)
    assert label == "negative_nu"
    assert scale == pytest.approx(np.log(beta) / (beta * 0.5))
    assert classify_region(200.0, 0.1, beta, 0.5)[0] == "large_alpha"
    assert classify_region(1e-3, 0.1, beta, 0.5)[0] == "small_alpha"
    assert classify_region(0.5, 0.5, beta, 0.5)[0] == "quadratic"
    lbl, sc = classify_region(0.2, 0.05, beta, 0.5)
    assert lbl == "uncovered" and np.isnan(sc)


def test_region_map_flags_band_and_measures_elsewhere():
    cells = region_map("poiseuille", 7e4, [0.01, 0.7], [0.1, 0.6])
    by = {(c.alpha, c.nu): c for c in cells}
    assert by[(0.7, 0.1)].region == "unstable"
    c = by[(0.01, 0.6)]
    assert c.region == "above_u0" and c.ratio == pytest.approx(c.norm / c.scale)
    assert by[(0.01, 0.1)].region == "small_alpha"
