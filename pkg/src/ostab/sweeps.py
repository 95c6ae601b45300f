"""Resolvent sweeps, growth rates, neutral curves and scaling fits for the
Orr-Sommerfeld operator."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy import optimize

from .grid import build_grid
from .linalg import leftmost, resolvent_norms, spectrum
from .operators import SpectralParams, assemble_os
from .profiles import get_profile

__all__ = [
    "SweepRecord",
    "NeutralCurvePoint",
    "SupResult",
    "RegionCell",
    "NoBandError",
    "n_for_beta",
    "grid_for",
    "os_operator",
    "resolvent_at",
    "resolvent_line",
    "sup_resolvent",
    "convert_c",
    "lambda_from_c",
    "growth",
    "neutral_curve",
    "critical_reynolds",
    "exponent_fit",
    "classify_region",
    "region_map",
]


class NoBandError(ValueError):
    pass


def n_for_beta(beta, minimum=128):
    """Even grid size resolving the beta^{-1/4} critical-layer width."""
    n = max(minimum, math.ceil(12 * max(beta, 0.0) ** 0.25))
    return n + (n % 2)


@lru_cache(maxsize=16)
def grid_for(n):
    return build_grid(n)


def _profile(profile):
    return get_profile(profile) if isinstance(profile, str) else profile


def os_operator(profile, alpha, beta, n=None):
    profile = _profile(profile)
    n = n_for_beta(beta) if n is None else n
    return assemble_os(grid_for(n), profile, SpectralParams(alpha, beta))


@dataclass(frozen=True)
class SweepRecord:
    """Resolvent norms of the Orr-Sommerfeld operator at one lambda."""

    alpha: float
    beta: float
    lam: complex
    resolvent_norm: float
    derivative_norm: float
    flag: str = "ok"

    @property
    def total(self):
        return self.resolvent_norm + self.derivative_norm

    def sort_key(self):
        return (self.alpha, self.beta, self.lam.imag, self.lam.real)


# relative backward error below which lam counts as a computed eigenvalue
SINGULAR_TOL = 1e-12


def _record(op, alpha, beta, lam):
    norm, dnorm = resolvent_norms(op, lam)
    if np.isfinite(norm) and 1.0 / (norm * np.linalg.norm(op.at(lam), 1)) < SINGULAR_TOL:
        norm = dnorm = np.inf
    flag = "ok" if np.isfinite(norm) else "singular"
    return SweepRecord(float(alpha), float(beta), complex(lam), norm, dnorm, flag)


def resolvent_at(profile, params, n=None):
    """Weighted L^2 norms of B^{-1} and (d/dx) B^{-1} at ``params.lam``.

    A numerically singular matrix (relative backward error below
    ``SINGULAR_TOL``, i.e. lam is a computed eigenvalue) gives infinite
    norms with flag ``"singular"``.
    """
    op = os_operator(profile, params.alpha, params.beta, n)
    return _record(op, params.alpha, params.beta, params.lam)


def _line_task(args):
    profile, alpha, beta, n, lams = args
    op = os_operator(profile, alpha, beta, n)
    return [_record(op, alpha, beta, lam) for lam in lams]


def _fan_out(fun, tasks, workers):
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [fun(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fun, tasks))


def resolvent_line(profile, alpha, beta, lams, n=None, workers=1):
    """SweepRecords for every lambda in ``lams``, in deterministic order."""
    name = profile if isinstance(profile, str) else profile.name
    lams = [complex(z) for z in lams]
    chunks = max(1, min(workers or 1, len(lams)))
    parts = [lams[i::chunks] for i in range(chunks)]
    results = _fan_out(_line_task, [(name, alpha, beta, n, p) for p in parts], workers)
    records = [r for part in results for r in part]
    return sorted(records, key=SweepRecord.sort_key)


@dataclass
class SupResult:
    """Supremum of ||B^{-1}|| + ||(d/dx) B^{-1}|| along Re lam = mu_line."""

    value: float
    alpha: float
    beta: float
    mu_line: float
    nu_star: float = np.nan
    resolvent_norm: float = np.nan
    derivative_norm: float = np.nan
    unstable: bool = False
    leftmost: complex = np.nan
    interior_ratio: float = np.nan
    far_field: float = np.nan
    n: int = 0
    scan: list = field(default_factory=list, repr=False)

    @property
    def boundary_dominated(self):
        return bool(self.interior_ratio <= 1.05)

    def __float__(self):
        return float(self.value)


def sup_resolvent(profile, alpha, beta, upsilon=0.0, n=None, npts=200, nu_range=None,
                  interior=20, refine_peaks=3):
    """Supremum of the resolvent norms over the half-plane Re lam < upsilon beta^{-1/2}.

    The supremum is taken along the boundary line: a uniform scan of
    ``npts`` values of Im lam over ``[-1, U(0) + 1]``, then bounded
    golden-section refinement around the largest local maxima.
    ``interior`` points inside the half-plane check that the boundary
    dominates (``interior_ratio`` <= 1.05), and one sample at
    Im lam = +-5 gives the far-field value.  If an eigenvalue lies in the
    half-plane the result is flagged ``unstable`` with an infinite value.
    """
    prof = _profile(profile)
    n = n_for_beta(beta) if n is None else n
    op = os_operator(prof, alpha, beta, n)
    mu = upsilon * beta ** -0.5
    lo, hi = (-1.0, prof.u0 + 1.0) if nu_range is None else nu_range
    result = SupResult(np.inf, alpha, beta, mu, n=n)
    lm = leftmost(op)
    result.leftmost = lm
    if lm.real < mu:
        result.unstable = True
        return result

    def total(lam):
        a, b = resolvent_norms(op, lam)
        return a + b, a, b

    nus = np.linspace(lo, hi, npts)
    vals = np.array([total(mu + 1j * nu)[0] for nu in nus])
    result.scan = list(zip(nus.tolist(), vals.tolist()))
    # local maxima, largest first
    peaks = [j for j in range(npts)
             if (j == 0 or vals[j] >= vals[j - 1]) and (j == npts - 1 or vals[j] >= vals[j + 1])]
    peaks = sorted(peaks, key=lambda j: -vals[j])[:refine_peaks]
    best_nu, best = nus[int(np.argmax(vals))], float(np.max(vals))
    for j in peaks:
        a, b = nus[max(j - 1, 0)], nus[min(j + 1, npts - 1)]
        res = optimize.minimize_scalar(lambda nu: -total(mu + 1j * nu)[0], bounds=(a, b),
                                       method="bounded", options={"xatol": 1e-7 * (1 + abs(b))})
        if -res.fun > best:
            best, best_nu = float(-res.fun), float(res.x)
    val, a, b = total(mu + 1j * best_nu)
    result.value, result.nu_star = val, best_nu
    result.resolvent_norm, result.derivative_norm = a, b
    if interior:
        rng = np.random.default_rng(0)
        depth = beta ** (-1 / 3) * 10 ** rng.uniform(-1, 1, interior)
        inner_nu = rng.uniform(lo, hi, interior)
        inner = max(total(mu - d + 1j * nu)[0] for d, nu in zip(depth, inner_nu))
        result.interior_ratio = inner / val
    result.far_field = max(total(mu + 5j)[0], total(mu - 5j)[0])
    return result


def convert_c(params, lam=None):
    """Classical phase speed c = -i (lam + alpha^2/beta)."""
    lam = params.lam if lam is None else complex(lam)
    if params.alpha == 0:
        raise ValueError("phase speed is undefined for alpha = 0")
    return -1j * (lam + params.alpha**2 / params.beta)


def lambda_from_c(params, c):
    if params.alpha == 0:
        raise ValueError("phase speed is undefined for alpha = 0")
    return 1j * complex(c) - params.alpha**2 / params.beta


def growth(profile, alpha, reynolds, n=128):
    """Leftmost Orr-Sommerfeld eigenvalue at beta = alpha * reynolds."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    beta = alpha * reynolds
    return leftmost(os_operator(profile, alpha, beta, n))


def _neutral_fn(profile, reynolds, n, criterion):
    def f(alpha):
        beta = alpha * reynolds
        lam = growth(profile, alpha, reynolds, n_for_beta(beta) if n is None else n)
        if criterion == "classical":
            return lam.real + alpha**2 / beta
        return lam.real
    return f


@dataclass(frozen=True)
class NeutralCurvePoint:
    reynolds: float
    alpha_lower: float
    alpha_upper: float

    @property
    def has_band(self):
        return bool(np.isfinite(self.alpha_lower) and np.isfinite(self.alpha_upper))


def _band_task(args):
    profile, reynolds, n, alpha_range, npts, tol, criterion = args
    f = _neutral_fn(profile, reynolds, n, criterion)
    alphas = np.linspace(alpha_range[0], alpha_range[1], npts)
    vals = np.array([f(a) for a in alphas])
    neg = vals < 0
    if not neg.any():
        return NeutralCurvePoint(reynolds, np.nan, np.nan)
    first, last = np.flatnonzero(neg)[[0, -1]]
    lower = upper = np.nan
    if first > 0:
        lower = optimize.brentq(f, alphas[first - 1], alphas[first], xtol=tol)
    if last < npts - 1:
        upper = optimize.brentq(f, alphas[last], alphas[last + 1], xtol=tol)
    return NeutralCurvePoint(reynolds, lower, upper)


def neutral_curve(profile, reynolds_list, n=None, alpha_range=(0.1, 2.5), npts=40,
                  tol=1e-4, criterion="paper", workers=1):
    """Endpoints of the unstable alpha-band at each Reynolds number.

    ``criterion="paper"`` locates the sign change of Re(leftmost lam);
    ``"classical"`` that of Re lam + alpha^2/beta (zero imaginary part of
    the classical phase speed).  An R without a band gives NaN endpoints.
    """
    name = profile if isinstance(profile, str) else profile.name
    tasks = [(name, float(r), n, alpha_range, npts, tol, criterion) for r in reynolds_list]
    return _fan_out(_band_task, tasks, workers)


def neutral_band(profile, reynolds, **kw):
    point = neutral_curve(profile, [reynolds], **kw)[0]
    if not point.has_band:
        raise NoBandError(f"no unstable band at R = {reynolds}")
    return point


def critical_reynolds(profile="poiseuille", n=128, criterion="classical",
                      alpha_bracket=(0.9, 1.15), r_start=5000.0):
    """Minimum over alpha of the neutral Reynolds number.

    For each alpha the neutral R solves the criterion by Brent's method;
    the minimum over alpha is found by bounded golden-section search.
    Returns a dict with ``R_c``, ``alpha_c``, ``c_c``, ``lam`` and the
    final criterion residual.
    """
    prof = _profile(profile)

    def crit(alpha, r):
        lam = growth(prof, alpha, r, n)
        return lam.real + (alpha / r if criterion == "classical" else 0.0)

    def neutral_r(alpha):
        r0 = r_start
        v0 = crit(alpha, r0)
        if v0 < 0:
            raise ValueError(f"unstable already at R = {r0}")
        r1 = r0
        while True:
            r1 *= 1.5
            v1 = crit(alpha, r1)
            if v1 < 0:
                break
            r0, v0 = r1, v1
            if r1 > 1e9:
                raise NoBandError(f"no neutral point for alpha = {alpha}")
        return optimize.brentq(lambda r: crit(alpha, r), r0, r1, xtol=1e-9, rtol=1e-13)

    res = optimize.minimize_scalar(neutral_r, bounds=alpha_bracket, method="bounded",
                                   options={"xatol": 1e-6})
    alpha_c = float(res.x)
    r_c = float(res.fun)
    lam = growth(prof, alpha_c, r_c, n)
    params = SpectralParams.from_reynolds(alpha_c, r_c, lam)
    residual = lam.real + (alpha_c / r_c if criterion == "classical" else 0.0)
    return {"R_c": r_c, "alpha_c": alpha_c, "c_c": convert_c(params), "lam": lam,
            "residual": residual, "criterion": criterion, "converged": bool(res.success)}


def exponent_fit(pairs):
    """Least-squares slope of log(value) against log(beta).

    Returns a dict with ``slope``, ``intercept`` and ``r2``.
    """
    pairs = list(pairs)
    if len(pairs) < 3:
        raise ValueError("exponent_fit needs at least 3 points")
    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise ValueError("exponent_fit needs positive finite values")
    if len(np.unique(x)) < len(x):
        raise ValueError("exponent_fit needs distinct abscissae")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    fit = slope * lx + intercept
    ss_res = float(np.sum((ly - fit) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(slope), "intercept": float(intercept), "r2": r2}


@dataclass(frozen=True)
class RegionCell:
    alpha: float
    nu: float
    region: str
    scale: float
    norm: float = np.nan
    ratio: float = np.nan
    norm_shifted: float = np.nan
    ratio_shifted: float = np.nan


_MARGIN = 10.0


def classify_region(alpha, nu, beta, u0, mu=0.0, delta=0.05):
    """Parameter region of (alpha, nu) and its constant-free resolvent scale.

    "Much larger/smaller" is read with a factor 10 margin and "comparable"
    with the same factor.  Returns ``(label, scale)``; the label
    ``"uncovered"`` has a NaN scale.
    """
    lb = math.log(beta)
    big_alpha = beta ** (1 / 3)
    if alpha >= big_alpha:
        return "large_alpha", beta ** (-5 / 6)
    if nu <= -_MARGIN * beta ** (-1 / 3):
        return "negative_nu", lb / (beta * abs(nu))
    if nu >= u0 + _MARGIN * beta ** -0.5:
        return "above_u0", beta ** -0.5
    if abs(u0 - nu) < _MARGIN * beta ** -0.5:
        return "quadratic", beta ** (-3 / 8) / max(1.0, abs(mu * beta) ** 0.25)
    if alpha <= beta ** (-1 / 6) / _MARGIN and abs(nu) < u0 / 2:
        return "small_alpha", beta ** (-2 / 3)
    if u0 / 4 <= nu <= u0 - _MARGIN * beta ** -0.5 and alpha <= big_alpha / _MARGIN:
        return "nearly_quadratic", beta ** -0.5 * lb
    if alpha >= beta ** (-1 / 10 + delta / 2) and alpha <= 1.0 and abs(nu) <= beta ** (-1 / 5 + delta):
        return "intermediate_small_nu", beta ** (-1 / 2 + delta)
    if alpha <= 1.0 and beta ** (-1 / 5 + delta) <= nu < u0 / 4:
        return "right_curve", beta ** (-1 / 2 + delta) / nu
    if 1.0 <= alpha <= big_alpha / _MARGIN and abs(nu) <= u0 / 2:
        return "intermediate_alpha", beta ** (-5 / 6)
    return "uncovered", np.nan


def region_map(profile, beta, alpha_grid, nu_grid, n=None, upsilon=0.0):
    """Measured resolvent norms over an (alpha, nu) grid divided by region scales.

    Each cell evaluates ||B^{-1}|| + ||(d/dx) B^{-1}|| at lam = i nu and at
    lam = upsilon beta^{-1/2} + i nu.  Cells at an alpha with an
    eigenvalue in the left half-plane are labeled ``"unstable"``.
    """
    prof = _profile(profile)
    mu = upsilon * beta ** -0.5
    cells = []
    for alpha in alpha_grid:
        op = os_operator(prof, alpha, beta, n)
        unstable = leftmost(op).real < mu
        for nu in nu_grid:
            label, scale = classify_region(alpha, nu, beta, prof.u0, mu)
            if unstable:
                cells.append(RegionCell(float(alpha), float(nu), "unstable", np.nan))
                continue
            a, b = resolvent_norms(op, 1j * nu)
            norm = a + b
            if mu != 0:
                a2, b2 = resolvent_norms(op, mu + 1j * nu)
                shifted = a2 + b2
            else:
                shifted = norm
            cells.append(RegionCell(float(alpha), float(nu), label, scale, norm, norm / scale,
                                    shifted, shifted / scale))
    return cells
