"""Complex Airy function, its tail integral, and Airy boundary-layer profiles.

``airy_ai`` evaluates through ``scipy.special`` (exponent-scaled where
needed).  The Maclaurin series and the large-argument expansion with
its connection formula are kept here as independent evaluators; the
tests cross-check all three.

The boundary layer near x = 1 uses

    xi(x) = beta^{1/3} e^{-i pi/6} ((1 - x) - i lam)

and the tail integral T(s) = int_s^inf Ai, taken along s + t, t >= 0.
With it A0(z) = T(e^{i pi/6} z), the conjugated normalization in the
boundary-layer profile is T(xi(1)), and every quotient of tiny numbers is
formed from exponent-scaled pieces.
"""
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate, special

__all__ = [
    "AI0",
    "AIP0",
    "DomainError",
    "BoundaryLayerParams",
    "airy_ai",
    "airy_series",
    "airy_asymptotic",
    "ai_tail",
    "a0",
    "a0_zeros",
    "theta1r",
    "chi",
    "psi_tilde",
    "psi",
    "psi_hat",
    "psi_tilde_integral",
    "bound_check_psi",
]

AI0 = 0.35502805388781723926
AIP0 = -0.25881940379280679840
ROT = np.exp(-1j * np.pi / 6)


class DomainError(ValueError):
    pass


def _zeta(z):
    """2/3 z^{3/2}, principal branch."""
    return (2.0 / 3.0) * np.asarray(z, dtype=complex) ** 1.5


def airy_ai(z, derivative=False, scaled=False):
    """Ai(z) (or Ai'(z)) for complex z.

    With ``scaled=True`` returns the value multiplied by exp(2/3 z^{3/2}),
    which stays representable far into the decaying sector.
    """
    z = np.asarray(z, dtype=complex)
    k = 1 if derivative else 0
    if scaled:
        return special.airye(z)[k]
    return special.airy(z)[k]


def _taylor_coeffs(order):
    c = np.zeros(order + 1)
    c[0], c[1] = AI0, AIP0
    for m in range(order - 2):
        c[m + 3] = c[m] / ((m + 2) * (m + 3))
    return c


_TAYLOR = _taylor_coeffs(240)


def airy_series(z, derivative=False, dps=40, nterms=240):
    """Maclaurin series of Ai (or Ai'), suitable for |z| <= 6.5.

    Summed in ``dps``-digit arithmetic: in the decaying sector the terms
    are ~e^{2|zeta|} times larger than the sum.
    """
    zs = np.asarray(z, dtype=complex)
    out = np.empty(zs.shape, dtype=complex)
    with mpmath.workdps(dps):
        c = [1 / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3)),
             -1 / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3)),
             mpmath.mpf(0)]
        for m in range(3, nterms + 2):
            c.append(c[m - 3] / ((m - 1) * m))
        if derivative:
            c = [(m + 1) * c[m + 1] for m in range(nterms)]
        else:
            c = c[:nterms]
        for idx, zi in np.ndenumerate(zs):
            out[idx] = complex(mpmath.polyval(c[::-1], mpmath.mpc(zi.real, zi.imag)))
    return out if out.shape else complex(out)


def _ai_series_integral(z):
    """int_0^z Ai by termwise integration of the Maclaurin series."""
    z = np.asarray(z, dtype=complex)
    c = np.concatenate([[0.0], _TAYLOR / np.arange(1, len(_TAYLOR) + 1)])
    return np.polynomial.polynomial.polyval(z, c)


def _asym_terms(nterms):
    u = [1.0]
    v = [1.0]
    for k in range(1, nterms):
        uk = u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        u.append(uk)
        v.append(-(6 * k + 1) / (6 * k - 1) * uk)
    return np.array(u), np.array(v)


_U_ASYM, _V_ASYM = _asym_terms(40)


def _asym_principal(z, derivative):
    z = complex(z)
    zeta = _zeta(z)
    sign = 1.0
    total = 0j
    coeffs = _V_ASYM if derivative else _U_ASYM
    last = np.inf
    for k, ck in enumerate(coeffs):
        term = sign * ck / zeta**k
        if abs(term) > last:  # optimal truncation
            break
        total += term
        last = abs(term)
        sign = -sign
    pref = np.exp(-zeta) / (2 * np.sqrt(np.pi))
    if derivative:
        return -pref * z**0.25 * total
    return pref * z**-0.25 * total


def airy_asymptotic(z, derivative=False):
    """Large-|z| expansion of Ai (or Ai').

    The plain expansion is used for |arg z| <= 2 pi/3; beyond that the
    connection formula Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z), w = e^{2 pi i/3},
    moves both evaluations back into the sector |arg| <= pi/3.
    """
    out = []
    for zi in np.atleast_1d(np.asarray(z, dtype=complex)).ravel():
        if abs(np.angle(zi)) <= 2 * np.pi / 3:
            out.append(_asym_principal(zi, derivative))
        else:
            w = np.exp(2j * np.pi / 3)
            # Ai'(z) = -w^2 Ai'(w z) - w^4 Ai'(w^2 z) by the chain rule
            if derivative:
                val = -w**2 * _asym_principal(w * zi, True) - w**4 * _asym_principal(w * w * zi, True)
            else:
                val = -w * _asym_principal(w * zi, False) - w * w * _asym_principal(w * w * zi, False)
            out.append(val)
    res = np.array(out).reshape(np.shape(z))
    return res if res.shape else complex(res)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _tail_scaled(s0):
    """Return (T(s0) * exp(zeta(s0)), zeta(s0)) with T(s) = int_s^inf Ai.

    Composite Gauss-Legendre along s0 + t with panels no longer than the
    local oscillation/decay length 1/|s|^{1/2}.
    """
    s0 = complex(s0)
    z0 = complex(_zeta(s0))
    if abs(s0) <= 1.5:
        t = 1.0 / 3.0 - complex(_ai_series_integral(s0))
        return t * np.exp(z0), z0
    edges = [0.0]
    while True:
        t = edges[-1]
        if (complex(_zeta(s0 + t)) - z0).real > 42 or t > 1e4:
            break
        edges.append(t + 0.75 / max(1.0, abs(s0 + t) ** 0.5))
    edges = np.asarray(edges)
    lo, hi = edges[:-1, None], edges[1:, None]
    tt = 0.5 * (lo + hi) + 0.5 * (hi - lo) * _GL_X[None, :]
    s = s0 + tt
    vals = special.airye(s)[0] * np.exp(z0 - _zeta(s))
    total = np.sum(0.5 * (hi - lo) * _GL_W[None, :] * vals)
    return complex(total), z0


def ai_tail(s0, scaled=False):
    """T(s0) = int_{s0}^{inf} Ai(s) ds along the horizontal ray."""
    t, z0 = _tail_scaled(s0)
    if scaled:
        return t
    return t * np.exp(-z0)


def a0(z, scaled=False):
    """Generalized Airy function A0(z) = e^{i pi/6} int_z^inf Ai(e^{i pi/6} t) dt.

    With ``scaled=True`` the value is multiplied by exp(2/3 w^{3/2}),
    w = e^{i pi/6} z.
    """
    return ai_tail(np.exp(1j * np.pi / 6) * complex(z), scaled=scaled)


def _a0_iz(z):
    return a0(1j * z)


def _a0_iz_prime(z):
    # d/dz A0(i z) = -i e^{i pi/6} Ai(e^{i pi/6} i z)
    w = np.exp(1j * np.pi / 6)
    return -1j * w * complex(airy_ai(w * 1j * z))


def _a0_iz_along(path):
    """A0(i z) at the vertices of a polyline, by integrating its derivative.

    Only the first vertex needs the tail integral; each segment adds an
    8-point Gauss-Legendre estimate of int A0'(iz) dz.
    """
    path = np.asarray(path, dtype=complex)
    x, w = np.polynomial.legendre.leggauss(8)
    za, zb = path[:-1, None], path[1:, None]
    nodes = 0.5 * (za + zb) + 0.5 * (zb - za) * x[None, :]
    rot = np.exp(1j * np.pi / 6)
    g = -1j * rot * special.airy(rot * 1j * nodes)[0]
    incr = np.sum(0.5 * (zb - za) * w[None, :] * g, axis=1)
    return _a0_iz(path[0]) + np.concatenate([[0], np.cumsum(incr)])


def _winding(box, npts=400):
    x0, x1, y0, y1 = box
    t = np.linspace(0, 1, npts, endpoint=False)
    path = np.concatenate([
        x0 + (x1 - x0) * t + 1j * y0,
        x1 + 1j * (y0 + (y1 - y0) * t),
        x1 - (x1 - x0) * t + 1j * y1,
        x0 + 1j * (y1 - (y1 - y0) * t),
        [x0 + 1j * y0],
    ])
    vals = _a0_iz_along(path)
    phase = np.unwrap(np.angle(vals))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi)))


def _newton(fun, dfun, z, tol=1e-13, maxiter=60):
    for _ in range(maxiter):
        step = fun(z) / dfun(z)
        z = z - step
        if abs(step) < tol * max(1, abs(z)):
            return z, True
    return z, False


def a0_zeros(box=(0.0, 6.0, -1.0, 8.0), npts=400, min_size=0.05):
    """Zeros of z -> A0(i z) inside ``box = (re_lo, re_hi, im_lo, im_hi)``.

    Boxes are bisected until the argument principle reports a single zero,
    which is then polished by Newton's method.

    Raises
    ------
    RuntimeError
        If Newton hits do not match the box count.
    """
    total = _winding(box, npts)
    zeros = []
    stack = [box]
    while stack:
        b = stack.pop()
        count = _winding(b, npts)
        if count <= 0:
            continue
        x0, x1, y0, y1 = b
        if count == 1 or max(x1 - x0, y1 - y0) < min_size:
            z, ok = _newton(_a0_iz, _a0_iz_prime, complex((x0 + x1) / 2, (y0 + y1) / 2))
            if ok and x0 - 1e-9 <= z.real <= x1 + 1e-9 and y0 - 1e-9 <= z.imag <= y1 + 1e-9:
                zeros.append(z)
                continue
            if max(x1 - x0, y1 - y0) < min_size:
                continue
        if x1 - x0 >= y1 - y0:
            xm = (x0 + x1) / 2
            stack += [(x0, xm, y0, y1), (xm, x1, y0, y1)]
        else:
            ym = (y0 + y1) / 2
            stack += [(x0, x1, y0, ym), (x0, x1, ym, y1)]
    zeros = sorted(zeros, key=abs)
    if len(zeros) != total:
        raise RuntimeError(f"argument principle counts {total} zeros, Newton found {len(zeros)}")
    return zeros


def theta1r(nzeros=8):
    """Smallest real part among the first zeros of z -> A0(i z)."""
    zeros = a0_zeros()[:nzeros]
    if not zeros:
        raise RuntimeError("no zeros of A0(iz) found")
    value = min(z.real for z in zeros)
    if value <= 0:
        raise RuntimeError(f"expected a positive infimum, got {value}")
    return float(value)


_THETA1R = None


def _theta1r_cached():
    global _THETA1R
    if _THETA1R is None:
        _THETA1R = theta1r()
    return _THETA1R


def chi(t):
    """Smooth cutoff: 1 for t <= 1/2, 0 for t >= 3/4, C-infinity in between."""
    t = np.asarray(t, dtype=float)

    def h(s):
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = np.exp(-1.0 / s[pos])
        return out

    a = h(0.75 - t)
    b = h(t - 0.5)
    return a / (a + b)


@dataclass(frozen=True)
class BoundaryLayerParams:
    lam: complex
    beta: float
    cutoff: tuple = (0.5, 0.75)

    @property
    def lambda_beta(self):
        return 1.0 + abs(self.lam) * self.beta ** (1 / 3)


def _check_admissible(lam, beta):
    lam = complex(lam)
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    limit = (_theta1r_cached() - 1e-3) * beta ** (-1 / 3)
    if lam.real >= limit:
        raise DomainError(
            f"Re(lambda) = {lam.real:.6g} is not below the admissibility limit {limit:.6g}")
    return lam


def _xi(x, lam, beta):
    x = np.asarray(x, dtype=float)
    return beta ** (1 / 3) * ROT * ((1 - x) - 1j * lam)


def psi_tilde(x, lam, beta, derivative=False):
    """Decaying boundary-layer solution normalized to integrate to beta^{-1/3}."""
    lam = _check_admissible(lam, beta)
    xi = _xi(x, lam, beta)
    xi1 = complex(_xi(1.0, lam, beta))
    tail, z1 = _tail_scaled(xi1)
    ai = airy_ai(xi, derivative=derivative, scaled=True)
    val = ROT * ai * np.exp(z1 - _zeta(xi)) / tail
    if derivative:
        val = val * (-(beta ** (1 / 3)) * ROT)
    return val


def psi(x, lam, beta):
    """psi_tilde(x) * chi(1 - x)."""
    x = np.asarray(x, dtype=float)
    return psi_tilde(x, lam, beta) * chi(1 - x)


def psi_hat(x, lam, beta):
    """Ai(xi(x)) / Ai(xi(1)) * chi(1 - x); equals 1 at x = 1."""
    lam = _check_admissible(lam, beta)
    x = np.asarray(x, dtype=float)
    xi = _xi(x, lam, beta)
    xi1 = complex(_xi(1.0, lam, beta))
    num = airy_ai(xi, scaled=True) * np.exp(_zeta(xi1) - _zeta(xi))
    den = complex(airy_ai(xi1, scaled=True))
    return num / den * chi(1 - x)


def psi_tilde_integral(lam, beta, npts=400):
    """int_{-inf}^1 psi_tilde by Gauss-Legendre on a truncated interval.

    The lower limit is pushed out until the integrand drops below 1e-16
    of its maximum.
    """
    lam = _check_admissible(lam, beta)
    scale = beta ** (-1 / 3)
    xs = 1 - scale * np.linspace(0, 400, 4001)
    vals = np.abs(psi_tilde(xs, lam, beta))
    peak = vals.max()
    above = np.flatnonzero(vals > 1e-16 * peak)
    lower = xs[above[-1] + 1] if above[-1] + 1 < len(xs) else xs[-1]
    nodes, weights = np.polynomial.legendre.leggauss(npts)
    # split to follow the boundary-layer scale
    edges = np.linspace(lower, 1.0, 9)
    total = 0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        xm = 0.5 * (hi + lo) + 0.5 * (hi - lo) * nodes
        total += 0.5 * (hi - lo) * np.sum(weights * psi_tilde(xm, lam, beta))
    return total


def bound_check_psi(lam, beta, s=0.0, norm="l1", npts=2000):
    """Measured norm of (1-x)^s psi_hat against its constant-free scale.

    ``norm`` is ``"l1"`` (scale lambda_beta^{-(s+1)/2} beta^{-(s+1)/3}),
    ``"sup"`` (scale lambda_beta^{-s/2} beta^{-s/3}) or ``"endpoint"``
    (|psi_tilde(1)| against lambda_beta^{1/2}).  Returns a dict with
    ``lhs``, ``rhs_scale`` and ``ratio``.
    """
    if not 0 <= s <= 3:
        raise ValueError(f"s must lie in [0, 3], got {s}")
    lam = complex(lam)
    lb = 1 + abs(lam) * beta ** (1 / 3)
    if norm == "endpoint":
        lhs = float(abs(psi_tilde(1.0, lam, beta)))
        rhs = lb**0.5
    else:
        # psi_hat is supported on [1/4, 1]; resolve the layer with a graded mesh
        t = np.linspace(0, 1, npts) ** 3 * 0.75
        x = 1 - t
        vals = np.abs(t**s * psi_hat(x, lam, beta))
        if norm == "l1":
            lhs = float(integrate.trapezoid(vals, t))
            rhs = lb ** (-(s + 1) / 2) * beta ** (-(s + 1) / 3)
        elif norm == "sup":
            lhs = float(vals.max())
            rhs = lb ** (-s / 2) * beta ** (-s / 3)
        else:
            raise ValueError(f"unknown norm {norm!r}")
    return {"lam": lam, "beta": beta, "s": s, "norm": norm, "lhs": lhs,
            "rhs_scale": rhs, "ratio": lhs / rhs}
