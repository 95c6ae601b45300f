"""Dense linear algebra: solves, extreme singular values, pencil spectra."""
from dataclasses import dataclass
import warnings

import numpy as np
import scipy.linalg as sl

__all__ = [
    "SingularMatrixError",
    "AdjointMismatchError",
    "SpectrumResult",
    "Factorization",
    "lu_solve",
    "sigma_min",
    "op_norm",
    "spectrum",
    "leftmost",
    "solve_operator",
    "solution_map",
    "resolvent_norms",
]


class SingularMatrixError(np.linalg.LinAlgError):
    pass


class AdjointMismatchError(ValueError):
    pass


PIVOT_TOL = 1e-300


class Factorization:
    """LU factors of a square matrix with refined solves for A and A^H."""

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {self.matrix.shape}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sl.LinAlgWarning)
            self.lu = sl.lu_factor(self.matrix, check_finite=True)
        piv = np.abs(np.diag(self.lu[0]))
        if piv.size and piv.min() <= PIVOT_TOL:
            raise SingularMatrixError("matrix is singular to working precision")
        self.pivot_ratio = float(piv.min() / piv.max()) if piv.size else 1.0

    def solve(self, rhs, adjoint=False, refine=True):
        trans = 2 if adjoint else 0
        mat = self.matrix.conj().T if adjoint else self.matrix
        x = sl.lu_solve(self.lu, rhs, trans=trans)
        if refine:
            r = rhs - mat @ x
            x = x + sl.lu_solve(self.lu, r, trans=trans)
        return x


def lu_solve(matrix, rhs, adjoint=False):
    """Solve ``A x = b`` (or ``A^H x = b``) with one step of iterative refinement.

    Raises
    ------
    SingularMatrixError
        If a pivot underflows.
    """
    return Factorization(matrix).solve(np.asarray(rhs), adjoint=adjoint)


def _orth(x):
    q, _ = np.linalg.qr(x)
    return q


def _subspace_top(apply, apply_h, dim, rng, tol, maxiter, block=None):
    """Largest singular value of a map by block power iteration with Rayleigh-Ritz."""
    k = min(dim, block or 4)
    x = _orth(rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k)))
    est = None
    for it in range(1, maxiter + 1):
        y = apply(x)
        s = np.linalg.svd(y, compute_uv=False)[0]
        if est is not None and abs(s - est) <= tol * s:
            return float(s), True, it
        est = s
        x = _orth(apply_h(y))
    return float(est), False, maxiter


def sigma_min(matrix, weight_sqrt=None, tol=1e-12, maxiter=500, seed=0, full_output=False):
    """Smallest singular value of ``W^{1/2} A W^{-1/2}``.

    Inverse subspace iteration on the LU factors, alternating solves with
    A and A^H.  Returns 0 if the factorization fails.  With
    ``full_output`` returns ``(value, converged, iterations)``.
    """
    a = np.asarray(matrix)
    dim = a.shape[0]
    ws = np.ones(dim) if weight_sqrt is None else np.asarray(weight_sqrt, dtype=float)
    try:
        fac = Factorization(a)
    except SingularMatrixError:
        return (0.0, True, 0) if full_output else 0.0

    def inv(x):
        return ws[:, None] * fac.solve(x / ws[:, None])

    def inv_h(x):
        return fac.solve(x * ws[:, None], adjoint=True) / ws[:, None]

    rng = np.random.default_rng(seed)
    top, ok, its = _subspace_top(inv, inv_h, dim, rng, tol, maxiter)
    value = 1.0 / top
    if not ok:
        warnings.warn(f"sigma_min did not converge in {maxiter} iterations", RuntimeWarning)
    return (value, ok, its) if full_output else value


def op_norm(apply, apply_adjoint, dim, weight_sqrt=None, tol=1e-6, maxiter=500, seed=0,
            check_adjoint=True):
    """Largest singular value of a square linear map on a weighted space.

    ``apply_adjoint`` must be the adjoint with respect to the inner
    product ``sum(w * conj(x) * y)``; this is checked on three random
    pairs before iterating.
    """
    ws = np.ones(dim) if weight_sqrt is None else np.asarray(weight_sqrt, dtype=float)
    w = ws**2
    rng = np.random.default_rng(seed)

    def as_block(fun):
        def g(x):
            out = np.column_stack([np.asarray(fun(x[:, j]), dtype=complex)
                                   for j in range(x.shape[1])])
            return out
        return g

    fa, fh = as_block(apply), as_block(apply_adjoint)
    if check_adjoint:
        for _ in range(3):
            x = rng.standard_normal((dim, 1)) + 1j * rng.standard_normal((dim, 1))
            y = rng.standard_normal((dim, 1)) + 1j * rng.standard_normal((dim, 1))
            ax, hy = fa(x), fh(y)
            lhs = np.sum(w[:, None] * np.conj(ax) * y)
            rhs = np.sum(w[:, None] * np.conj(x) * hy)
            scale = np.sqrt(np.sum(w[:, None] * abs(ax) ** 2) * np.sum(w[:, None] * abs(y) ** 2))
            if abs(lhs - rhs) > 1e-8 * max(scale, 1e-300):
                raise AdjointMismatchError("apply_adjoint is not the adjoint of apply")

    def t(x):
        return ws[:, None] * fa(x / ws[:, None])

    def th(x):
        return ws[:, None] * fh(x / ws[:, None])

    value, _, _ = _subspace_top(t, th, dim, rng, tol, maxiter)
    return value


@dataclass
class SpectrumResult:
    """Finite pencil eigenvalues sorted by real part."""

    eigenvalues: np.ndarray
    residuals: np.ndarray
    infinite_filtered: int
    rejected: int
    shift: complex
    vectors: np.ndarray = None
    converged: bool = True

    def __len__(self):
        return len(self.eigenvalues)


def _default_shift(op):
    return getattr(op, "shift_hint", None) or 0j


def _factor_shifted(a, m, s):
    for _ in range(5):
        try:
            fac = Factorization(a - s * m)
            if fac.pivot_ratio > 1e-14:
                return fac, s
        except SingularMatrixError:
            pass
        s = s + 1e-3 * (1 + abs(s))
    return Factorization(a - s * m), s


def spectrum(op, tol=1e-8, shift=None, vectors=True, max_abs=None):
    """Finite eigenvalues of the pencil ``a x = lam m x``.

    The pencil is shift-inverted at ``shift`` and the standard problem
    ``(a - s m)^{-1} m`` is solved densely.  Eigenvalues whose inverse is
    negligible are counted as infinite; with ``vectors=True`` the relative
    backward error of every eigenpair is computed and pairs above ``tol``
    are rejected.

    ``op`` may be a ``DiscreteOperator`` or a pair ``(a, m)``.
    """
    if isinstance(op, tuple):
        a, m = (np.asarray(v, dtype=complex) for v in op)
    else:
        if op.m is None:
            raise ValueError("spectrum needs a pencil with a mass matrix")
        a, m = op.a, op.m
    s = complex(_default_shift(op) if shift is None else shift)
    fac, s = _factor_shifted(a, m, s)
    k = fac.solve(m, refine=False)
    converged = True
    try:
        if vectors:
            theta, vec = sl.eig(k, check_finite=False)
        else:
            theta, vec = sl.eigvals(k, check_finite=False), None
    except sl.LinAlgError:
        converged = False
        theta, vec = np.array([], complex), None
    if theta.size == 0:
        return SpectrumResult(np.array([], complex), np.array([]), a.shape[0], 0, s,
                              None, converged)
    big = np.max(np.abs(theta))
    finite = np.abs(theta) > 1e-10 * big
    lam = np.full(theta.shape, np.inf + 0j)
    lam[finite] = s + 1.0 / theta[finite]
    if finite.any():
        med = np.median(np.abs(lam[finite]))
        finite &= np.abs(lam) <= 1e8 * max(med, 1.0)
    if max_abs is not None:
        finite &= np.abs(lam) <= max_abs
    n_inf = int(np.count_nonzero(~finite)) if max_abs is None else int(
        np.count_nonzero(np.abs(theta) <= 1e-10 * big))
    lam = lam[finite]
    res = np.full(lam.shape, np.nan)
    rejected = 0
    if vectors:
        vec = vec[:, finite]
        na, nm = np.linalg.norm(a, 2), np.linalg.norm(m, 2)
        r = a @ vec - (m @ vec) * lam[None, :]
        res = np.linalg.norm(r, axis=0) / ((na + np.abs(lam) * nm) * np.linalg.norm(vec, axis=0))
        keep = res <= tol
        rejected = int(np.count_nonzero(~keep))
        lam, res, vec = lam[keep], res[keep], vec[:, keep]
    order = np.lexsort((lam.imag, lam.real))
    return SpectrumResult(lam[order], res[order], n_inf, rejected, s,
                          None if vec is None else vec[:, order], converged)


def leftmost(op, shift=None, spec=None, refine=True, max_abs=1e4):
    """Pencil eigenvalue with the smallest real part.

    Only eigenvalues with ``|lam| <= max_abs`` are candidates; this drops
    the huge finite values that discretized infinite eigenvalues can turn
    into.  The candidate is polished by inverse iteration and one
    Rayleigh-quotient step; the polished value is kept only if its
    residual is smaller.
    """
    if spec is None:
        spec = spectrum(op, shift=shift, vectors=False)
    lams = spec.eigenvalues
    if max_abs is not None:
        lams = lams[np.abs(lams) <= max_abs]
    if len(lams) == 0:
        raise ValueError("pencil has no finite eigenvalues in range")
    lam = complex(lams[0])
    if not refine:
        return lam
    if isinstance(op, tuple):
        a, m = (np.asarray(v, dtype=complex) for v in op)
    else:
        a, m = op.a, op.m
    scale = 1e-10 * (1 + abs(lam))
    try:
        fac = Factorization(a - (lam + scale) * m)
    except SingularMatrixError:
        return lam
    rng = np.random.default_rng(0)
    x = rng.standard_normal(a.shape[0]) + 0j
    for _ in range(2):
        x = fac.solve(m @ x, refine=False)
        x /= np.linalg.norm(x)

    def resid(mu):
        return np.linalg.norm(a @ x - mu * (m @ x))

    mx = m @ x
    denom = np.vdot(mx, mx)
    if denom == 0:
        return lam
    # least-squares quotient: minimizes ||a x - mu m x||
    mu = np.vdot(mx, a @ x) / denom
    return complex(mu) if resid(mu) < resid(lam) else lam


def solve_operator(op, lam, f, adjoint=False):
    """Solve ``(a - lam m) u = inject(f)`` and return the physical unknown."""
    fac = Factorization(op.at(lam))
    return op.extract(fac.solve(op.inject(f)))


def solution_map(op, lam, fac=None):
    """Matrix G with ``u = G f_src`` for data on ``op.source_nodes``."""
    if fac is None:
        fac = Factorization(op.at(lam))
    e = np.zeros((op.dim, len(op.source_rows)), dtype=complex)
    e[op.source_rows, np.arange(len(op.source_rows))] = 1.0
    return op.extract(fac.solve(e))


def resolvent_norms(op, lam, derivative=True):
    """Weighted L^2 norms of the solution map and of its x-derivative.

    Returns ``(norm, derivative_norm)``; ``(inf, inf)`` when ``a - lam m``
    is numerically singular.
    """
    try:
        fac = Factorization(op.at(lam))
    except SingularMatrixError:
        return np.inf, np.inf
    g = solution_map(op, lam, fac)
    ws = op.weight_sqrt
    src = ws[op.source_nodes]
    gw = ws[:, None] * g / src[None, :]
    norm = float(np.linalg.norm(gw, 2))
    dnorm = np.nan
    if derivative:
        dg = op.grid.d1 @ g
        dnorm = float(np.linalg.norm(ws[:, None] * dg / src[None, :], 2))
    return norm, dnorm
