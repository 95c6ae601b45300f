"""Chebyshev-Gauss-Lobatto collocation on the unit interval (0, 1).

Nodes are ordered from x = 1 down to x = 0, matching the usual
``cos(j*pi/n)`` ordering on [-1, 1].
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

__all__ = ["ChebGrid", "build_grid", "chebdif", "clencurt", "integrate", "norms"]


def chebdif(npts, order):
    """Chebyshev differentiation matrices on [-1, 1].

    Weideman-Reddy construction: trigonometric identities for the node
    differences, flipping for symmetry, the recursion
    ``D_l = l * Z * (C * diag(D_{l-1}) - D_{l-1})`` for higher orders and
    the negative-sum trick on the diagonal.

    Parameters
    ----------
    npts : int
        Number of nodes (polynomial degree + 1).
    order : int
        Highest derivative order.

    Returns
    -------
    x : ndarray, shape (npts,)
        Nodes cos(j*pi/(npts-1)), descending.
    dm : ndarray, shape (order, npts, npts)
        ``dm[l-1]`` is the l-th derivative matrix.
    """
    n = npts
    n1 = n // 2
    n2 = (n + 1) // 2
    k = np.arange(n)
    th = k * np.pi / (n - 1)
    x = np.sin(np.pi * np.arange(n - 1, -n, -2) / (2 * (n - 1)))

    t = np.tile(th / 2, (n, 1)).T
    dx = 2 * np.sin(t.T + t) * np.sin(t.T - t)
    dx = np.vstack([dx[:n1, :], -np.flipud(np.fliplr(dx[:n2, :]))])
    dx[k, k] = 1.0

    c = toeplitz((-1.0) ** k)
    c[0, :] *= 2
    c[-1, :] *= 2
    c[:, 0] *= 0.5
    c[:, -1] *= 0.5

    z = 1.0 / dx
    z[k, k] = 0.0

    d = np.eye(n)
    dm = np.empty((order, n, n))
    for ell in range(order):
        d = (ell + 1) * z * (c * np.tile(np.diag(d), (n, 1)).T - d)
        d[k, k] = -d.sum(axis=1)
        dm[ell] = d
    return x, dm


def clencurt(n):
    """Clenshaw-Curtis nodes and weights on [-1, 1] for n+1 points."""
    theta = np.pi * np.arange(n + 1) / n
    x = np.cos(theta)
    w = np.zeros(n + 1)
    ii = np.arange(1, n)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for k in range(1, n // 2):
            v -= 2 * np.cos(2 * k * theta[ii]) / (4 * k**2 - 1)
        v -= np.cos(n * theta[ii]) / (n**2 - 1)
    else:
        w[0] = w[n] = 1.0 / n**2
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2 * np.cos(2 * k * theta[ii]) / (4 * k**2 - 1)
    w[ii] = 2 * v / n
    return x, w


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ChebGrid:
    """Collocation grid on (0, 1).

    ``diff[k]`` is the k-th derivative matrix for k = 0..4 (``diff[0]`` is
    the identity), ``weights`` are Clenshaw-Curtis weights summing to 1.
    """

    n: int
    nodes: np.ndarray
    diff: tuple
    weights: np.ndarray

    @property
    def size(self):
        return self.n + 1

    @property
    def d1(self):
        return self.diff[1]

    @property
    def d2(self):
        return self.diff[2]

    @property
    def d3(self):
        return self.diff[3]

    @property
    def d4(self):
        return self.diff[4]

    @property
    def weight_sqrt(self):
        return np.sqrt(self.weights)

    def index_of(self, x):
        """Index of the node closest to ``x``."""
        return int(np.argmin(np.abs(self.nodes - x)))


def build_grid(n):
    """Build the (n+1)-point Chebyshev-Gauss-Lobatto grid on (0, 1).

    ``n`` must be even and at least 8 so that x = 1/2 is a node.
    """
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 8 or n % 2:
        raise ValueError(f"n must be even and >= 8, got {n}")
    x, dm = chebdif(n + 1, 4)
    _, w = clencurt(n)
    nodes = (1.0 + x) / 2
    nodes[0], nodes[-1], nodes[n // 2] = 1.0, 0.0, 0.5
    diffs = [np.eye(n + 1)] + [dm[k - 1] * 2.0**k for k in range(1, 5)]
    return ChebGrid(
        n=n,
        nodes=_frozen(nodes),
        diff=tuple(_frozen(d) for d in diffs),
        weights=_frozen(w / 2),
    )


def _check_len(grid, values):
    values = np.asarray(values)
    if values.shape != (grid.size,):
        raise ValueError(
            f"expected {grid.size} samples, got array of shape {values.shape}"
        )
    return values


def integrate(grid, values):
    """Clenshaw-Curtis estimate of the integral of ``values`` over (0, 1)."""
    values = _check_len(grid, values)
    return grid.weights @ values


def lp_norm(grid, values, p):
    values = _check_len(grid, values)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if np.isinf(p):
        return float(np.max(np.abs(values)))
    return float((grid.weights @ np.abs(values) ** p) ** (1.0 / p))


def norms(grid, values, p=2):
    """Quadrature norms of grid samples.

    Returns a dict with keys ``l1``, ``l2``, ``lp`` (for the given ``p``),
    ``sup`` and ``sobolev12`` (the W^{1,2} norm using ``diff[1]``).
    """
    values = _check_len(grid, values)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    l2 = lp_norm(grid, values, 2)
    dl2 = lp_norm(grid, grid.d1 @ values, 2)
    return {
        "l1": lp_norm(grid, values, 1),
        "l2": l2,
        "lp": lp_norm(grid, values, p),
        "sup": float(np.max(np.abs(values))),
        "sobolev12": float(np.hypot(l2, dl2)),
    }
