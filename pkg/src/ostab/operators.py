"""Dense collocation matrices for the channel-flow operators on (0, 1).

Boundary conditions are imposed by replacing rows of the collocation
matrix with boundary stencils.  Pencils ``(a, m)`` are arranged so that
``a - lam * m`` is the operator at spectral parameter ``lam``.

Orr-Sommerfeld
    ``(-D^2 + i beta U - beta lam)(D^2 - alpha^2) - i beta U''`` with
    u'(0) = u'''(0) = 0 and u(1) = u'(1) = 0.
Rayleigh
    ``(U + i lam)(-D^2 + alpha^2) + U''`` with phi'(0) = 0, phi(1) = 0.
Schrodinger
    ``-D^2 + i beta U`` with u'(0) = 0 and either u(1) = 0 or <zeta, u> = 0.
    The pencil eigenvalue is ``beta * lam``.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "SpectralParams",
    "BoundaryConditionSet",
    "DiscreteOperator",
    "OS_SYMMETRIC",
    "NEUMANN_DIRICHLET",
    "RAYLEIGH_ND",
    "INTEGRAL_ZETA",
    "assemble_os",
    "assemble_rayleigh",
    "assemble_schrodinger",
    "assemble_m_u",
    "zeta_cosh",
    "in_u0",
    "in_u2",
    "in_u3",
]

OS_SYMMETRIC = "OSSymmetric"
NEUMANN_DIRICHLET = "NeumannDirichlet"
RAYLEIGH_ND = "RayleighND"
INTEGRAL_ZETA = "IntegralZeta"
_BC_KINDS = (OS_SYMMETRIC, NEUMANN_DIRICHLET, RAYLEIGH_ND, INTEGRAL_ZETA)


@dataclass(frozen=True)
class SpectralParams:
    """Wavenumber ``alpha``, ``beta = alpha * R`` and spectral parameter ``lam``."""

    alpha: float
    beta: float
    lam: complex = 0j

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.beta >= 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def mu(self):
        return self.lam.real

    @property
    def nu(self):
        return self.lam.imag

    @property
    def lambda_beta(self):
        return 1.0 + abs(self.lam) * self.beta ** (1 / 3)

    @property
    def reynolds(self):
        if self.alpha == 0:
            return np.inf
        return self.beta / self.alpha

    @classmethod
    def from_reynolds(cls, alpha, reynolds, lam=0j):
        return cls(alpha, alpha * reynolds, lam)

    def with_lambda(self, lam):
        return SpectralParams(self.alpha, self.beta, lam)


@dataclass(frozen=True, eq=False)
class BoundaryConditionSet:
    """Kind of boundary conditions plus the matrix rows they occupy."""

    kind: str
    rows: tuple = ()
    zeta: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in _BC_KINDS:
            raise ValueError(f"unknown boundary condition kind {self.kind!r}")
        if self.kind == INTEGRAL_ZETA and self.zeta is None:
            raise ValueError("IntegralZeta requires zeta samples")


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """A collocation matrix with boundary rows and norm metadata.

    ``a`` and ``m`` may be block matrices (``fields`` > 1).  The physical
    unknown always occupies the first ``grid.size`` entries of the
    solution vector; data are injected at ``source_rows``, which
    correspond to the grid nodes ``source_nodes``.
    """

    a: np.ndarray
    m: Optional[np.ndarray]
    bc: BoundaryConditionSet
    grid: object
    weight_sqrt: np.ndarray
    kind: str = ""
    fields: int = 1
    source_rows: np.ndarray = field(default=None)
    source_nodes: np.ndarray = field(default=None)
    shift_hint: complex = 0j

    @property
    def dim(self):
        return self.a.shape[0]

    def at(self, lam):
        """The matrix ``a - lam * m``."""
        if self.m is None:
            return self.a.copy()
        return self.a - complex(lam) * self.m

    def inject(self, f):
        """Right-hand side vector carrying node samples ``f`` on the source rows."""
        f = np.asarray(f)
        rhs = np.zeros((self.dim,) + f.shape[1:], dtype=complex)
        rhs[self.source_rows] = f[self.source_nodes]
        return rhs

    def extract(self, sol):
        """Physical unknown from a solution vector."""
        return sol[: self.grid.size]


def _interior(grid, rows):
    mask = np.ones(grid.size, bool)
    mask[list(rows)] = False
    return np.flatnonzero(mask)


def _profile_samples(grid, profile):
    return profile.samples(grid)


def assemble_os(grid, profile, params, formulation="block"):
    """Orr-Sommerfeld pencil for symmetric perturbations.

    Parameters
    ----------
    grid : ChebGrid
    profile : Profile
    params : SpectralParams
        Only ``alpha`` and ``beta`` are used; ``lam`` enters through
        ``DiscreteOperator.at``.
    formulation : {"block", "collocation"}
        ``"collocation"`` discretizes the fourth-order operator directly,
        replacing rows 0, 1, n-1, n with the stencils for u(1), u'(1),
        u'(0), u'''(0).  ``"block"`` (default) uses the pair
        (phi, omega = (D^2 - alpha^2) phi), which keeps the matrix well
        conditioned at large n.
    """
    if grid.size < 12:
        raise ValueError(f"grid too coarse for the fourth-order operator (n={grid.n})")
    if formulation == "block":
        return _assemble_os_block(grid, profile, params)
    if formulation != "collocation":
        raise ValueError(f"unknown formulation {formulation!r}")

    n, N = grid.n, grid.size
    a2, b = params.alpha**2, params.beta
    u, _, u2, _, _ = _profile_samples(grid, profile)
    eye = np.eye(N)
    lap = grid.d2 - a2 * eye
    a = (-grid.d2 + 1j * b * np.diag(u)) @ lap - 1j * b * np.diag(u2)
    m = (b * lap).astype(complex)
    rows = (0, 1, n - 1, n)
    stencils = (grid.diff[0][0], grid.d1[0], grid.d1[n], grid.d3[n])
    for r, s in zip(rows, stencils):
        a[r] = s
        m[r] = 0
    inner = _interior(grid, rows)
    return DiscreteOperator(
        a=a, m=m, bc=BoundaryConditionSet(OS_SYMMETRIC, rows), grid=grid,
        weight_sqrt=grid.weight_sqrt, kind="os-collocation", fields=1,
        source_rows=inner, source_nodes=inner, shift_hint=0.5j * profile.u0,
    )


def _assemble_os_block(grid, profile, params):
    n, N = grid.n, grid.size
    a2, b = params.alpha**2, params.beta
    u, _, u2, _, _ = _profile_samples(grid, profile)
    eye = np.eye(N)
    zero = np.zeros((N, N))
    lop = -grid.d2 + 1j * b * np.diag(u)
    a = np.block([[grid.d2 - a2 * eye, -eye],
                  [-1j * b * np.diag(u2), lop]]).astype(complex)
    m = np.block([[zero, zero], [zero, b * eye]]).astype(complex)
    # phi(1) = 0, phi'(0) = 0 in the first block; phi'(1) = 0 and
    # phi'''(0) = omega'(0) + alpha^2 phi'(0) = 0 in the second
    a[0] = 0
    a[0, 0] = 1
    a[n] = 0
    a[n, :N] = grid.d1[n]
    a[N] = 0
    a[N, :N] = grid.d1[0]
    a[N + n] = 0
    a[N + n, N:] = grid.d1[n]
    a[N + n, :N] += a2 * grid.d1[n]
    rows = (0, n, N, N + n)
    m[list(rows)] = 0
    inner = _interior(grid, (0, n))
    return DiscreteOperator(
        a=a, m=m, bc=BoundaryConditionSet(OS_SYMMETRIC, rows), grid=grid,
        weight_sqrt=grid.weight_sqrt, kind="os-block", fields=2,
        source_rows=N + inner, source_nodes=inner, shift_hint=0.5j * profile.u0,
    )


def assemble_rayleigh(grid, profile, alpha, lam=0j):
    """Rayleigh operator at fixed ``lam``; ``m`` holds its lam-derivative."""
    n, N = grid.n, grid.size
    u, _, u2, _, _ = _profile_samples(grid, profile)
    op = -grid.d2 + alpha**2 * np.eye(N)
    a = np.diag(u + 1j * complex(lam)) @ op + np.diag(u2)
    m = -1j * op
    a = a.astype(complex)
    m = m.astype(complex)
    rows = (0, n)
    a[0] = grid.diff[0][0]
    a[n] = grid.d1[n]
    m[list(rows)] = 0
    inner = _interior(grid, rows)
    # a - lam' m evaluates the operator at lam + lam'
    return DiscreteOperator(
        a=a, m=m, bc=BoundaryConditionSet(RAYLEIGH_ND, rows), grid=grid,
        weight_sqrt=grid.weight_sqrt, kind="rayleigh", fields=1,
        source_rows=inner, source_nodes=inner,
    )


def assemble_schrodinger(grid, profile, beta, bc=NEUMANN_DIRICHLET, zeta=None):
    """``-D^2 + i beta U`` with mass ``I`` (pencil eigenvalue is beta*lam)."""
    n, N = grid.n, grid.size
    u = _profile_samples(grid, profile)[0]
    a = (-grid.d2 + 1j * beta * np.diag(u)).astype(complex)
    m = np.eye(N, dtype=complex)
    rows = (0, n)
    if bc == NEUMANN_DIRICHLET:
        a[0] = grid.diff[0][0]
        bcs = BoundaryConditionSet(NEUMANN_DIRICHLET, rows)
    elif bc == INTEGRAL_ZETA:
        if zeta is None:
            raise ValueError("IntegralZeta requires zeta samples")
        zeta = np.asarray(zeta, dtype=complex)
        a[0] = grid.weights * np.conj(zeta)
        bcs = BoundaryConditionSet(INTEGRAL_ZETA, rows, zeta)
    else:
        raise ValueError(f"unsupported boundary condition {bc!r}")
    a[n] = grid.d1[n]
    m[list(rows)] = 0
    inner = _interior(grid, rows)
    return DiscreteOperator(
        a=a, m=m, bc=bcs, grid=grid, weight_sqrt=grid.weight_sqrt,
        kind="schrodinger", fields=1, source_rows=inner, source_nodes=inner,
    )


def assemble_m_u(grid, profile):
    """Weak-form pencil of the weighted operator ``-U^{-2}(U^2 w')'``.

    ``a`` is the stiffness matrix of int U^2 |w'|^2 and ``m`` the mass
    matrix of int U^2 |w|^2, both by Clenshaw-Curtis quadrature.  The
    natural boundary conditions need no row replacement.
    """
    u = _profile_samples(grid, profile)[0]
    wu = grid.weights * u**2
    a = grid.d1.T @ (wu[:, None] * grid.d1)
    a = 0.5 * (a + a.T)
    m = np.diag(wu)
    return DiscreteOperator(
        a=a, m=m, bc=BoundaryConditionSet(NEUMANN_DIRICHLET, ()), grid=grid,
        weight_sqrt=grid.weight_sqrt, kind="m_u", fields=1,
        source_rows=np.arange(grid.size), source_nodes=np.arange(grid.size),
    )


def zeta_cosh(grid, alpha):
    """Samples of cosh(alpha x)/cosh(alpha), computed without overflow."""
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    x = grid.nodes
    num = np.exp(alpha * (x - 1)) + np.exp(-alpha * (x + 1))
    return (num / (1 + np.exp(-2 * alpha))).astype(complex)


def in_u0(grid, zeta, tol=1e-8):
    """zeta'(0) = 0 and zeta(1) = 1."""
    zeta = np.asarray(zeta)
    return bool(abs(grid.d1[grid.n] @ zeta) <= tol and abs(zeta[0] - 1) <= tol)


def in_u2(grid, zeta, beta, lam, theta, tol=1e-8):
    """Membership in U_0 plus ||zeta'||_2 <= theta beta^{1/6} lambda_beta^{1/4}."""
    zeta = np.asarray(zeta)
    lam_beta = 1 + abs(lam) * beta ** (1 / 3)
    dz = grid.d1 @ zeta
    norm = np.sqrt(grid.weights @ np.abs(dz) ** 2)
    return in_u0(grid, zeta, tol) and bool(norm <= theta * beta ** (1 / 6) * lam_beta**0.25)


def in_u3(grid, zeta, beta, lam, theta, alpha, constant=1.0, tol=1e-12):
    """U_2 membership plus |zeta(x)| <= constant * e^{-alpha(1-x)} ||zeta||_inf.

    With ``constant=1`` this is the strict class.  cosh(alpha x)/cosh(alpha)
    exceeds e^{-alpha(1-x)} away from x = 1 (by less than a factor 2), so
    it belongs to the class only with ``constant=2``.
    """
    zeta = np.asarray(zeta)
    bound = constant * np.exp(-alpha * (1 - grid.nodes)) * np.max(np.abs(zeta))
    decay = bool(np.all(np.abs(zeta) <= bound + tol))
    return in_u2(grid, zeta, beta, lam, theta) and decay
