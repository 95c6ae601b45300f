"""Symmetric channel velocity profiles on the half channel (0, 1).

All profiles are normalized so that U(1) = 0, U'(0) = 0 and U'(1) = -1.
Derivatives are analytic; nothing here differentiates numerically.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "Profile",
    "ValidationReport",
    "poiseuille",
    "cosine",
    "linear",
    "negated",
    "get_profile",
    "validate",
    "x_nu",
    "j_nu",
    "PROFILES",
]


@dataclass(frozen=True, eq=False)
class Profile:
    """Velocity field U with derivatives U', U'', U''', U''''."""

    name: str
    u: Callable
    u1: Callable
    u2: Callable
    u3: Callable
    u4: Callable
    u0: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "u0", float(self.u(0.0)))

    def derivative(self, k):
        return (self.u, self.u1, self.u2, self.u3, self.u4)[k]

    def samples(self, grid):
        """Return (U, U', U'', U''', U'''') sampled on ``grid.nodes``."""
        x = grid.nodes
        return tuple(np.broadcast_to(self.derivative(k)(x), x.shape).astype(float)
                     for k in range(5))


def _const(c):
    return lambda x: np.zeros_like(np.asarray(x, dtype=float)) + c


def poiseuille():
    """Plane Poiseuille flow U = (1 - x^2)/2."""
    return Profile(
        name="poiseuille",
        u=lambda x: (1 - np.asarray(x, dtype=float) ** 2) / 2,
        u1=lambda x: -np.asarray(x, dtype=float),
        u2=_const(-1.0),
        u3=_const(0.0),
        u4=_const(0.0),
    )


def cosine():
    """U = (2/pi) cos(pi x / 2)."""
    k = np.pi / 2
    return Profile(
        name="cosine",
        u=lambda x: np.cos(k * np.asarray(x, dtype=float)) / k,
        u1=lambda x: -np.sin(k * np.asarray(x, dtype=float)),
        u2=lambda x: -k * np.cos(k * np.asarray(x, dtype=float)),
        u3=lambda x: k**2 * np.sin(k * np.asarray(x, dtype=float)),
        u4=lambda x: k**3 * np.cos(k * np.asarray(x, dtype=float)),
    )


def linear():
    """U = 1 - x. Not admissible (U'' = 0, U'(0) != 0); used as a reference weight."""
    return Profile(
        name="linear",
        u=lambda x: 1 - np.asarray(x, dtype=float),
        u1=_const(-1.0),
        u2=_const(0.0),
        u3=_const(0.0),
        u4=_const(0.0),
    )


def negated(profile):
    """The profile -U (used for the conjugation identity)."""
    return Profile(
        name=f"-{profile.name}",
        u=lambda x: -profile.u(x),
        u1=lambda x: -profile.u1(x),
        u2=lambda x: -profile.u2(x),
        u3=lambda x: -profile.u3(x),
        u4=lambda x: -profile.u4(x),
    )


PROFILES = {"poiseuille": poiseuille, "cosine": cosine}


def get_profile(name):
    try:
        return PROFILES[name]()
    except KeyError:
        raise ValueError(
            f"unknown profile {name!r}; choose from {sorted(PROFILES)}"
        ) from None


@dataclass
class ValidationReport:
    profile: str
    checks: dict  # name -> (passed, worst violation)
    u3_zero_at_0: bool

    @property
    def ok(self):
        return all(passed for passed, _ in self.checks.values())

    def failures(self):
        return [k for k, (passed, _) in self.checks.items() if not passed]


def validate(profile, grid, tol=1e-12):
    """Check the normalization and concavity conditions on the grid nodes."""
    x = grid.nodes
    u = profile.u(x)
    u2 = np.broadcast_to(profile.u2(x), x.shape)
    checks = {}

    def add(name, worst):
        worst = float(worst)
        checks[name] = (worst <= tol, worst)

    add("U(1)=0", abs(profile.u(1.0)))
    add("U'(0)=0", abs(profile.u1(0.0)))
    add("U'(1)=-1", abs(profile.u1(1.0) + 1))
    # strict negativity: violation is how far max U'' sits above zero
    checks["max U''<0"] = (bool(np.max(u2) < 0), float(max(np.max(u2), 0.0)))
    lower = profile.u0 * (1 - x) - u
    upper = u - (1 - x)
    add("U(0)(1-x)<=U<=1-x", max(np.max(lower), np.max(upper), 0.0))
    u3_zero = bool(abs(profile.u3(0.0)) <= tol)
    return ValidationReport(profile.name, checks, u3_zero)


def x_nu(profile, nu):
    """Critical-layer position: U(x_nu) = nu, clamped to 1 (nu <= 0) or 0 (nu > U(0))."""
    if nu <= 0:
        return 1.0
    if nu > profile.u0:
        return 0.0
    if nu == profile.u0:
        return 0.0
    # U decreases strictly on (0, 1)
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if profile.u(mid) > nu:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    # iterate on the step, not the residual: near the top of the profile a
    # tiny residual still leaves an error of order residual / U'(x) in x
    for _ in range(50):
        r = float(profile.u(x)) - nu
        d = float(profile.u1(x))
        if d == 0:
            break
        x_new = x - r / d
        if not lo - 1e-6 <= x_new <= hi + 1e-6:
            break
        step = abs(x_new - x)
        x = x_new
        if step <= 4e-16 * max(x, 1e-300):
            break
    return float(min(max(x, 0.0), 1.0))


def j_nu(profile, nu):
    """Shear at the critical layer, |U'(x_nu)|."""
    return float(abs(profile.u1(x_nu(profile, nu))))
