"""Domain types, unit conventions and shared numerical helpers.

Everything is in atomic units (hbar = e = m = 1). Conversion factors are only
used by the command line front end when it reports lengths or energies.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import integrate, optimize

BOHR_NM = 0.0529177210903
HARTREE_EV = 27.211386245988

DEFAULT_ROOT_TOL = 1e-12
DEFAULT_QUAD_TOL = 1e-10
_EPS = float(np.finfo(float).eps)


class ConfinedAtomError(Exception):
    """Base class for errors raised by this package."""


class NoBoundStateError(ConfinedAtomError, ValueError):
    pass


class RootNotFoundError(ConfinedAtomError, ValueError):
    pass


class QuadratureError(ConfinedAtomError, ArithmeticError):
    pass


class Isolated(enum.Enum):
    """Marker for an atom with no substrate (wall distance a -> infinity)."""

    ISOLATED = "isolated"

    def __repr__(self) -> str:
        return "ISOLATED"


ISOLATED = Isolated.ISOLATED

Distance = Union[float, Isolated]


@dataclass(frozen=True)
class AtomConfig:
    """A delta-function atom of strength Z at distance a from a hard wall."""

    Z: float
    a: Distance = ISOLATED

    def __post_init__(self):
        if not (self.Z > 0 and math.isfinite(self.Z)):
            raise ValueError(f"effective charge must be positive and finite, got Z={self.Z!r}")
        if self.a is not ISOLATED:
            if isinstance(self.a, bool) or not isinstance(self.a, (int, float)):
                raise TypeError(f"wall distance must be a number or ISOLATED, got {self.a!r}")
            if not (self.a > 0 and math.isfinite(self.a)):
                raise ValueError(f"wall distance must be positive and finite, got a={self.a!r}")
            object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "Z", float(self.Z))

    @property
    def isolated(self) -> bool:
        return self.a is ISOLATED

    def describe(self) -> str:
        where = "isolated" if self.isolated else f"a={self.a:g}"
        return f"Z={self.Z:g}, {where}"


@dataclass(frozen=True)
class BoundState:
    """Unperturbed ground state: wave vector, energy and normalisation."""

    k_b: float
    energy: float
    norm_A: float


@dataclass(frozen=True)
class FieldConfig:
    """Static field strength F and drive frequency omega with broadening eta."""

    F: float = 0.0
    omega: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.F < 0:
            raise ValueError("field strength must be non-negative")
        if self.omega < 0:
            raise ValueError("frequency must be non-negative")
        if self.eta < 0:
            raise ValueError("broadening must be non-negative")

    def check_against(self, bs: BoundState) -> None:
        # Above the ionisation threshold the minus channel sits on the continuum.
        if self.omega >= 0.5 * bs.k_b**2 and self.eta <= 0:
            raise ValueError("eta > 0 is required when omega is above the ionisation threshold")


def find_root_bracketed(
    f: Callable[[float], float], lo: float, hi: float, tol: float = DEFAULT_ROOT_TOL
) -> float:
    """Root of ``f`` in ``[lo, hi]`` given a sign change, to bracket width ``tol``.

    Brent's method: bisection safeguarding inverse quadratic / secant steps.
    Deterministic for identical input.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise RootNotFoundError(f"no root in bracket [{lo}, {hi}]")
    return float(optimize.brentq(f, lo, hi, xtol=tol, rtol=4 * _EPS, maxiter=500))


def integrate_adaptive(
    f: Callable[[float], float], lo: float, hi: float, tol: float = DEFAULT_QUAD_TOL
) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[lo, hi]``.

    ``hi`` may be ``math.inf``; the tail is then mapped onto a finite interval.
    Raises QuadratureError if the requested accuracy
    ``|err| <= tol * (1 + |result|)`` is not reached.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(f, lo, hi, epsabs=tol, epsrel=tol, limit=400)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature failed: {exc}") from None
    if not math.isfinite(value) or err > tol * (1 + abs(value)):
        raise QuadratureError(f"quadrature failed: error estimate {err:.3g}")
    return float(value)
