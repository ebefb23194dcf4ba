"""Frequency-dependent response from two inhomogeneous channel equations.

For a drive -F x (e^{iwt} + e^{-iwt}) the first-order wavefunction splits
into channels phi^+- at energies e_b -+ w. Off the delta each obeys

    phi'' - kappa_+-^2 phi = -2 F x u_b,    kappa_+-^2 = k_b^2 +- 2 (omega + i eta),

with the wall, continuity and jump conditions, and no growing (or incoming)
e^{+kappa x} term on the right. Then

    alpha(omega) = [<u_b|x|phi^+> + <u_b|x|phi^->] / F,

which equals the Kramers-Heisenberg sum over the exact spectrum, and tends to
the static polarizability as omega, eta -> 0 (the u_b components of the two
channels, +-<x>^2 F / w, cancel in the sum).

For a small complex frequency z = omega + i eta both channel operators are
close to the singular static one: the exp-polynomial coefficients grow like
1/(kappa^2 - k_b^2)^2 and cancel in the result. alpha(z) is analytic for
|z| < k_b^2 / 2 (the continuum thresholds), so there it is taken as its mean
over a circle of radius 0.1 k_b^2 about z, where every point is well
conditioned.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import expoly
from .core import AtomConfig, BoundState, ConfinedAtomError
from .dalgarno_lewis import Psi1, bound_pieces, dipole_overlap

DEFAULT_ETA = 0.0018
_REFERENCE_FIELD = 1.0
# |z| / k_b^2 below which the circle mean is used, its radius and node count.
SMALL_FREQUENCY = 0.05
_CIRCLE_RADIUS = 0.1
_CIRCLE_NODES = 32


class BranchCutError(ConfinedAtomError, ValueError):
    pass


@dataclass(frozen=True)
class DynamicResponse:
    omega: float
    eta: float
    alpha: complex


def _sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError(f"channel sign must be + or -, got {sign!r}")


def channel_wavevector(bs: BoundState, omega: float, eta: float, sign) -> complex:
    """Principal sqrt(k_b^2 +- 2(omega + i eta)), Re > 0."""
    s = _sign(sign)
    if omega < 0 or eta < 0:
        raise ValueError("omega and eta must be non-negative")
    kappa = cmath.sqrt(bs.k_b**2 + 2 * s * complex(omega, eta))
    if kappa.real <= 0:
        raise BranchCutError("on branch cut; increase eta")
    return kappa


def _channel(bs: BoundState, cfg: AtomConfig, F: float, kappa: complex) -> Psi1:
    ul, ur = bound_pieces(bs, cfg)
    forcing = (0.0, -2.0 * F)
    a = None if cfg.isolated else cfg.a
    left, right = expoly.solve_delta_bvp(ul.times_poly(forcing), ur.times_poly(forcing), kappa, cfg.Z, a)
    return Psi1(left, right, real=False)


def solve_channel(bs: BoundState, cfg: AtomConfig, F: float, omega: float, eta: float, sign) -> Psi1:
    """phi^+- as exact exp-polynomial pieces."""
    if omega == 0 and eta == 0:
        raise ValueError("degenerate channel: use static module")
    return _channel(bs, cfg, F, channel_wavevector(bs, omega, eta, sign))


def _alpha_direct(bs: BoundState, cfg: AtomConfig, z: complex, F: float) -> complex:
    total = 0j
    for s in (1, -1):
        kappa = cmath.sqrt(bs.k_b**2 + 2 * s * z)
        total += dipole_overlap(bs, cfg, _channel(bs, cfg, F, kappa))
    return complex(total / F)


def _alpha_circle_mean(bs: BoundState, cfg: AtomConfig, z: complex, F: float) -> complex:
    r = _CIRCLE_RADIUS * bs.k_b**2
    n = _CIRCLE_NODES
    nodes = (z + r * cmath.exp(2j * math.pi * (j + 0.5) / n) for j in range(n))
    return sum((_alpha_direct(bs, cfg, zj, F) for zj in nodes), 0j) / n


def dynamic_polarizability(
    bs: BoundState, cfg: AtomConfig, omega: float, eta: float = DEFAULT_ETA, F: float = _REFERENCE_FIELD
) -> complex:
    """Complex alpha(omega) at frequency omega + i eta.

    The response is linear, so ``F`` only sets the amplitude of the channel
    functions; it cancels in the result.
    """
    if not F > 0:
        raise ValueError("field strength must be positive")
    if omega >= 0.5 * bs.k_b**2 and eta <= 0:
        raise ValueError("eta > 0 is required when omega is above the ionisation threshold")
    # Validates the branch and the sign of omega, eta.
    for s in (1, -1):
        channel_wavevector(bs, omega, eta, s)
    z = complex(omega, eta)
    if abs(z) < SMALL_FREQUENCY * bs.k_b**2:
        return _alpha_circle_mean(bs, cfg, z, F)
    return _alpha_direct(bs, cfg, z, F)


def dynamic_response(bs: BoundState, cfg: AtomConfig, omega: float, eta: float = DEFAULT_ETA) -> DynamicResponse:
    return DynamicResponse(omega, eta, dynamic_polarizability(bs, cfg, omega, eta))
