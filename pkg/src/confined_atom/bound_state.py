"""Ground state of a delta-function atom next to an impenetrable wall."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import AtomConfig, BoundState, NoBoundStateError, find_root_bracketed

BOUND_STATE_TOL = 1e-15


def supports_bound_state(cfg: AtomConfig) -> bool:
    """True iff the well binds: always when isolated, else only for 2 Z a > 1."""
    if cfg.isolated:
        return True
    # Exact rational comparison, so points on 2Za = 1 are never misjudged by rounding.
    return 2 * Fraction(cfg.Z) * Fraction(cfg.a) > 1


def expm1mx(x: float) -> float:
    """``exp(x) - 1 - x`` without cancellation for small ``x``."""
    if x == 0.0:
        return 0.0
    if abs(x) < 0.5:
        term, total = x * x / 2.0, 0.0
        n = 2
        while abs(term) > 1e-17 * abs(total) or total == 0.0:
            total += term
            n += 1
            term *= x / n
        return total
    return math.expm1(x) - x


def _threshold_excess(Z: float, a: float) -> float:
    # 1 - 1/(2Za) evaluated exactly before rounding, so binding just above
    # threshold (2Za - 1 ~ 1e-16) is still resolved.
    r = 2 * Fraction(Z) * Fraction(a)
    return float((r - 1) / r)


def _reduced_residual(k: float, Z: float, a: float, excess: float) -> float:
    # (1 - exp(-2ka)) / (2ka) - 1 / (2Za); same nonzero root as k/Z - 1 + exp(-2ka)
    # but without the trivial root at k = 0. For small x = 2ka it is written as
    # excess - (e^{-x} - 1 + x) / x to avoid cancellation near threshold; for
    # larger x the direct form keeps the sign of -e^{-x}/x at k = Z.
    x = 2.0 * k * a
    if x == 0.0:
        return excess
    if x < 1.0:
        return excess - expm1mx(-x) / x
    return -math.expm1(-x) / x - 1.0 / (2.0 * Z * a)


def bound_state_residual(k: float, cfg: AtomConfig) -> float:
    """k/Z - 1 + exp(-2 k a), the matching condition at the delta."""
    if cfg.isolated:
        return k / cfg.Z - 1.0
    return k / cfg.Z + math.expm1(-2.0 * k * cfg.a)


def normalisation_squared(k: float, a: float) -> float:
    """A^2 = k / (1 - exp(-2ka)(1 + 2ka))."""
    s = k * a
    if s > 1.0:
        return k / (1.0 - math.exp(-2.0 * s) * (1.0 + 2.0 * s))
    return k * math.exp(2.0 * s) / expm1mx(2.0 * s)


def solve_bound_state(cfg: AtomConfig, tol: float = BOUND_STATE_TOL) -> BoundState:
    if not supports_bound_state(cfg):
        raise NoBoundStateError(
            f"no bound state: Z <= 1/(2a) (Z={cfg.Z:g}, 1/(2a)={0.5 / cfg.a:g})"
        )
    Z = cfg.Z
    if cfg.isolated:
        k = Z
        A2 = k
    else:
        excess = _threshold_excess(Z, cfg.a)
        # k grows like the excess near threshold; scale the bracket tolerance with it.
        xtol = tol * Z * min(1.0, excess)
        k = find_root_bracketed(lambda q: _reduced_residual(q, Z, cfg.a, excess), 0.0, Z, xtol)
        A2 = normalisation_squared(k, cfg.a)
    return BoundState(k_b=k, energy=-0.5 * k * k, norm_A=math.sqrt(A2))


def wavefunction(bs: BoundState, cfg: AtomConfig, x):
    """u_b(x); accepts scalars or arrays.

    Inside the gap the sinh is written as A (e^{kx} - e^{-k(x+2a)}) and outside
    as A (1 - e^{-2ka}) e^{-kx}, which stays finite for any wall distance.
    """
    k, A = bs.k_b, bs.norm_A
    xa = np.asarray(x, dtype=float)
    out = np.zeros_like(xa)
    right = xa >= 0
    if cfg.isolated:
        out = A * np.exp(-k * np.abs(xa))
    else:
        a = cfg.a
        gap = (xa > -a) & ~right
        xg = xa[gap]
        out[gap] = A * (np.exp(k * xg) - np.exp(-k * (xg + 2 * a)))
        out[right] = -A * math.expm1(-2 * k * a) * np.exp(-k * xa[right])
    if np.ndim(x) == 0:
        return float(out)
    return out


def mean_position(bs: BoundState, cfg: AtomConfig) -> float:
    """<u_b|x|u_b> = a^2 k / (e^{2ka} - 1 - 2ka); zero for the isolated atom."""
    if cfg.isolated:
        return 0.0
    k, a = bs.k_b, cfg.a
    s = k * a
    if s > 1.0:
        t = math.exp(-2 * s)
        return a * a * k * t / (1.0 - t * (1 + 2 * s))
    return a * a * k / expm1mx(2 * s)
