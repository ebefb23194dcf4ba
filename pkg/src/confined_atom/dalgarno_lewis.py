"""Exact static response of the confined atom.

The first-order correction psi_1 solves

    (H_0 - e_b) psi_1 = (F x - D) u_b,        D = <u_b|F x|u_b>,

i.e. ``psi_1'' - k^2 psi_1 = 2 (D - F x) u_b`` away from the delta, with the
wall, continuity and jump conditions of the unperturbed problem. The
homogeneous problem has the solution u_b itself, so psi_1 is fixed by the
extra condition <u_b|psi_1> = 0. Everything is carried as exact
polynomial-times-exponential pieces (see ``expoly``).

The second-order energy is -F <u_b|x|psi_1> = -alpha F^2 / 2. In closed form,
with s = k_b a and t = e^{-2s},

    alpha k_b^4 = [-15 + t(12s^4 + 8s^3 + 90s + 45)
                   - t^2(44s^4 + 16s^3 + 180s^2 + 180s + 45)
                   + t^3(8s^5 + 32s^4 + 128s^3 + 180s^2 + 90s + 15)]
                  / (12 (t(1 + 2s) - 1)^3),

which tends to 5/4 for a -> infinity. Numerator and denominator both vanish
like s^6 at small s, so below s = 1 an exact Taylor series is used instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import expoly
from .bound_state import mean_position
from .core import AtomConfig, BoundState

SERIES_SWITCH = 1.0
_SERIES_TERMS = 40


@dataclass(frozen=True)
class Psi1:
    """Piecewise exp-polynomial function on [-a, 0] and [0, inf).

    Also used for the dynamic channels, whose values are complex; ``real``
    marks functions that are real by construction.
    """

    left: expoly.Piece
    right: expoly.Piece
    real: bool = True

    def _eval(self, left, right, x):
        xa = np.asarray(x, dtype=float)
        out = np.zeros(xa.shape, dtype=complex)
        mask_r = xa >= 0
        mask_l = (xa >= self.left.lo) & ~mask_r
        out[mask_l] = left(xa[mask_l])
        out[mask_r] = right(xa[mask_r])
        if self.real:
            out = out.real
        return out[()] if out.ndim == 0 else out

    def __call__(self, x):
        return self._eval(self.left, self.right, x)

    def derivative(self, x):
        """First derivative (right-hand limit at x = 0; see ``jump``)."""
        return self._eval(self.left.derivative(), self.right.derivative(), x)

    def second_derivative(self, x):
        d2l = self.left.derivative().derivative()
        d2r = self.right.derivative().derivative()
        return self._eval(d2l, d2r, x)

    def jump(self) -> complex:
        """psi'(0+) - psi'(0-)."""
        j = expoly.value(self.right.derivative(), 0.0) - expoly.value(self.left.derivative(), 0.0)
        return j.real if self.real else j

    def at_origin(self) -> complex:
        v = expoly.value(self.right, 0.0)
        return v.real if self.real else v


def bound_pieces(bs: BoundState, cfg: AtomConfig):
    """u_b as exp-polynomial pieces (left, right)."""
    k, A = bs.k_b, bs.norm_A
    if cfg.isolated:
        left = expoly.Piece(-math.inf, 0.0, (expoly.Term([A], k),))
        right = expoly.Piece(0.0, math.inf, (expoly.Term([A], -k),))
        return left, right
    a = cfg.a
    left = expoly.Piece(-a, 0.0, (expoly.Term([A], k), expoly.Term([-A], -k, -2 * k * a)))
    right = expoly.Piece(0.0, math.inf, (expoly.Term([-A * math.expm1(-2 * k * a)], -k),))
    return left, right


def dipole_coefficient(bs: BoundState, cfg: AtomConfig, F: float) -> float:
    """D = <u_b|F x|u_b> = F a^2 (Z - k_b) / (1 - 2a (Z - k_b)); zero when isolated."""
    return F * mean_position(bs, cfg)


def solve_psi1(bs: BoundState, cfg: AtomConfig, F: float) -> Psi1:
    """First-order correction in the gauge <u_b|psi_1> = 0."""
    if F < 0:
        raise ValueError("field strength must be non-negative")
    ul, ur = bound_pieces(bs, cfg)
    D = dipole_coefficient(bs, cfg, F)
    forcing = (2 * D, -2 * F)
    rl, rr = ul.times_poly(forcing), ur.times_poly(forcing)
    a = None if cfg.isolated else cfg.a
    left, right = expoly.solve_delta_bvp(rl, rr, bs.k_b, cfg.Z, a, gauge=(ul, ur))
    return Psi1(left, right, real=True)


def dipole_overlap(bs: BoundState, cfg: AtomConfig, phi: Psi1) -> complex:
    """<u_b|x|phi> evaluated exactly on the pieces."""
    ul, ur = bound_pieces(bs, cfg)
    return expoly.inner(ul, phi.left, (0.0, 1.0)) + expoly.inner(ur, phi.right, (0.0, 1.0))


@lru_cache(maxsize=1)
def _series_coefficients():
    # Exact Taylor coefficients of alpha k^4 as a function of s.
    order = 6 + _SERIES_TERMS + 1

    def exp_series(m):
        out, term = [], Fraction(1)
        for n in range(order):
            out.append(term)
            term = term * Fraction(-2 * m) / (n + 1)
        return out

    def mul(p, q):
        r = [Fraction(0)] * order
        for i, pi in enumerate(p):
            if pi == 0:
                continue
            for j in range(order - i):
                r[i + j] += pi * q[j]
        return r

    def poly(coeffs):
        return [Fraction(c) for c in coeffs] + [Fraction(0)] * (order - len(coeffs))

    t1, t2, t3 = exp_series(1), exp_series(2), exp_series(3)
    num = poly([-15])
    num = [x + y for x, y in zip(num, mul(t1, poly([45, 90, 0, 8, 12])))]
    num = [x - y for x, y in zip(num, mul(t2, poly([45, 180, 180, 16, 44])))]
    num = [x + y for x, y in zip(num, mul(t3, poly([15, 90, 180, 128, 32, 8])))]
    base = [x - y for x, y in zip(mul(t1, poly([1, 2])), poly([1]))]
    den = [12 * c for c in mul(mul(base, base), base)]
    if any(num[:6]) or any(den[:6]):
        raise AssertionError("series bookkeeping: leading orders must cancel")
    num, den = num[6:], den[6:]
    quo = []
    for n in range(_SERIES_TERMS):
        c = num[n] - sum(quo[j] * den[n - j] for j in range(n))
        quo.append(c / den[0])
    return tuple(float(c) for c in quo)


def reduced_polarizability(s: float) -> float:
    """alpha k_b^4 as a function of s = k_b a (5/4 at s = inf, 1/2 at s = 0)."""
    if math.isinf(s):
        return 1.25
    if s < SERIES_SWITCH:
        total = 0.0
        for c in reversed(_series_coefficients()):
            total = total * s + c
        return total
    t = math.exp(-2 * s)
    s2, s3, s4 = s * s, s**3, s**4
    num = (
        -15
        + t * (12 * s4 + 8 * s3 + 90 * s + 45)
        - t * t * (44 * s4 + 16 * s3 + 180 * s2 + 180 * s + 45)
        + t**3 * (8 * s**5 + 32 * s4 + 128 * s3 + 180 * s2 + 90 * s + 15)
    )
    return num / (12 * (t * (1 + 2 * s) - 1) ** 3)


def static_polarizability(bs: BoundState, cfg: AtomConfig) -> float:
    """alpha = -2 e^(2) / F^2 from the closed form above."""
    s = math.inf if cfg.isolated else bs.k_b * cfg.a
    return reduced_polarizability(s) / bs.k_b**4


def stark_shift_exact(bs: BoundState, cfg: AtomConfig, F: float) -> float:
    """Second-order energy shift -alpha F^2 / 2, exact in the wall distance."""
    return -0.5 * static_polarizability(bs, cfg) * F * F


def stark_shift_from_psi1(bs: BoundState, cfg: AtomConfig, F: float) -> float:
    """-F <u_b|x|psi_1>, the same shift obtained from the solved psi_1."""
    if F == 0:
        return 0.0
    return float((-F * dipole_overlap(bs, cfg, solve_psi1(bs, cfg, F))).real)
