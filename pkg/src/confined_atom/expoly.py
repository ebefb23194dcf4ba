"""Exact algebra on piecewise sums of polynomial-times-exponential terms.

Both the static first-order correction and the two dynamic channels are
solutions of ``phi'' - kappa^2 phi = rhs`` on each side of the delta, with a
right-hand side built from ``x^m e^{+-k x}``. Such functions stay in the class
``sum_j p_j(x) exp(lam_j x + c_j)``, so they can be carried symbolically:
particular solutions by undetermined coefficients, derivatives, products and
integrals all close in the class.

The constant ``c_j`` lets every exponential be anchored where it is largest
(e.g. ``e^{-k(x+2a)}`` instead of ``e^{-2ka} e^{-kx}``), which keeps all terms
bounded by their polynomial on the interval they live on.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .core import ConfinedAtomError

_TAYLOR_LIMIT = 4.0


@dataclass(frozen=True)
class Term:
    """p(x) exp(lam x + c); ``poly`` holds ascending complex coefficients."""

    poly: np.ndarray
    lam: complex
    c: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "poly", np.atleast_1d(np.asarray(self.poly, dtype=complex)))
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "c", complex(self.c))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return P.polyval(x, self.poly) * np.exp(self.lam * x + self.c)

    def scaled(self, s: complex) -> "Term":
        return Term(self.poly * s, self.lam, self.c)

    def derivative(self) -> "Term":
        # (p e)' = (p' + lam p) e
        return Term(P.polyadd(P.polyder(self.poly), self.lam * self.poly), self.lam, self.c)

    def times(self, other: "Term") -> "Term":
        return Term(P.polymul(self.poly, other.poly), self.lam + other.lam, self.c + other.c)

    def times_poly(self, q: Sequence[complex]) -> "Term":
        return Term(P.polymul(self.poly, np.asarray(q, dtype=complex)), self.lam, self.c)


@dataclass(frozen=True)
class Piece:
    """Sum of terms on the interval [lo, hi]; ``hi`` may be +inf, ``lo`` -inf."""

    lo: float
    hi: float
    terms: Tuple[Term, ...]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for t in self.terms:
            out = out + t(x)
        return out

    def derivative(self) -> "Piece":
        return Piece(self.lo, self.hi, tuple(t.derivative() for t in self.terms))

    def plus(self, terms: Sequence[Term]) -> "Piece":
        return Piece(self.lo, self.hi, self.terms + tuple(terms))

    def scaled(self, s: complex) -> "Piece":
        return Piece(self.lo, self.hi, tuple(t.scaled(s) for t in self.terms))

    def times_poly(self, q: Sequence[complex]) -> "Piece":
        return Piece(self.lo, self.hi, tuple(t.times_poly(q) for t in self.terms))


def particular_term(t: Term, kappa: complex) -> Term:
    """A solution of y'' - kappa^2 y = t.

    Writing y = q(x) e^{lam x + c} gives q'' + 2 lam q' + (lam^2 - kappa^2) q = p.
    Off resonance q has the degree of p and follows by back substitution; at
    resonance (lam = +-kappa) the zeroth-order coefficient vanishes, r = q'
    solves r' + 2 lam r = p, and q gains one degree.
    """
    p, lam = t.poly, t.lam
    n = p.size
    gap = lam * lam - kappa * kappa
    if lam == kappa or lam == -kappa:
        if lam == 0:
            # y'' = p: integrate twice.
            return Term(P.polyint(p, 2), 0j, t.c)
        r = np.zeros(n, dtype=complex)
        for j in range(n - 1, -1, -1):
            nxt = (j + 1) * r[j + 1] if j + 1 < n else 0.0
            r[j] = (p[j] - nxt) / (2 * lam)
        return Term(P.polyint(r), lam, t.c)
    q = np.zeros(n + 2, dtype=complex)
    for j in range(n - 1, -1, -1):
        q[j] = (p[j] - 2 * lam * (j + 1) * q[j + 1] - (j + 2) * (j + 1) * q[j + 2]) / gap
    return Term(q[:n], lam, t.c)


def particular_piece(rhs: Piece, kappa: complex) -> Piece:
    return Piece(rhs.lo, rhs.hi, tuple(particular_term(t, kappa) for t in rhs.terms))


def _taylor_integral(b: np.ndarray, lam: complex, T: float) -> complex:
    # int_0^T (sum_j b_j t^j) e^{lam t} dt for |lam T| small, by expanding e^{lam t}.
    total = 0j
    for j, bj in enumerate(b):
        if bj == 0:
            continue
        s = 0j
        term = 1.0 + 0j
        n = 0
        while True:
            contrib = term * T ** (n + j + 1) / (n + j + 1)
            s += contrib
            n += 1
            term *= lam / n
            if abs(contrib) <= 1e-18 * abs(s) and n > 3:
                break
            if n > 200:
                break
        total += bj * s
    return total


def _antiderivative_poly(p: np.ndarray, lam: complex) -> np.ndarray:
    # int p e^{lam x} = Q e^{lam x} with Q = sum_m (-1)^m p^{(m)} / lam^{m+1}.
    Q = np.zeros(p.size, dtype=complex)
    d = p.copy()
    sign = 1.0
    for m in range(p.size):
        Q[: d.size] += sign * d / lam ** (m + 1)
        d = P.polyder(d) if d.size > 1 else np.zeros(1, dtype=complex)
        sign = -sign
    return Q


def _shift_poly(p: np.ndarray, x0: float) -> np.ndarray:
    # Coefficients of p(x0 + t) in powers of t.
    out = np.zeros(p.size, dtype=complex)
    for j in range(p.size - 1, -1, -1):
        out = P.polymul(out, [x0, 1.0])[: p.size]
        out[0] += p[j]
    return out


def integrate_term(t: Term, lo: float, hi: float) -> complex:
    """Exact integral of a term over [lo, hi]; infinite ends need decay."""
    p, lam, c = t.poly, t.lam, t.c
    if math.isinf(hi) or math.isinf(lo):
        if math.isinf(hi) and math.isinf(lo):
            raise ValueError("doubly infinite interval not supported")
        if math.isinf(hi):
            if not lam.real < 0:
                raise ValueError("term does not decay at +inf")
            Q = _antiderivative_poly(p, lam)
            return -P.polyval(lo, Q) * cmath.exp(lam * lo + c)
        if not lam.real > 0:
            raise ValueError("term does not decay at -inf")
        Q = _antiderivative_poly(p, lam)
        return P.polyval(hi, Q) * cmath.exp(lam * hi + c)
    T = hi - lo
    if T == 0:
        return 0j
    if abs(lam) * T < _TAYLOR_LIMIT:
        # Anchor at the end where |e^{lam x}| is largest so nothing overflows.
        if lam.real >= 0:
            b = _shift_poly(p, hi) * (-1.0) ** np.arange(p.size)
            return cmath.exp(lam * hi + c) * _taylor_integral(b, -lam, T)
        b = _shift_poly(p, lo)
        return cmath.exp(lam * lo + c) * _taylor_integral(b, lam, T)
    Q = _antiderivative_poly(p, lam)
    return P.polyval(hi, Q) * cmath.exp(lam * hi + c) - P.polyval(lo, Q) * cmath.exp(lam * lo + c)


def integrate_piece(piece: Piece) -> complex:
    return sum((integrate_term(t, piece.lo, piece.hi) for t in piece.terms), 0j)


def product_piece(f: Piece, g: Piece) -> Piece:
    if (f.lo, f.hi) != (g.lo, g.hi):
        raise ValueError("pieces live on different intervals")
    return Piece(f.lo, f.hi, tuple(s.times(t) for s in f.terms for t in g.terms))


def inner(f: Piece, g: Piece, weight: Sequence[complex] = (1.0,)) -> complex:
    """int f(x) w(x) g(x) dx over the common interval (no conjugation)."""
    return integrate_piece(product_piece(f, g).times_poly(weight))


def value(piece: Piece, x: float) -> complex:
    return complex(piece(np.asarray(x)))


class DegenerateSystemError(ConfinedAtomError, ArithmeticError):
    pass


def solve_delta_bvp(
    rhs_left: Piece,
    rhs_right: Piece,
    kappa: complex,
    Z: float,
    a,
    gauge: Tuple[Piece, Piece] = None,
) -> Tuple[Piece, Piece]:
    """Solve y'' - kappa^2 y = rhs on both sides of a delta of strength Z.

    Conditions: y(-a) = 0 (or decay at -inf when ``a`` is None), continuity at
    0, y'(0+) - y'(0-) = -2 Z y(0), and no e^{+kappa x} on the right. When the
    homogeneous problem has a solution (the static case) the system is
    singular; ``gauge = (g_left, g_right)`` then adds the row <g|y> = 0 and the
    overdetermined system is solved in the least-squares sense, which must
    leave no residual.
    """
    kappa = complex(kappa)
    if kappa.real <= 0:
        raise ValueError("kappa must have a positive real part")
    pl = particular_piece(rhs_left, kappa)
    pr = particular_piece(rhs_right, kappa)
    dpl, dpr = pl.derivative(), pr.derivative()
    yl0, yr0 = value(pl, 0.0), value(pr, 0.0)
    dl0, dr0 = value(dpl, 0.0), value(dpr, 0.0)
    right_h = (Term([1.0], -kappa),)
    if a is None:
        left_h = (Term([1.0], kappa),)
        # unknowns: A1 (e^{kx} on the left), B (e^{-kx} on the right)
        M = [[1.0, -1.0], [-kappa, -kappa + 2 * Z]]
        rhs = [yr0 - yl0, -(dr0 - dl0 + 2 * Z * yr0)]
    else:
        ea = cmath.exp(-kappa * a)
        left_h = (Term([1.0], kappa), Term([1.0], -kappa, -kappa * a))
        ym = value(pl, -a)
        M = [[ea, 1.0, 0.0], [1.0, ea, -1.0], [-kappa, kappa * ea, -kappa + 2 * Z]]
        rhs = [-ym, yr0 - yl0, -(dr0 - dl0 + 2 * Z * yr0)]
    M = np.array(M, dtype=complex)
    rhs = np.array(rhs, dtype=complex)
    lo_l = rhs_left.lo
    if gauge is not None:
        gl, gr = gauge
        row = [inner(gl, Piece(lo_l, 0.0, (t,))) for t in left_h]
        row.append(inner(gr, Piece(0.0, math.inf, right_h)))
        target = -(inner(gl, pl) + inner(gr, pr))
        M = np.vstack([M, np.array(row)[None, :]])
        rhs = np.append(rhs, target)
        coef, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        resid = np.linalg.norm(M @ coef - rhs)
        scale = np.linalg.norm(M) * np.linalg.norm(coef) + np.linalg.norm(rhs)
        if not resid <= 1e-9 * scale:
            raise DegenerateSystemError("degenerate matching system: inconsistent with gauge row")
    else:
        if np.linalg.cond(M) > 1e14:
            raise DegenerateSystemError("degenerate matching system")
        coef = np.linalg.solve(M, rhs)
    n_left = len(left_h)
    left = pl.plus([t.scaled(cf) for t, cf in zip(left_h, coef[:n_left])])
    right = pr.plus([right_h[0].scaled(coef[n_left])])
    return left, right
