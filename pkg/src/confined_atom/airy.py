"""Airy functions of complex argument.

Two branches:

* ``|z| <= Z_SWITCH``: Maclaurin series, summed in 40-digit arithmetic so the
  cancellation between the two series (which costs up to e^{2|zeta|}) does
  not reach double precision.
* ``|z| > Z_SWITCH``: the large-argument expansion of Ai, valid for
  |arg z| <= 2 pi / 3, combined with the connection formulas
  ``Ai(z) + w Ai(w z) + w^2 Ai(w^2 z) = 0`` and
  ``Bi(z) = e^{i pi/6} Ai(w z) + e^{-i pi/6} Ai(w^2 z)``, ``w = e^{2 pi i / 3}``.

With at most 13 asymptotic terms the truncation error at ``|z| = 8`` is about
5e-12, which fixes the switch radius.

``airy_scaled`` returns Ai e^{zeta}, Bi e^{-zeta} (zeta = 2 z^{3/2} / 3) and
never overflows; it is restricted to the sector |arg z| <= pi / 3 where that
scaling makes sense.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .core import ConfinedAtomError

Z_SWITCH = 8.0
MAX_ARGUMENT = 100.0
MAX_COEFF_INDEX = 12
OVERLAP_WINDOW = (6.0, 12.0)

_SQRT_PI = math.sqrt(math.pi)
_W = cmath.exp(2j * math.pi / 3)
_W2 = cmath.exp(-2j * math.pi / 3)
_E_PI6 = cmath.exp(1j * math.pi / 6)
_E_5PI6 = cmath.exp(5j * math.pi / 6)

_MP = mpmath.MPContext()
_MP.dps = 40
_AI0 = 1 / (_MP.cbrt(9) * _MP.gamma(_MP.mpf(2) / 3))
_AIP0 = -1 / (_MP.cbrt(3) * _MP.gamma(_MP.mpf(1) / 3))
_SQRT3 = _MP.sqrt(3)


class AiryRangeError(ConfinedAtomError, OverflowError):
    pass


@dataclass(frozen=True)
class AiryPair:
    ai: complex
    bi: complex
    ai_prime: complex
    bi_prime: complex

    def wronskian(self) -> complex:
        """Ai Bi' - Ai' Bi, identically 1/pi."""
        sa, sb = self._scales()
        return self.scaled_wronskian() * sa * sb

    def _scales(self):
        sa = max(abs(self.ai), abs(self.ai_prime)) or 1.0
        sb = max(abs(self.bi), abs(self.bi_prime)) or 1.0
        return sa, sb

    def scaled_wronskian(self) -> complex:
        """The Wronskian divided by max(|Ai|, |Ai'|) max(|Bi|, |Bi'|).

        Finite even where the individual products overflow.
        """
        sa, sb = self._scales()
        return (self.ai / sa) * (self.bi_prime / sb) - (self.ai_prime / sa) * (self.bi / sb)


def airy_asymptotic_coeffs(k: int) -> float:
    """c_k = Gamma(3k + 1/2) / (54^k k! Gamma(k + 1/2)), with c_0 = 1."""
    if not 0 <= k <= MAX_COEFF_INDEX or int(k) != k:
        raise ValueError(f"coefficient index unsupported: {k}")
    return _coeffs()[0][int(k)]


@lru_cache(maxsize=1)
def _coeffs():
    c = [1.0]
    for k in range(MAX_COEFF_INDEX):
        c.append(c[-1] * (3 * k + 0.5) * (3 * k + 1.5) * (3 * k + 2.5) / (54 * (k + 1) * (k + 0.5)))
    d = [1.0] + [-(6 * k + 1) / (6 * k - 1) * c[k] for k in range(1, MAX_COEFF_INDEX + 1)]
    return tuple(c), tuple(d)


def _zeta(z: complex) -> complex:
    return 2.0 / 3.0 * z * cmath.sqrt(z)


def _asym_sum(coeffs, zeta: complex) -> complex:
    # Alternating-sign sum, stopped at the smallest term or at convergence.
    total = 0j
    inv = -1.0 / zeta
    power = 1.0 + 0j
    last = math.inf
    for c in coeffs:
        term = c * power
        size = abs(term)
        if size > last:
            break
        total += term
        if size <= 1e-17 * abs(total):
            break
        last = size
        power *= inv
    return total


def _ai_principal(z: complex):
    """(zeta, Ai e^{zeta}, Ai' e^{zeta}) for large |z| with |arg z| <= 2 pi / 3."""
    c, d = _coeffs()
    zeta = _zeta(z)
    q = cmath.sqrt(cmath.sqrt(z))
    ai = _asym_sum(c, zeta) / (2 * _SQRT_PI * q)
    aip = -_asym_sum(d, zeta) * q / (2 * _SQRT_PI)
    return zeta, ai, aip


def _ai_asymptotic(z: complex):
    """Unscaled (Ai, Ai') for large |z| anywhere in the plane."""
    if abs(cmath.phase(z)) <= 2 * math.pi / 3:
        return _ai_principal_unscaled(z)
    # Ai(z) = -w Ai(wz) - w^2 Ai(w^2 z); both rotated points lie in |arg| <= 2pi/3
    # up to rounding, where the principal expansion is still valid.
    a1, p1 = _ai_principal_unscaled(_W * z)
    a2, p2 = _ai_principal_unscaled(_W2 * z)
    return -_W * a1 - _W2 * a2, -_W2 * p1 - _W * p2


def _ai_principal_unscaled(z: complex):
    zeta, ai, aip = _ai_principal(z)
    e = cmath.exp(-zeta)
    return ai * e, aip * e


def _bi_asymptotic(z: complex):
    a1, p1 = _ai_asymptotic(_W * z)
    a2, p2 = _ai_asymptotic(_W2 * z)
    return (
        _E_PI6 * a1 + _E_PI6.conjugate() * a2,
        _E_5PI6 * p1 + _E_5PI6.conjugate() * p2,
    )


def airy_asymptotic(z: complex) -> AiryPair:
    """Large-argument branch on its own (used for the overlap check)."""
    z = complex(z)
    if z == 0:
        raise AiryRangeError("argument out of supported range: asymptotic branch needs z != 0")
    ai, aip = _ai_asymptotic(z)
    bi, bip = _bi_asymptotic(z)
    return AiryPair(ai, bi, aip, bip)


def _series_mp(z: complex):
    zm = _MP.mpc(z.real, z.imag)
    z3 = zm**3
    eps = _MP.mpf(10) ** (-_MP.dps)
    # f = sum 3^k (1/3)_k z^{3k}/(3k)!, g = sum 3^k (2/3)_k z^{3k+1}/(3k+1)!
    f = t = _MP.mpc(1)
    g = u = zm
    fp = tp = zm * zm / 2
    gp = up = _MP.mpc(1)
    k = 0
    while True:
        t = t * z3 / ((3 * k + 2) * (3 * k + 3))
        u = u * z3 / ((3 * k + 3) * (3 * k + 4))
        tp = tp * z3 / ((3 * k + 3) * (3 * k + 5))
        up = up * z3 / ((3 * k + 1) * (3 * k + 3))
        f += t
        g += u
        fp += tp
        gp += up
        k += 1
        scale = abs(f) + abs(g) + abs(fp) + abs(gp)
        if k > 3 and abs(t) + abs(u) + abs(tp) + abs(up) < eps * scale:
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    bi = _SQRT3 * (_AI0 * f - _AIP0 * g)
    bip = _SQRT3 * (_AI0 * fp - _AIP0 * gp)
    return ai, bi, aip, bip


def airy_series(z: complex) -> AiryPair:
    """Maclaurin branch on its own. Accurate for |z| up to about 12."""
    ai, bi, aip, bip = _series_mp(complex(z))
    return AiryPair(complex(ai), complex(bi), complex(aip), complex(bip))


def airy_eval(z: complex) -> AiryPair:
    """Ai, Bi and their derivatives at a complex point with |z| <= 100."""
    z = complex(z)
    r = abs(z)
    if not math.isfinite(r) or r > MAX_ARGUMENT:
        raise AiryRangeError(f"argument out of supported range: |z|={r:.6g} > {MAX_ARGUMENT:g}")
    if r <= Z_SWITCH:
        return airy_series(z)
    return airy_asymptotic(z)


def airy_ci(z: complex) -> complex:
    """Outgoing combination Ci = Bi + i Ai."""
    p = airy_eval(z)
    return p.bi + 1j * p.ai


def airy_ci_prime(z: complex) -> complex:
    p = airy_eval(z)
    return p.bi_prime + 1j * p.ai_prime


@dataclass(frozen=True)
class ScaledAiry:
    """Ai, Ai' times e^{zeta} and Bi, Bi' times e^{-zeta}; zeta = 2 z^{3/2} / 3."""

    zeta: complex
    ai: complex
    bi: complex
    ai_prime: complex
    bi_prime: complex


def airy_scaled(z: complex) -> ScaledAiry:
    """Exponentially scaled Airy functions for |arg z| <= pi/3, any modulus."""
    z = complex(z)
    if z == 0:
        p = airy_series(0j)
        return ScaledAiry(0j, p.ai, p.bi, p.ai_prime, p.bi_prime)
    if abs(cmath.phase(z)) > math.pi / 3 + 1e-12:
        raise AiryRangeError("argument out of supported range: scaled functions need |arg z| <= pi/3")
    zeta = _zeta(z)
    if abs(z) <= Z_SWITCH:
        p = airy_series(z)
        up, down = cmath.exp(zeta), cmath.exp(-zeta)
        return ScaledAiry(zeta, p.ai * up, p.bi * down, p.ai_prime * up, p.bi_prime * down)
    _, ai, aip = _ai_principal(z)
    # In this sector zeta(w z) = zeta(w^2 z) = -zeta(z), so the e^{zeta} factors
    # of the rotated Ai's are exactly the Bi scaling.
    _, a1, p1 = _ai_principal(_W * z)
    _, a2, p2 = _ai_principal(_W2 * z)
    bi = _E_PI6 * a1 + _E_PI6.conjugate() * a2
    bip = _E_5PI6 * p1 + _E_5PI6.conjugate() * p2
    return ScaledAiry(zeta, ai, bi, aip, bip)
