"""Complex resonance of the confined atom in a static field.

With y(x) = (2/F^2)^{1/3} (F x + e) the field-tilted free equation becomes the
Airy equation. The wall picks Ai(-y) Bi(-beta) - Bi(-y) Ai(-beta) on the left
(beta = y(-a)), and the outgoing condition picks Ci = Bi + i Ai on the right.
Matching at the delta gives the determinant condition

    2 Z pi Ci(s_a) [Ai(s_a) Bi(s_b) - Bi(s_a) Ai(s_b)] - (2F)^{1/3} Ci(s_b) = 0,

where s_a = -y(0) and s_b = -y(-a) = s_a + (2F)^{1/3} a.

For the fields of interest s_a is large (hundreds for Z = 10), so Bi
overflows and Ai underflows. The solver therefore works with the determinant
divided by Bi(s_b), written through exponentially scaled Airy functions:

    D_n = P(e) + i E_a Q(e),     E_a = exp(-4/3 s_a^{3/2}),

with P and Q of order one. When E_a underflows the resonance width is below
double resolution of the energy. Its logarithm is then taken from first-order
perturbation of the real root of P: log Gamma = log(2 Q / P') - 4/3 s_a^{3/2}.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .airy import airy_ci, airy_eval, airy_scaled
from .bound_state import solve_bound_state
from .core import AtomConfig, BoundState, ConfinedAtomError

DEFAULT_TOL = 1e-14
MAX_ITER = 100
NARROW_WIDTH = 1e-9
FIELD_WARN_FACTOR = 0.3


class FieldScalingError(ConfinedAtomError, ValueError):
    pass


@dataclass(frozen=True)
class ResonanceResult:
    """Complex energy of the field-dressed state.

    ``log_gamma`` stays finite when ``gamma`` underflows (deep tunnelling).
    """

    energy: complex
    stark_shift: float
    gamma: float
    log_gamma: float
    converged: bool
    residual: float
    iterations: int


def _check_field(F: float) -> None:
    if not F > 0:
        raise FieldScalingError("static-field scaling undefined: F must be positive")


def scaled_variable(x: float, energy: complex, F: float) -> complex:
    """y(x) = (2/F^2)^{1/3} (F x + e)."""
    _check_field(F)
    return (2.0 / F**2) ** (1.0 / 3.0) * (F * x + complex(energy))


def _arguments(energy: complex, cfg: AtomConfig, F: float):
    s_a = -scaled_variable(0.0, energy, F)
    s_b = None if cfg.isolated else s_a + (2 * F) ** (1.0 / 3.0) * cfg.a
    return s_a, s_b


def determinant(energy: complex, cfg: AtomConfig, F: float) -> complex:
    """The unscaled determinant; needs |s_a|, |s_b| <= 100 (see ``airy_eval``)."""
    s_a, s_b = _arguments(energy, cfg, F)
    if cfg.isolated:
        raise FieldScalingError("unscaled determinant diverges for the isolated atom; use normalized_determinant")
    pa, pb = airy_eval(s_a), airy_eval(s_b)
    ci_a = pa.bi + 1j * pa.ai
    ci_b = pb.bi + 1j * pb.ai
    return 2 * cfg.Z * math.pi * ci_a * (pa.ai * pb.bi - pa.bi * pb.ai) - (2 * F) ** (1.0 / 3.0) * ci_b


def _in_sector(s: complex) -> bool:
    return s != 0 and abs(cmath.phase(s)) <= math.pi / 3


def _zeta_gap(s_a: complex, s_b: complex) -> complex:
    # zeta(s_b) - zeta(s_a) without cancellation.
    ra, rb = cmath.sqrt(s_a), cmath.sqrt(s_b)
    return 2.0 / 3.0 * (s_b - s_a) * (s_b + ra * rb + s_a) / (ra + rb)


def _scaled_parts(energy: complex, cfg: AtomConfig, F: float):
    """(P, Q, zeta_a) with normalized determinant P + i exp(-2 zeta_a) Q."""
    s_a, s_b = _arguments(energy, cfg, F)
    sa = airy_scaled(s_a)
    c = (2 * F) ** (1.0 / 3.0)
    if cfg.isolated:
        inner = sa.ai
        rho_gap = 0j
    else:
        sb = airy_scaled(s_b)
        rho = sb.ai / sb.bi
        rho_gap = rho * cmath.exp(-2 * _zeta_gap(s_a, s_b))
        inner = sa.ai - sa.bi * rho_gap
    p = 2 * cfg.Z * math.pi * sa.bi * inner - c
    q = 2 * cfg.Z * math.pi * sa.ai * inner - c * rho_gap
    return p, q, sa.zeta


def normalized_determinant(energy: complex, cfg: AtomConfig, F: float) -> complex:
    """Determinant divided by Bi(s_b) (by Bi(s_a) e^{zeta_b - zeta_a} when isolated).

    Finite for any field; shares its zeros with ``determinant``.
    """
    s_a, s_b = _arguments(energy, cfg, F)
    if _in_sector(s_a) and (s_b is None or _in_sector(s_b)):
        p, q, zeta_a = _scaled_parts(energy, cfg, F)
        return p + 1j * cmath.exp(-2 * zeta_a) * q
    if cfg.isolated:
        pa = airy_eval(s_a)
        return 2 * cfg.Z * math.pi * airy_ci(s_a) * pa.ai - (2 * F) ** (1.0 / 3.0)
    return determinant(energy, cfg, F) / airy_eval(s_b).bi


def asymptotic_stark_shift(bs: BoundState, F: float) -> float:
    """-5 F^2 / (8 k_b^4), the isolated-atom weak-field shift."""
    if F < 0:
        raise ValueError("field strength must be non-negative")
    if F == 0:
        return 0.0
    return -5.0 * F * F / (8.0 * bs.k_b**4)


def asymptotic_log_ionization_rate(bs: BoundState, cfg: AtomConfig, F: float) -> float:
    if F == 0:
        return -math.inf
    k = bs.k_b
    return math.log(k**3 / cfg.Z) - 2 * k**3 / (3 * F)


def asymptotic_ionization_rate(bs: BoundState, cfg: AtomConfig, F: float) -> float:
    """(k_b^3 / Z) exp(-2 k_b^3 / (3F)); zero at F = 0."""
    if F < 0:
        raise ValueError("field strength must be non-negative")
    return math.exp(asymptotic_log_ionization_rate(bs, cfg, F))


def _secant(f, x0: complex, x1: complex, tol: float):
    f0, f1 = f(x0), f(x1)
    it = 0
    for it in range(1, MAX_ITER + 1):
        if f1 == f0:
            break
        step = -f1 * (x1 - x0) / (f1 - f0)
        x2 = x1 + step
        f2 = f(x2)
        halvings = 0
        while not abs(f2) < abs(f1) and halvings < 30 and abs(step) > tol * max(1.0, abs(x1)):
            step *= 0.5
            x2 = x1 + step
            f2 = f(x2)
            halvings += 1
        x0, f0, x1, f1 = x1, f1, x2, f2
        if abs(x1 - x0) <= tol * max(1.0, abs(x1)) or f1 == 0:
            return x1, abs(f1), it, True
    return x1, abs(f1), it, False


def _p_derivative(energy: float, cfg: AtomConfig, F: float, n: int = 16) -> float:
    # dP/de from the mean over a small circle (Cauchy's formula with the
    # trapezoid rule, exact up to order n). A complex step would be lost in
    # the rotations e^{+-2 pi i/3} z of the Airy connection formulas.
    c = (2.0 / F**2) ** (1.0 / 3.0)
    s_a = abs(_arguments(energy, cfg, F)[0])
    r = 0.05 / (c * (1.0 + math.sqrt(s_a)))
    total = 0j
    for j in range(n):
        w = cmath.exp(2j * math.pi * (j + 0.5) / n)
        p, _, _ = _scaled_parts(energy + r * w, cfg, F)
        total += p / w
    return (total / (n * r)).real


def _log_width_perturbative(energy: float, cfg: AtomConfig, F: float) -> Optional[float]:
    # Gamma = 2 exp(-2 zeta_a) Q / P' at the real root of P.
    dp = _p_derivative(energy, cfg, F)
    _, q, zeta_a = _scaled_parts(complex(energy), cfg, F)
    ratio = 2 * q.real / dp
    if not ratio > 0:
        return None
    return math.log(ratio) - 2 * zeta_a.real


def solve_resonance(
    cfg: AtomConfig, F: float, guess: Optional[complex] = None, tol: float = DEFAULT_TOL
) -> ResonanceResult:
    """Complex root of the determinant condition, continued from the bound state."""
    bs = solve_bound_state(cfg)
    if F == 0:
        return ResonanceResult(complex(bs.energy), 0.0, 0.0, -math.inf, True, 0.0, 0)
    _check_field(F)
    if F > FIELD_WARN_FACTOR * bs.k_b**3:
        warnings.warn(
            f"F={F:g} exceeds {FIELD_WARN_FACTOR} k_b^3; the resonance may be too broad for the continuation",
            RuntimeWarning,
            stacklevel=2,
        )
    if guess is None:
        guess = complex(bs.energy, -0.5 * asymptotic_ionization_rate(bs, cfg, F))
    f = lambda e: normalized_determinant(e, cfg, F)  # noqa: E731
    # Second secant point just below: the ground-state shift is negative.
    x1 = guess - 1e-7 * max(abs(guess), 1e-3)
    root, resid, iters, ok = _secant(f, complex(guess), x1, tol)
    gamma = -2 * root.imag
    log_gamma = math.log(gamma) if gamma > 0 else -math.inf
    if ok and abs(root.imag) < NARROW_WIDTH * abs(root):
        s_a, s_b = _arguments(root.real, cfg, F)
        if _in_sector(s_a) and (s_b is None or _in_sector(s_b)):
            lg = _log_width_perturbative(root.real, cfg, F)
            if lg is not None:
                log_gamma = lg
                gamma = math.exp(lg)
    return ResonanceResult(
        energy=root,
        stark_shift=root.real - bs.energy,
        gamma=gamma,
        log_gamma=log_gamma,
        converged=ok,
        residual=resid,
        iterations=iters,
    )
