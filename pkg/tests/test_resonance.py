import math
import warnings

import numpy as np
import pytest

from confined_atom.bound_state import mean_position, solve_bound_state
from confined_atom.core import AtomConfig
from confined_atom.dalgarno_lewis import stark_shift_exact
from confined_atom.resonance import (
    FieldScalingError,
    asymptotic_ionization_rate,
    asymptotic_log_ionization_rate,
    asymptotic_stark_shift,
    determinant,
    normalized_determinant,
    scaled_variable,
    solve_resonance,
)

# Complex roots of the isolated-atom condition found with 50-digit mpmath
# arithmetic (independent Airy implementation, plain secant on the unscaled
# determinant).
MPMATH_ROOTS = {
    0.02: (-0.50025112217830240, 3.2251300323401424e-15),
    0.025: (None, 2.5114232198083702e-12),
    0.05: (None, 1.4766533972744975e-06),
}


@pytest.mark.parametrize("F", sorted(MPMATH_ROOTS))
def test_isolated_widths_against_mpmath(F):
    re_ref, gamma_ref = MPMATH_ROOTS[F]
    res = solve_resonance(AtomConfig(1.0), F)
    assert res.converged
    assert res.gamma == pytest.approx(gamma_ref, rel=1e-7)
    if re_ref is not None:
        # Element-wise Airy accuracy (about 1e-13) limits the real part.
        assert res.energy.real == pytest.approx(re_ref, rel=1e-11)


def test_root_of_unscaled_determinant():
    cfg = AtomConfig(1.0, 2.0)
    res = solve_resonance(cfg, 0.1)
    assert res.converged
    assert abs(determinant(res.energy, cfg, 0.1)) < 1e-9
    assert abs(normalized_determinant(res.energy, cfg, 0.1)) < 1e-12


def test_zero_field_returns_bound_state():
    cfg = AtomConfig(1.0, 2.0)
    res = solve_resonance(cfg, 0.0)
    assert res.energy == solve_bound_state(cfg).energy
    assert res.gamma == 0.0 and res.log_gamma == -math.inf


def test_weak_field_determinant_tends_to_bound_condition():
    # Away from the root |D_n| at the bound energy shrinks as F -> 0.
    cfg = AtomConfig(1.0, 2.0)
    e = solve_bound_state(cfg).energy
    vals = [abs(normalized_determinant(e, cfg, F)) for F in (0.1, 1e-2, 1e-3, 1e-4)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_width_grows_with_field():
    cfg = AtomConfig(1.0, 3.0)
    gammas = [solve_resonance(cfg, F).gamma for F in (0.03, 0.04, 0.06, 0.08, 0.1)]
    assert all(x < y for x, y in zip(gammas, gammas[1:]))


def test_log_width_slope_and_prefactor():
    cfg = AtomConfig(10.0, 0.2)
    bs = solve_bound_state(cfg)
    Fs = np.array([0.04, 0.05, 0.06, 0.08])
    logs = np.array([solve_resonance(cfg, F).log_gamma for F in Fs])
    slope = np.polyfit(1 / Fs, logs, 1)[0]
    assert slope == pytest.approx(-2 * bs.k_b**3 / 3, rel=1e-4)
    # Gamma itself underflows here; compare logarithms.
    log_ratio = logs[1] - asymptotic_log_ionization_rate(bs, cfg, 0.05)
    assert abs(log_ratio) < math.log(2)


@pytest.mark.parametrize("Z, a", [(1.0, 3.0), (2.0, 1.0), (10.0, 0.2)])
def test_second_order_shift_matches_exact_perturbation(Z, a):
    cfg = AtomConfig(Z, a)
    bs = solve_bound_state(cfg)
    F = 0.002 * bs.k_b**3
    res = solve_resonance(cfg, F)
    # Remove the first-order (permanent dipole) term before comparing.
    second = res.stark_shift + F * mean_position(bs, cfg)
    assert second == pytest.approx(stark_shift_exact(bs, cfg, F), rel=0.1)


def test_isolated_shift_matches_asymptotic():
    cfg = AtomConfig(1.0)
    bs = solve_bound_state(cfg)
    res = solve_resonance(cfg, 0.02)
    assert res.stark_shift == pytest.approx(asymptotic_stark_shift(bs, 0.02), rel=0.01)


def test_deep_tunnelling_keeps_log_width():
    res = solve_resonance(AtomConfig(10.0, 0.2), 0.05)
    assert res.gamma > 0 or math.isfinite(res.log_gamma)
    assert res.log_gamma < -1000


def test_strong_field_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        solve_resonance(AtomConfig(1.0, 3.0), 0.35)
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)


def test_field_scaling_errors():
    with pytest.raises(FieldScalingError, match="static-field scaling undefined"):
        scaled_variable(0.0, -0.5, 0.0)
    with pytest.raises(FieldScalingError):
        determinant(-0.5, AtomConfig(1.0), 0.1)
    assert asymptotic_stark_shift(solve_bound_state(AtomConfig(1.0)), 0.0) == 0.0
    assert asymptotic_ionization_rate(solve_bound_state(AtomConfig(1.0)), AtomConfig(1.0), 0.0) == 0.0
