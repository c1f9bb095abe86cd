import math

import numpy as np
import pytest

from superrad.analysis import fit_phase_response
from superrad.reduced import (
    LogisticParams,
    eq6_prediction,
    fit_fixed_offset,
    logistic_closed_form,
    pump_integral,
)

PHI_GRID = np.arange(16) * 2 * math.pi / 16


def rk4_logistic(p: LogisticParams, phi0: float, t_end: float, n_steps: int) -> float:
    """Fixed-step RK4 on dN/dt = G(t) (n0 - N) N; the closed form is not used."""

    def f(t, n):
        g = p.gain_scale * (1 + math.cos(2 * math.pi * t + phi0))
        return g * (p.n0 - n) * n

    h, n, t = t_end / n_steps, p.ns0, 0.0
    for _ in range(n_steps):
        k1 = f(t, n)
        k2 = f(t + h / 2, n + h / 2 * k1)
        k3 = f(t + h / 2, n + h / 2 * k2)
        k4 = f(t + h, n + h * k3)
        n += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return n


def test_default_gain_gives_five_percent():
    p = LogisticParams()
    assert logistic_closed_form(p, 0.0, 1.0) / p.n0 == pytest.approx(0.05, rel=1e-12)


def test_no_gain_keeps_seed():
    assert logistic_closed_form(LogisticParams(gain_scale=0.0, ns0=3.0), 1.2, 0.7) == pytest.approx(3.0)


def test_large_gain_saturates_without_overflow():
    p = LogisticParams(gain_scale=1.0)
    with np.errstate(over="raise", invalid="raise"):
        assert logistic_closed_form(p, 0.3, 1.0) == pytest.approx(p.n0, rel=1e-12)


def test_unit_seed_matches_printed_form():
    p = LogisticParams(n0=1e3, gain_scale=2e-3)
    x = p.n0 * p.gain_scale * pump_integral(0.4, 0.6)
    printed = p.n0 * math.exp(x) / (p.n0 - 1 + math.exp(x))
    assert logistic_closed_form(p, 0.4, 0.6) == pytest.approx(printed, rel=1e-13)


@pytest.mark.parametrize("phi0", [0.0, 1.0, math.pi, 4.5])
@pytest.mark.parametrize("t_over_T", [0.25, 1.0, 1.7])
def test_closed_form_solves_ode(phi0, t_over_T):
    p = LogisticParams(ns0=2.0)
    oracle = rk4_logistic(p, phi0, t_over_T, 20000)
    assert logistic_closed_form(p, phi0, t_over_T) == pytest.approx(oracle, rel=1e-8)


def test_full_cycle_is_phase_independent():
    vals = logistic_closed_form(LogisticParams(), PHI_GRID, 1.0)
    assert np.ptp(vals) / vals.mean() < 1e-12
    for phi0 in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2):
        assert logistic_closed_form(LogisticParams(), phi0, 1.0) == pytest.approx(vals[0], rel=1e-12)


def test_partial_cycle_depends_on_phase():
    vals = logistic_closed_form(LogisticParams(), PHI_GRID, 1 / 3)
    assert np.ptp(vals) / vals.mean() > 1e-3


def test_params_validation():
    with pytest.raises(ValueError):
        LogisticParams(n0=1.0)
    with pytest.raises(ValueError):
        LogisticParams(gain_scale=-1.0)
    with pytest.raises(ValueError):
        LogisticParams(ns0=0.5)


def test_cosine_law_extrema():
    assert eq6_prediction(0.2, math.pi / 2, 0.5, math.pi / 2) == pytest.approx(0.7)
    assert eq6_prediction(0.2, math.pi / 2, 0.5, 3 * math.pi / 2) == pytest.approx(0.3)
    dense = np.linspace(0, 2 * math.pi, 4001)
    y = eq6_prediction(1.0, math.pi / 2, 0.0, dense)
    assert dense[np.argmax(y)] == pytest.approx(math.pi / 2, abs=2e-3)
    assert dense[np.argmin(y)] == pytest.approx(3 * math.pi / 2, abs=2e-3)
    with pytest.raises(ValueError):
        eq6_prediction(-1.0, 0.0, 0.0, 0.0)


def test_cosine_law_round_trips_through_fit():
    phis = PHI_GRID
    data = 0.01 + 0.004 * np.sin(phis) + 0.002 * np.cos(3 * phis)
    fit = fit_phase_response(zip(phis, data))
    assert np.allclose(eq6_prediction(fit.amplitude, fit.offset, fit.baseline, phis), fit(phis), atol=1e-15)


def test_fixed_offset_fit():
    phis = PHI_GRID
    amp, base = fit_fixed_offset(zip(phis, eq6_prediction(0.3, math.pi / 2, 1.2, phis)))
    assert amp == pytest.approx(0.3) and base == pytest.approx(1.2)
