import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superrad.analysis import (
    FitError,
    backward_rate_eq4,
    circular_distance,
    fit_phase_response,
    grating_diagnostics,
    population,
    wrap_pi,
)
from superrad.model import ModeField, PumpConfig, SpatialGrid, SystemState, seeded_initial_state
from superrad.solver import rhs, simulate

from conftest import random_state

angles = st.floats(-math.pi, math.pi)


def test_population_examples(default_cfg):
    grid = default_cfg.grid
    assert population(ModeField((1, 1), np.zeros(grid.n_points), grid)) == 0
    state = seeded_initial_state(default_cfg)
    assert population(state.psi00) == pytest.approx(1.0, abs=1e-12)
    assert population(state.psi11) == pytest.approx(5e-6, rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(alpha=angles)
def test_population_phase_invariant(alpha):
    rng = np.random.default_rng(3)
    f = random_state(rng).psi11
    assert population(f.scaled(np.exp(1j * alpha))) == pytest.approx(population(f), rel=1e-13)


def test_wrap_pi_branch():
    assert wrap_pi(-math.pi) == math.pi
    assert wrap_pi(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_pi(0.5) == 0.5


def test_diagnostics_zero_seed_is_flagged(default_cfg):
    state = seeded_initial_state(replace(default_cfg, seed_backward=0))
    d = grating_diagnostics(state)
    assert d.c01 == 0 and not d.valid and d.delta_phi01 == 0.0


def test_diagnostics_real_fields_have_zero_phase(default_cfg):
    d = grating_diagnostics(seeded_initial_state(default_cfg))
    assert d.valid
    assert d.c01.real > 0 and d.delta_phi01 == pytest.approx(0.0, abs=1e-12)


def test_diagnostics_match_double_sum_definition(rng):
    state = random_state(rng, n=40)
    a0, a1, am = state.as_array()
    h = state.grid.spacing
    # C01 = sum_j psi00 psim1m1* (trapezoid tail of psi00 psi11*)
    f = a0 * a1.conj()
    tail = np.array([np.trapezoid(f[j:], dx=h) for j in range(40)])
    assert grating_diagnostics(state).c01 == pytest.approx(np.sum(a0 * am.conj() * tail) * h, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(a0=angles, a1=angles, am=angles, common=angles)
def test_delta_phi_rotation_law(a0, a1, am, common):
    rng = np.random.default_rng(11)
    state = random_state(rng, n=48)
    d = grating_diagnostics(state)
    y = state.as_array()
    # psi = |psi| exp(-i phi): rotating psi by exp(i a) lowers phi by a
    rot = y * np.exp(1j * np.array([a0, a1, am]))[:, None]
    d_rot = grating_diagnostics(SystemState.from_array(state.tau, rot, state.grid))
    expected_shift = -(2 * a0 - a1 - am)
    assert circular_distance(d_rot.delta_phi01, d.delta_phi01 + expected_shift) < 1e-9
    common_rot = SystemState.from_array(state.tau, y * np.exp(1j * common), state.grid)
    assert abs(grating_diagnostics(common_rot).c01) == pytest.approx(abs(d.c01), rel=1e-12)


def test_backward_rate_trivial_cases(default_cfg, rng):
    state = seeded_initial_state(replace(default_cfg, seed_forward=0, seed_backward=0))
    assert backward_rate_eq4(state, default_cfg.pump) == 0
    node = random_state(rng, tau=0.0)
    assert backward_rate_eq4(node, PumpConfig(chi0=4.0, phi0=math.pi)) == pytest.approx(0.0, abs=1e-12)


def test_backward_rate_equals_solver_norm_rate(rng):
    pump = PumpConfig(chi0=2.0, phi0=0.9)
    for _ in range(5):
        state = random_state(rng)
        dy = rhs(state, pump)
        direct = 2 * np.sum((state.psim1m1.values.conj() * dy[2]).real) * state.grid.spacing
        assert backward_rate_eq4(state, pump) == pytest.approx(direct, rel=1e-11)


def test_expanded_rate_identity():
    """The term-by-term cosine expansion agrees with the compact rate for space-independent phases."""
    grid = SpatialGrid.symmetric(20.0, 200)
    env = np.clip(1 - (grid.xi / 15) ** 2, 0, None)
    rng = np.random.default_rng(5)
    for _ in range(10):
        ph = rng.uniform(-math.pi, math.pi, 3)
        mags = rng.uniform(0.1, 1.0, 3)
        y = np.array([m * env * np.exp(-1j * p) for m, p in zip(mags, ph)])
        tau = rng.uniform(0, math.pi)
        pump = PumpConfig(chi0=rng.uniform(0.5, 3), phi0=rng.uniform(0, 2 * math.pi))
        state = SystemState.from_array(tau, y, grid)
        d = grating_diagnostics(state)
        assert abs(np.angle(d.cm10)) < 1e-12
        dphi, phi0, c01, cm10 = d.delta_phi01, pump.phi0, abs(d.c01), abs(d.cm10)
        expanded = -pump.chi0 * (
            c01 * (2 * math.cos(2 * tau - dphi) + math.cos(phi0 + dphi) + math.cos(4 * tau + phi0 - dphi))
            + 2 * cm10 * (1 + math.cos(2 * tau + phi0))
        )
        assert backward_rate_eq4(state, pump) == pytest.approx(expanded, rel=1e-10, abs=1e-14)
        assert dphi == pytest.approx(wrap_pi(2 * ph[0] - ph[1] - ph[2]), abs=1e-10)


def test_rate_integrates_to_population_change(default_cfg):
    cfg = default_cfg.with_phi0(math.pi / 2)
    traj = simulate(cfg, sample_every=1, snapshot_every=1)
    rates = np.array([backward_rate_eq4(s, cfg.pump) for s in traj.snapshots])
    integral = np.trapezoid(rates, traj.taus)
    change = traj.backward[-1] - traj.backward[0]
    assert integral == pytest.approx(change, rel=1e-2)


def test_fit_exact_sinusoid():
    phis = np.arange(12) * 2 * math.pi / 12
    y = -np.cos(phis + math.pi / 2) + 2
    fit = fit_phase_response(zip(phis, y))
    assert fit.amplitude == pytest.approx(1, abs=1e-10)
    assert fit.offset == pytest.approx(math.pi / 2, abs=1e-10)
    assert fit.baseline == pytest.approx(2, abs=1e-10)
    assert fit.r_squared == pytest.approx(1, abs=1e-10)
    assert fit.maximizer == pytest.approx(math.pi / 2, abs=1e-10)
    assert fit.minimizer == pytest.approx(3 * math.pi / 2, abs=1e-10)
    assert not fit.degenerate


def test_fit_constant_is_degenerate():
    fit = fit_phase_response((p, 0.3) for p in np.linspace(0, 2 * math.pi, 8, endpoint=False))
    assert fit.degenerate and fit.amplitude == 0 and math.isnan(fit.r_squared)


def test_fit_input_errors():
    with pytest.raises(FitError):
        fit_phase_response([(0.1 * k, k) for k in range(5)])
    with pytest.raises(FitError):
        fit_phase_response([(0.1 * k, k) for k in range(10)])  # spans only 0.9 rad


@settings(max_examples=50, deadline=None)
@given(
    amp=st.floats(1e-6, 10.0),
    delta=st.floats(-math.pi + 1e-6, math.pi),
    base=st.floats(-5.0, 5.0),
    n=st.integers(6, 40),
)
def test_fit_recovers_noiseless_sinusoids(amp, delta, base, n):
    phis = np.linspace(0, 2 * math.pi, n, endpoint=False)
    fit = fit_phase_response(zip(phis, -amp * np.cos(phis + delta) + base))
    assert fit.amplitude == pytest.approx(amp, rel=1e-8, abs=1e-12)
    assert circular_distance(fit.offset, delta) < 1e-6
    assert fit.baseline == pytest.approx(base, abs=1e-8 * max(1, amp))
    assert fit.r_squared > 1 - 1e-9


def test_fit_report_and_curve(tmp_path):
    phis = np.arange(8) * math.pi / 4
    fit = fit_phase_response(zip(phis, 1 - np.cos(phis)))
    text = fit.report()
    keys = [line.split(" = ")[0] for line in text.splitlines()]
    assert keys == ["amplitude", "offset", "baseline", "quality", "maximizer", "minimizer", "degenerate"]
    fit.write_curve(tmp_path / "c.csv", n_samples=5)
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert rows[0] == "phi0,fitted" and len(rows) == 6
