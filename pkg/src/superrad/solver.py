"""Three-mode Maxwell-Schroedinger evolution.

The end-fire field is slaved to the matter-wave gratings,

    S(xi) = int_xi^inf [psi00 psi11* + psim1m1 psi00* exp(-2i tau)] dxi',

and the side modes exchange atoms with the condensate through it:

    d psi11 / dtau   = +chi S* psi00
    d psim1m1 / dtau = -chi S psi00 exp(+2i tau)
    d psi00 / dtau   = -chi S psi11 + chi S* psim1m1 exp(-2i tau)

with ``chi = pump_beat(pump, tau)``.  The last two equations follow from the
first by Hermitian conjugation, which keeps ``sum |psi|^2`` constant at every
grid point.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import GratingDiagnostics, grating_diagnostics_array
from .model import PumpConfig, SimConfig, SystemState, seeded_initial_state
from .quadrature import suffix_integral

TRAJECTORY_COLUMNS = ("tau", "N00", "N11", "Nm1m1", "total", "C01_abs", "C01_arg", "Cm10_abs")


class NumericalBlowupError(FloatingPointError):
    def __init__(self, tau: float):
        super().__init__(f"non-finite field values after the step ending at tau = {tau!r}")
        self.tau = tau


@dataclass(frozen=True, eq=False)
class EndfireField:
    values: np.ndarray
    tau: float


def _endfire(y: np.ndarray, tau: float, spacing: float) -> np.ndarray:
    a0, a1, am = y
    source = a0 * a1.conj() + am * a0.conj() * np.exp(-2j * tau)
    return suffix_integral(source, spacing)


def compute_endfire(state: SystemState) -> EndfireField:
    """Scaled end-fire envelope ``S`` as a reverse cumulative trapezoid sum."""
    return EndfireField(_endfire(state.as_array(), state.tau, state.grid.spacing), state.tau)


def _derivative(y: np.ndarray, tau: float, pump: PumpConfig, spacing: float) -> np.ndarray:
    a0, a1, am = y
    chi = pump.chi0 * (1.0 + math.cos(pump.beat_multiplier * tau + pump.phi0))
    rot = cmath.exp(-2j * tau)
    s = suffix_integral(a0 * a1.conj() + am * a0.conj() * rot, spacing)
    sc = s.conj()
    out = np.empty_like(y)
    out[0] = chi * (sc * am * rot - s * a1)
    out[1] = chi * sc * a0
    out[2] = (-chi * rot.conjugate()) * s * a0
    return out


def rhs(state: SystemState, pump: PumpConfig) -> np.ndarray:
    """Time derivative of the three envelopes as a ``(3, n_points)`` array.

    Rows are ordered like :meth:`SystemState.as_array`.
    """
    return _derivative(state.as_array(), state.tau, pump, state.grid.spacing)


def _rk4(y: np.ndarray, tau: float, h: float, pump: PumpConfig, spacing: float) -> np.ndarray:
    k1 = _derivative(y, tau, pump, spacing)
    k2 = _derivative(y + 0.5 * h * k1, tau + 0.5 * h, pump, spacing)
    k3 = _derivative(y + 0.5 * h * k2, tau + 0.5 * h, pump, spacing)
    k4 = _derivative(y + h * k3, tau + h, pump, spacing)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(state: SystemState, pump: PumpConfig, dtau: float) -> SystemState:
    if not dtau > 0:
        raise ValueError(f"dtau must be > 0, got {dtau}")
    with np.errstate(over="ignore", invalid="ignore"):
        y = _rk4(state.as_array(), state.tau, dtau, pump, state.grid.spacing)
    if not np.all(np.isfinite(y)):
        raise NumericalBlowupError(state.tau + dtau)
    return SystemState.from_array(state.tau + dtau, y, state.grid)


@dataclass
class Trajectory:
    taus: np.ndarray
    populations: np.ndarray  # (n_samples, 3): N00, N11, Nm1m1
    diagnostics: list[GratingDiagnostics]
    final_state: SystemState
    snapshots: list[SystemState] = field(default_factory=list)

    @property
    def totals(self) -> np.ndarray:
        return self.populations.sum(axis=1)

    @property
    def backward(self) -> np.ndarray:
        return self.populations[:, 2]

    @property
    def forward(self) -> np.ndarray:
        return self.populations[:, 1]

    @property
    def condensate(self) -> np.ndarray:
        return self.populations[:, 0]

    def max_relative_drift(self) -> float:
        totals = self.totals
        if totals[0] == 0:
            return 0.0
        return float(np.max(np.abs(totals - totals[0])) / totals[0])

    def rows(self):
        for tau, pops, diag in zip(self.taus, self.populations, self.diagnostics):
            yield (
                float(tau),
                float(pops[0]),
                float(pops[1]),
                float(pops[2]),
                float(pops.sum()),
                abs(diag.c01),
                float(np.angle(diag.c01)),
                abs(diag.cm10),
            )

    def to_csv(self, path=None) -> str:
        """Write one row per sample; returns the CSV text.  Floats use round-trip repr."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for row in self.rows():
            writer.writerow([repr(v) for v in row])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text


def simulate(cfg: SimConfig, sample_every: int = 1, snapshot_every: int | None = None) -> Trajectory:
    """Integrate the seeded state from ``tau = 0`` to ``cfg.tau_end`` with fixed-step RK4.

    Samples are taken at ``tau = 0``, every ``sample_every`` steps and at the
    final step.  Snapshots of the full state are kept every ``snapshot_every``
    steps if requested.
    """
    if sample_every < 1:
        raise ValueError(f"sample_every must be >= 1, got {sample_every}")
    if cfg.dtau > cfg.tau_end:
        raise ValueError(f"dtau = {cfg.dtau} exceeds tau_end = {cfg.tau_end}")

    state = seeded_initial_state(cfg)
    grid, pump = cfg.grid, cfg.pump
    h, spacing, n_steps = cfg.step, grid.spacing, cfg.n_steps
    y = state.as_array()

    taus, pops, diags, snaps = [], [], [], []

    def record(i, tau, y):
        taus.append(tau)
        pops.append(np.sum(np.abs(y) ** 2, axis=1) * spacing)
        diags.append(grating_diagnostics_array(y, tau, spacing))
        if snapshot_every and i % snapshot_every == 0:
            snaps.append(SystemState.from_array(tau, y.copy(), grid))

    record(0, 0.0, y)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(1, n_steps + 1):
            y = _rk4(y, (i - 1) * h, h, pump, spacing)
            tau = i * h
            if not np.all(np.isfinite(y)):
                raise NumericalBlowupError(tau)
            if i % sample_every == 0 or i == n_steps:
                record(i, tau, y)

    return Trajectory(
        taus=np.array(taus),
        populations=np.array(pops),
        diagnostics=diags,
        final_state=SystemState.from_array(n_steps * h, y, grid),
        snapshots=snaps,
    )


def simulate_final(cfg: SimConfig) -> np.ndarray:
    """Populations (N00, N11, Nm1m1) at ``tau_end`` only."""
    traj = simulate(cfg, sample_every=max(1, cfg.n_steps))
    return traj.populations[-1]


__all__ = [
    "TRAJECTORY_COLUMNS",
    "EndfireField",
    "NumericalBlowupError",
    "Trajectory",
    "compute_endfire",
    "rhs",
    "simulate",
    "simulate_final",
    "step_rk4",
]
