"""Domain types, unit conventions and initial conditions.

Lengths are measured in ``xi = k_l * z`` and time in ``tau = 2 * omega_r * t``.
With the two pump components split by ``delta_omega = 4 * omega_r`` the pump
intensity beats as ``1 + cos(2 * tau + phi0)``, so one beat period is
``tau = pi``.  Mode norms are atom fractions: the condensate starts at 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

# Rb-87 D2 line; the pump is detuned by GHz only, irrelevant at this fidelity
WAVELENGTH = 780e-9
K_L = 2 * math.pi / WAVELENGTH
TF_RADIUS_AXIAL = 50e-6
TF_RADIUS_RADIAL = 5e-6
DELTA_OMEGA = 2 * math.pi * 15e3
PULSE_PERIOD = 2 * math.pi / DELTA_OMEGA
TOTAL_ATOMS = 2e5
G_REFERENCE = 1.5e6

# Calibrated by ``superrad calibrate`` (backward fraction 1e-2 at phi0 = pi/2).
CHI0_REFERENCE = 6.03

MODE_LABELS = ((0, 0), (1, 1), (-1, -1))


class ConfigError(ValueError):
    """A configuration value is out of its allowed range."""


def tau_from_time(t: float) -> float:
    """Convert a lab time in seconds to dimensionless ``tau``."""
    # delta_omega = 4 omega_r, tau = 2 omega_r t
    return 0.5 * DELTA_OMEGA * t


def time_from_tau(tau: float) -> float:
    return 2.0 * tau / DELTA_OMEGA


def chi0_for_coupling(g: float, chi0_ref: float = CHI0_REFERENCE) -> float:
    """Map a lab coupling factor ``g`` onto the dimensionless knob (``chi0 ~ g**2``)."""
    if g < 0:
        raise ConfigError(f"coupling factor must be >= 0, got {g}")
    return chi0_ref * (g / G_REFERENCE) ** 2


@dataclass(frozen=True)
class SpatialGrid:
    xi_min: float
    xi_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.xi_min) and math.isfinite(self.xi_max)):
            raise ConfigError("grid bounds must be finite")
        if not self.xi_min < self.xi_max:
            raise ConfigError(f"grid needs xi_min < xi_max, got {self.xi_min} >= {self.xi_max}")
        if int(self.n_points) != self.n_points or self.n_points < 16:
            raise ConfigError(f"grid needs an integer n_points >= 16, got {self.n_points}")

    @classmethod
    def symmetric(cls, xi_max: float, n_points: int) -> "SpatialGrid":
        return cls(-xi_max, xi_max, n_points)

    @property
    def spacing(self) -> float:
        return (self.xi_max - self.xi_min) / (self.n_points - 1)

    @property
    def xi(self) -> np.ndarray:
        return np.linspace(self.xi_min, self.xi_max, self.n_points)


@dataclass(frozen=True, eq=False)
class ModeField:
    """Complex envelope of one atomic side mode on a grid."""

    label: tuple[int, int]
    values: np.ndarray
    grid: SpatialGrid

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise ValueError(
                f"mode {self.label}: expected {self.grid.n_points} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"mode {self.label}: non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.spacing)

    def scaled(self, factor: complex) -> "ModeField":
        return ModeField(self.label, self.values * factor, self.grid)


@dataclass(frozen=True, eq=False)
class SystemState:
    tau: float
    psi00: ModeField
    psi11: ModeField
    psim1m1: ModeField

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        grids = {self.psi00.grid, self.psi11.grid, self.psim1m1.grid}
        if len(grids) != 1:
            raise ValueError("all three modes must share one grid")

    @property
    def grid(self) -> SpatialGrid:
        return self.psi00.grid

    @property
    def modes(self) -> tuple[ModeField, ModeField, ModeField]:
        return (self.psi00, self.psi11, self.psim1m1)

    def as_array(self) -> np.ndarray:
        """Stack the envelopes as a ``(3, n_points)`` array ordered (0,0), (1,1), (-1,-1)."""
        return np.stack([m.values for m in self.modes])

    @classmethod
    def from_array(cls, tau: float, y: np.ndarray, grid: SpatialGrid) -> "SystemState":
        return cls(
            tau,
            ModeField((0, 0), y[0], grid),
            ModeField((1, 1), y[1], grid),
            ModeField((-1, -1), y[2], grid),
        )

    def total_norm(self) -> float:
        return sum(m.norm() for m in self.modes)


@dataclass(frozen=True)
class PumpConfig:
    chi0: float = CHI0_REFERENCE
    phi0: float = 0.0
    beat_multiplier: float = 2.0

    def __post_init__(self):
        if not math.isfinite(self.chi0) or self.chi0 < 0:
            raise ConfigError(f"pump.chi0 must be finite and >= 0, got {self.chi0}")
        if not math.isfinite(self.phi0):
            raise ConfigError(f"pump.phi0 must be finite, got {self.phi0}")
        if self.beat_multiplier != 2.0:
            raise ConfigError("pump.beat_multiplier is fixed to 2 (delta_omega = 4 omega_r)")
        # store phi0 reduced to [0, 2pi)
        object.__setattr__(self, "phi0", float(self.phi0) % (2 * math.pi))


@dataclass(frozen=True)
class SimConfig:
    grid: SpatialGrid
    pump: PumpConfig = field(default_factory=PumpConfig)
    seed_forward: float = 1.0
    seed_backward: float = 1.0
    total_atoms: float = TOTAL_ATOMS
    tau_end: float = math.pi
    dtau: float = math.pi / 2000
    tf_half_length_xi: float = K_L * TF_RADIUS_AXIAL
    seed_phase_forward: float = 0.0
    seed_phase_backward: float = 0.0

    def __post_init__(self):
        if self.seed_forward < 0 or self.seed_backward < 0:
            raise ConfigError("seed counts must be >= 0")
        if not self.total_atoms > 0:
            raise ConfigError(f"total_atoms must be > 0, got {self.total_atoms}")
        if not (math.isfinite(self.tau_end) and self.tau_end > 0):
            raise ConfigError(f"tau_end must be > 0, got {self.tau_end}")
        if not self.dtau > 0:
            raise ConfigError(f"dtau must be > 0, got {self.dtau}")
        if self.dtau > self.tau_end / 100 * (1 + 1e-12):
            raise ConfigError(
                f"dtau = {self.dtau} is too coarse; need dtau <= tau_end/100 = {self.tau_end / 100}"
            )
        if not 0 < self.tf_half_length_xi <= self.grid.xi_max:
            raise ConfigError(
                f"tf_half_length_xi = {self.tf_half_length_xi} must lie in (0, grid.xi_max = {self.grid.xi_max}]"
            )
        for seed in (self.seed_forward, self.seed_backward):
            if seed / self.total_atoms > 1e-2:
                warnings.warn(
                    f"seed fraction {seed / self.total_atoms:.3g} is not small; "
                    "the seeded semiclassical picture assumes seed << total_atoms",
                    stacklevel=3,
                )

    def with_phi0(self, phi0: float) -> "SimConfig":
        return replace(self, pump=replace(self.pump, phi0=phi0))

    def with_chi0(self, chi0: float) -> "SimConfig":
        return replace(self, pump=replace(self.pump, chi0=chi0))

    @property
    def n_steps(self) -> int:
        """Number of RK4 steps; the step is shrunk so they land exactly on ``tau_end``."""
        return max(1, math.ceil(self.tau_end / self.dtau - 1e-9))

    @property
    def step(self) -> float:
        return self.tau_end / self.n_steps


def make_default_config() -> SimConfig:
    """The experimental scenario: one beat cycle, one-atom seeds, 2e5 atoms."""
    half = K_L * TF_RADIUS_AXIAL
    return SimConfig(grid=SpatialGrid.symmetric(1.2 * half, 512), tf_half_length_xi=half)


def thomas_fermi_profile(grid: SpatialGrid, half_length: float) -> ModeField:
    """Real, unit-norm condensate envelope with inverted-parabola density."""
    if not 0 < half_length <= grid.xi_max:
        raise ConfigError(f"half_length = {half_length} must lie in (0, {grid.xi_max}]")
    density = np.clip(1.0 - (grid.xi / half_length) ** 2, 0.0, None)
    psi = np.sqrt(density)
    psi /= math.sqrt(np.sum(density) * grid.spacing)
    return ModeField((0, 0), psi, grid)


def seeded_initial_state(cfg: SimConfig) -> SystemState:
    condensate = thomas_fermi_profile(cfg.grid, cfg.tf_half_length_xi)
    shape = condensate.values
    fwd = math.sqrt(cfg.seed_forward / cfg.total_atoms) * np.exp(1j * cfg.seed_phase_forward)
    bwd = math.sqrt(cfg.seed_backward / cfg.total_atoms) * np.exp(1j * cfg.seed_phase_backward)
    return SystemState(
        0.0,
        condensate,
        ModeField((1, 1), shape * fwd, cfg.grid),
        ModeField((-1, -1), shape * bwd, cfg.grid),
    )


def pump_beat(pump: PumpConfig, tau):
    """Effective real coupling ``chi0 * (1 + cos(2 tau + phi0))``; accepts arrays."""
    return pump.chi0 * (1.0 + np.cos(pump.beat_multiplier * tau + pump.phi0))
