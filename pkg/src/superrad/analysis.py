"""Observables extracted from states and trajectories."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .model import ModeField, PumpConfig, SystemState, pump_beat
from .quadrature import suffix_integral

TWO_PI = 2 * math.pi


class FitError(ValueError):
    pass


def wrap_pi(angle: float) -> float:
    """Map an angle onto (-pi, pi]."""
    a = math.remainder(angle, TWO_PI)
    return math.pi if a == -math.pi else a


def population(field: ModeField) -> float:
    return field.norm()


@dataclass(frozen=True)
class GratingDiagnostics:
    """Grating correlators ``C_{0,1}``, ``C_{-1,0}`` and the phase ``-arg C_{0,1}``.

    ``valid`` is False when ``C_{0,1}`` vanishes; ``delta_phi01`` is then 0.
    """

    tau: float
    c01: complex
    cm10: complex
    delta_phi01: float
    valid: bool


def grating_diagnostics_array(y: np.ndarray, tau: float, spacing: float) -> GratingDiagnostics:
    a0, a1, am = y
    outer = a0 * am.conj()
    c01 = complex(np.sum(outer * suffix_integral(a0 * a1.conj(), spacing)) * spacing)
    cm10 = complex(np.sum(outer * suffix_integral(am * a0.conj(), spacing)) * spacing)
    valid = c01 != 0
    delta = wrap_pi(-math.atan2(c01.imag, c01.real)) if valid else 0.0
    return GratingDiagnostics(float(tau), c01, cm10, delta, valid)


def grating_diagnostics(state: SystemState) -> GratingDiagnostics:
    return grating_diagnostics_array(state.as_array(), state.tau, state.grid.spacing)


def backward_rate_eq4(state: SystemState, pump: PumpConfig) -> float:
    """Rate of change of the backward population, ``-2 chi Re[C01 exp(2i tau) + C-10]``."""
    d = grating_diagnostics(state)
    chi = pump_beat(pump, state.tau)
    return float(-2.0 * chi * (d.c01 * np.exp(2j * state.tau) + d.cm10).real)


@dataclass(frozen=True)
class PhaseFit:
    """Least-squares fit of ``y = -amplitude * cos(phi0 + offset) + baseline``."""

    amplitude: float
    offset: float
    baseline: float
    r_squared: float
    maximizer: float
    minimizer: float
    degenerate: bool = False

    def __call__(self, phi0):
        return -self.amplitude * np.cos(np.asarray(phi0) + self.offset) + self.baseline

    def report(self) -> str:
        lines = [
            f"amplitude = {self.amplitude!r}",
            f"offset = {self.offset!r}",
            f"baseline = {self.baseline!r}",
            f"quality = {self.r_squared!r}",
            f"maximizer = {self.maximizer!r}",
            f"minimizer = {self.minimizer!r}",
            f"degenerate = {str(self.degenerate).lower()}",
        ]
        return "\n".join(lines) + "\n"

    def write_curve(self, path, n_samples: int = 181) -> None:
        phis = np.linspace(0.0, TWO_PI, n_samples)
        rows = ["phi0,fitted"] + [f"{p!r},{v!r}" for p, v in zip(phis.tolist(), self(phis).tolist())]
        Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def _covers_period(phis: np.ndarray) -> bool:
    angles = np.unique(np.mod(phis, TWO_PI))
    if angles.size < 3:
        return False
    gaps = np.diff(np.concatenate([angles, [angles[0] + TWO_PI]]))
    return bool(gaps.max() < math.pi)


def fit_phase_response(points: Iterable[tuple[float, float]]) -> PhaseFit:
    """Fit ``y = -A cos(phi0 + delta) + B`` through the linear form ``p cos + q sin + B``.

    Needs at least 6 points whose phases leave no gap of pi or more on the
    circle.  Constant data gives a degenerate fit with ``A = 0`` and NaN quality.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 6:
        raise FitError(f"need at least 6 (phi0, value) points, got {len(pts)}")
    phi, y = pts[:, 0], pts[:, 1]
    if not np.all(np.isfinite(pts)):
        raise FitError("non-finite input")
    if not _covers_period(phi):
        raise FitError("phi0 samples do not span a full period")

    scale = np.max(np.abs(y))
    if np.ptp(y) <= 1e-13 * scale or scale == 0:
        nan = float("nan")
        return PhaseFit(0.0, 0.0, float(np.mean(y)), nan, nan, nan, degenerate=True)

    design = np.column_stack([np.cos(phi), np.sin(phi), np.ones_like(phi)])
    p, q, b = np.linalg.solve(design.T @ design, design.T @ y)
    residual = y - design @ np.array([p, q, b])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(residual**2)) / ss_tot

    amplitude = math.hypot(p, q)
    offset = wrap_pi(math.atan2(q, -p))
    return PhaseFit(
        amplitude=amplitude,
        offset=offset,
        baseline=float(b),
        r_squared=r2,
        maximizer=(math.pi - offset) % TWO_PI,
        minimizer=(TWO_PI - offset) % TWO_PI,
    )


def circular_distance(a: float, b: float) -> float:
    """Smallest absolute angle between two phases."""
    return abs(wrap_pi(a - b))


def circular_spread(angles: Sequence[float]) -> float:
    """Largest pairwise circular distance within a set of phases."""
    angles = list(angles)
    return max((circular_distance(a, b) for a in angles for b in angles), default=0.0)
