"""Closed-form baselines: the single-mode logistic growth law and the cosine law."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# gain_scale giving N_s(T)/N0 = 0.05 for N0 = 2e5, ns0 = 1 over one full beat
DEFAULT_GAIN_SCALE = math.log(0.05 / 0.95 * (2e5 - 1)) / 2e5


@dataclass(frozen=True)
class LogisticParams:
    """``dN_s/dt = G(t) (n0 - N_s) N_s`` with ``G = gain_scale * (1 + cos(delta_omega t + phi0))``.

    Time is measured in beat periods, so ``delta_omega = 2 pi``.
    """

    n0: float = 2e5
    gain_scale: float = DEFAULT_GAIN_SCALE
    ns0: float = 1.0

    def __post_init__(self):
        if not self.n0 > 1:
            raise ValueError(f"n0 must be > 1, got {self.n0}")
        if not self.gain_scale >= 0:
            raise ValueError(f"gain_scale must be >= 0, got {self.gain_scale}")
        if not 1 <= self.ns0 < self.n0:
            raise ValueError(f"ns0 must lie in [1, n0), got {self.ns0}")


def pump_integral(phi0, t_over_T):
    """``int_0^t (1 + cos(2 pi s + phi0)) ds`` with ``t`` in beat periods."""
    return t_over_T + (np.sin(2 * math.pi * t_over_T + phi0) - np.sin(phi0)) / (2 * math.pi)


def logistic_closed_form(p: LogisticParams, phi0, t_over_T):
    """Scattered atom count after ``t_over_T`` beat periods.

    Uses ``N_s = n0 / (1 + (n0/ns0 - 1) exp(-n0 int G))``, which saturates at
    ``n0`` instead of overflowing.
    """
    exponent = p.n0 * p.gain_scale * pump_integral(phi0, t_over_T)
    return p.n0 / (1.0 + (p.n0 / p.ns0 - 1.0) * np.exp(-exponent))


def eq6_prediction(amplitude: float, delta_phi01: float, baseline: float, phi0):
    """Cosine law ``-amplitude * cos(phi0 + delta_phi01) + baseline``.

    Phase matching of the two gratings gives ``delta_phi01 = pi/2``.
    """
    if amplitude < 0:
        raise ValueError(f"amplitude must be >= 0, got {amplitude}")
    return -amplitude * np.cos(np.asarray(phi0) + delta_phi01) + baseline


def fit_fixed_offset(points, delta_phi01: float = math.pi / 2) -> tuple[float, float]:
    """Least-squares amplitude and baseline of the cosine law with the offset held fixed."""
    pts = np.asarray(list(points), dtype=float)
    basis = -np.cos(pts[:, 0] + delta_phi01)
    design = np.column_stack([basis, np.ones_like(basis)])
    (amplitude, baseline), *_ = np.linalg.lstsq(design, pts[:, 1], rcond=None)
    return float(amplitude), float(baseline)
