"""Parameter sweeps over the simulator and the figure presets built on them."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import plotting
from .analysis import PhaseFit, fit_phase_response
from .model import (
    G_REFERENCE,
    ConfigError,
    SimConfig,
    chi0_for_coupling,
    make_default_config,
)
from .reduced import LogisticParams, eq6_prediction, fit_fixed_offset, logistic_closed_form
from .solver import simulate

AXES = ("phi0", "coupling", "seed", "duration")
DRIFT_FLAG = 1e-6

# Delta omega * 10 us = 0.3 pi: the experimental generation-time step.
EXPERIMENTAL_PHI0_STEP = 2 * math.pi * 15e3 * 10e-6


def uniform_phi0_grid(n: int = 16) -> tuple[float, ...]:
    return tuple(2 * math.pi * k / n for k in range(n))


def experimental_phi0_grid() -> tuple[float, ...]:
    n = math.ceil(2 * math.pi / EXPERIMENTAL_PHI0_STEP - 1e-9)
    return tuple(k * EXPERIMENTAL_PHI0_STEP for k in range(n))


def merged_phi0_grid(*grids: Sequence[float], tol: float = 1e-9) -> tuple[float, ...]:
    out: list[float] = []
    for v in sorted(v for g in grids for v in g):
        if not out or v - out[-1] > tol:
            out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class SweepSpec:
    """One swept axis, optionally crossed with a phi0 grid.

    Coupling values are lab coupling factors ``g``; the base config's chi0 is
    taken to correspond to ``g = 1.5e6``.  Seed values set both side-mode seeds.
    Duration values are ``tau_end``.
    """

    base: SimConfig
    axis: str
    values: tuple[float, ...]
    parallelism: int = 1
    phi0_grid: tuple[float, ...] | None = None
    mirror_family: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.phi0_grid is not None:
            object.__setattr__(self, "phi0_grid", tuple(float(v) for v in self.phi0_grid))
        if self.axis not in AXES:
            raise ConfigError(f"sweep axis must be one of {AXES}, got {self.axis!r}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        if not all(math.isfinite(v) for v in self.values):
            raise ConfigError("sweep values must be finite")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        if self.parallelism < 1:
            raise ConfigError(f"parallelism must be >= 1, got {self.parallelism}")
        lo = self.values[0]
        if self.axis == "phi0" and not (lo >= 0 and self.values[-1] < 2 * math.pi):
            raise ConfigError("phi0 values must lie in [0, 2pi)")
        if self.axis in ("coupling", "seed") and lo < 0:
            raise ConfigError(f"{self.axis} values must be >= 0")
        if self.axis == "duration" and lo <= 0:
            raise ConfigError("duration values must be > 0")
        if self.axis == "phi0" and self.phi0_grid is not None:
            raise ConfigError("phi0_grid cannot be combined with the phi0 axis")

    def config_for(self, value: float) -> SimConfig:
        base = self.base
        if self.axis == "phi0":
            return base.with_phi0(value)
        if self.axis == "coupling":
            return base.with_chi0(chi0_for_coupling(value, base.pump.chi0))
        if self.axis == "seed":
            return replace(base, seed_forward=value, seed_backward=value)
        return replace(base, tau_end=value)

    def jobs(self) -> list[tuple[float, float, SimConfig]]:
        out = []
        for value in self.values:
            cfg = self.config_for(value)
            if self.phi0_grid is None:
                out.append((value, cfg.pump.phi0, cfg))
            else:
                out.extend((value, phi, cfg.with_phi0(phi)) for phi in self.phi0_grid)
        return out


@dataclass(frozen=True)
class SweepRow:
    value: float
    phi0: float
    backward: float
    forward: float
    condensate: float
    delta_phi01_mid: float
    drift: float

    @property
    def flagged(self) -> bool:
        return not self.drift < DRIFT_FLAG


@dataclass
class SweepResult:
    axis: str
    rows: list[SweepRow]
    crossed: bool
    fits: dict = field(default_factory=dict)

    @property
    def fit(self) -> PhaseFit | None:
        """Phase fit of a plain phi0 sweep."""
        return self.fits.get(None)

    def series(self) -> dict[float, list[SweepRow]]:
        out: dict[float, list[SweepRow]] = {}
        for row in self.rows:
            out.setdefault(row.value, []).append(row)
        return out

    def columns(self) -> list[str]:
        tail = ["backward", "forward", "condensate", "delta_phi01_mid", "drift", "flagged"]
        if self.axis == "phi0":
            return ["phi0"] + tail
        if self.crossed:
            return [self.axis, "phi0"] + tail
        return [self.axis] + tail

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns())
        for r in self.rows:
            head = [r.phi0] if self.axis == "phi0" else ([r.value, r.phi0] if self.crossed else [r.value])
            nums = head + [r.backward, r.forward, r.condensate, r.delta_phi01_mid, r.drift]
            writer.writerow([repr(float(v)) for v in nums] + [int(r.flagged)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    def fit_report(self) -> str:
        chunks = []
        for key, fit in self.fits.items():
            header = "[phi0]" if key is None else f"[{self.axis} = {key!r}]"
            chunks.append(header + "\n" + fit.report())
        return "\n".join(chunks)


class SweepError(RuntimeError):
    def __init__(self, value, phi0, cause):
        super().__init__(f"simulation failed at value = {value!r}, phi0 = {phi0!r}: {cause}")
        self.value = value
        self.phi0 = phi0


def _run_point(cfg: SimConfig) -> tuple[float, float, float, float, float]:
    # mid-run sample for the grating phase
    mid = max(1, round(cfg.n_steps / 2))
    traj = simulate(cfg, sample_every=mid)
    k_mid = int(np.argmin(np.abs(traj.taus - cfg.tau_end / 2)))
    n00, n11, nm = traj.populations[-1]
    return (
        float(nm),
        float(n11),
        float(n00),
        traj.diagnostics[k_mid].delta_phi01,
        traj.max_relative_drift(),
    )


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run one simulation per sweep point and fit the phi0 response where possible.

    Rows keep the order of ``spec.values`` (crossed with ``spec.phi0_grid``),
    independent of how the work is scheduled.
    """
    jobs = spec.jobs()
    configs = [cfg for _, _, cfg in jobs]
    if spec.parallelism == 1:
        outcomes = []
        for (value, phi, _), cfg in zip(jobs, configs):
            try:
                outcomes.append(_run_point(cfg))
            except Exception as exc:
                raise SweepError(value, phi, exc) from exc
    else:
        with ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            futures = [pool.submit(_run_point, cfg) for cfg in configs]
            outcomes = []
            for (value, phi, _), fut in zip(jobs, futures):
                try:
                    outcomes.append(fut.result())
                except Exception as exc:
                    raise SweepError(value, phi, exc) from exc

    scale = 2.0 if spec.mirror_family else 1.0
    rows = [
        SweepRow(value, phi, scale * bwd, fwd, n00, dphi, drift)
        for (value, phi, _), (bwd, fwd, n00, dphi, drift) in zip(jobs, outcomes)
    ]
    result = SweepResult(spec.axis, rows, crossed=spec.phi0_grid is not None)
    if spec.axis == "phi0" and len(rows) >= 6:
        result.fits[None] = _try_fit([(r.phi0, r.backward) for r in rows])
    elif spec.phi0_grid is not None and len(spec.phi0_grid) >= 6:
        for value, series in result.series().items():
            result.fits[value] = _try_fit([(r.phi0, r.backward) for r in series])
    result.fits = {k: v for k, v in result.fits.items() if v is not None}
    return result


def _try_fit(points):
    try:
        return fit_phase_response(points)
    except ValueError:
        return None


# ---------------------------------------------------------------- presets

FIG5_COUPLINGS = (1.0e6, 1.5e6, 1.6e6, 1.7e6)
FIG6_SEEDS = (0.1, 1.0, 10.0)
# 22.22, 44.44, 66.67 and 88.89 us pulses at the fixed 15 kHz beat
FIG7_DURATIONS = (math.pi / 3, 2 * math.pi / 3, math.pi, 4 * math.pi / 3)
PRESETS = ("fig4", "fig5", "fig6", "fig7", "logistic_baseline", "eq6_overlay")


def preset_spec(name: str, base: SimConfig | None = None, parallelism: int = 1, values=None) -> SweepSpec:
    base = base or make_default_config()
    grid16 = uniform_phi0_grid(16)
    if name == "fig4":
        phis = values or merged_phi0_grid(grid16, experimental_phi0_grid())
        return SweepSpec(base, "phi0", tuple(phis), parallelism)
    if name == "eq6_overlay":
        return SweepSpec(base, "phi0", tuple(values or grid16), parallelism)
    if name == "fig5":
        return SweepSpec(base, "coupling", tuple(values or FIG5_COUPLINGS), parallelism, grid16)
    if name == "fig6":
        return SweepSpec(base, "seed", tuple(values or FIG6_SEEDS), parallelism, grid16)
    if name == "fig7":
        return SweepSpec(base, "duration", tuple(values or FIG7_DURATIONS), parallelism, grid16)
    raise ConfigError(f"unknown sweep preset {name!r}; choose from {PRESETS}")


@dataclass
class FigureBundle:
    preset: str
    paths: dict[str, Path]
    result: SweepResult | None = None


def _series_label(axis: str, value: float) -> str:
    if axis == "coupling":
        return f"g = {value / 1e6:.2g}e6"
    if axis == "seed":
        return f"seed = {value:g}"
    if axis == "duration":
        return f"tau_end = {value / math.pi:.3g} pi"
    return f"{axis} = {value:g}"


def _logistic_bundle(out: Path) -> FigureBundle:
    params = LogisticParams()
    phis = np.array(uniform_phi0_grid(16))
    full = logistic_closed_form(params, phis, 1.0) / params.n0
    third = logistic_closed_form(params, phis, 1.0 / 3.0) / params.n0
    lines = ["phi0,full_cycle,third_cycle"]
    lines += [f"{p!r},{a!r},{b!r}" for p, a, b in zip(phis.tolist(), full.tolist(), third.tolist())]
    csv_path = out / "logistic_baseline.csv"
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    svg_path = out / "logistic_baseline.svg"
    plotting.write_svg(
        svg_path,
        [("full cycle", phis, full), ("1/3 cycle", phis, third)],
        xlabel="phi0 [rad]",
        ylabel="scattered fraction",
        title="logistic baseline",
    )
    return FigureBundle("logistic_baseline", {"csv": csv_path, "plot": svg_path})


def run_figure(
    preset: str,
    out_dir,
    base: SimConfig | None = None,
    parallelism: int = 1,
    values=None,
    mirror_family: bool = False,
) -> FigureBundle:
    """Run a figure preset and write its CSV, fit report and SVG plot into ``out_dir``."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    if preset == "logistic_baseline":
        return _logistic_bundle(out)

    spec = replace(preset_spec(preset, base, parallelism, values), mirror_family=mirror_family)
    result = run_sweep(spec)
    paths = {"csv": out / f"{preset}.csv", "fit": out / f"{preset}_fit.txt", "plot": out / f"{preset}.svg"}
    result.to_csv(paths["csv"])
    paths["fit"].write_text(result.fit_report(), encoding="utf-8")

    if spec.axis == "phi0":
        phis = np.array([r.phi0 for r in result.rows])
        ys = np.array([r.backward for r in result.rows])
        curves = [("simulation", phis, ys)]
        fit = result.fit
        if fit is not None:
            dense = np.linspace(0.0, 2 * math.pi, 181)
            paths["fit_curve"] = out / f"{preset}_fit_curve.csv"
            fit.write_curve(paths["fit_curve"])
            curves.append(("cosine fit", dense, fit(dense)))
            if preset == "eq6_overlay":
                amp, base_level = fit_fixed_offset(list(zip(phis, ys)), math.pi / 2)
                fixed = np.clip(eq6_prediction(abs(amp), math.pi / 2, base_level, dense), 0.0, None)
                curves.append(("phase-matched law", dense, fixed))
                paths["overlay"] = out / "eq6_overlay_curves.csv"
                lines = ["phi0,fitted,phase_matched"]
                lines += [f"{p!r},{a!r},{b!r}" for p, a, b in zip(dense.tolist(), fit(dense).tolist(), fixed.tolist())]
                paths["overlay"].write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        curves = []
        for value, series in result.series().items():
            curves.append(
                (
                    _series_label(spec.axis, value),
                    np.array([r.phi0 for r in series]),
                    np.array([r.backward for r in series]),
                )
            )
    plotting.write_svg(
        paths["plot"], curves, xlabel="phi0 [rad]", ylabel="backward fraction", title=preset
    )
    return FigureBundle(preset, paths, result)


# ---------------------------------------------------------------- calibration


@dataclass(frozen=True)
class Calibration:
    chi0: float
    backward: float
    depletion: float
    target: float


def calibrate(
    target: float = 1e-2,
    base: SimConfig | None = None,
    bracket: tuple[float, float] = (1.0, 12.0),
    rel_tol: float = 1e-3,
) -> Calibration:
    """Find chi0 giving backward fraction ``target`` at ``phi0 = pi/2`` by log-bisection."""
    base = (base or make_default_config()).with_phi0(math.pi / 2)

    def final(chi0):
        return simulate(base.with_chi0(chi0), sample_every=base.n_steps).populations[-1]

    lo, hi = bracket
    if not final(lo)[2] < target < final(hi)[2]:
        raise ConfigError(f"target {target} not bracketed by chi0 in {bracket}")
    while hi / lo - 1 > rel_tol:
        mid = math.sqrt(lo * hi)
        if final(mid)[2] < target:
            lo = mid
        else:
            hi = mid
    chi0 = math.sqrt(lo * hi)
    pops = final(chi0)
    return Calibration(chi0, float(pops[2]), float(1 - pops[0]), target)


__all__ = [
    "AXES",
    "FIG5_COUPLINGS",
    "FIG6_SEEDS",
    "FIG7_DURATIONS",
    "G_REFERENCE",
    "PRESETS",
    "Calibration",
    "FigureBundle",
    "SweepError",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "calibrate",
    "experimental_phi0_grid",
    "preset_spec",
    "run_figure",
    "run_sweep",
    "uniform_phi0_grid",
]
