"""Flat ``key = value`` configuration files.

Keys are dotted (``pump.phi0``); a ``[section]`` header prefixes the bare keys
that follow it.  ``#`` starts a comment.  Numeric values may use ``pi``
(``2*pi/3``).  Absent keys keep the defaults of :func:`make_default_config`.

Recognised keys::

    grid.xi_min  grid.xi_max  grid.n_points
    pump.chi0  pump.phi0  pump.g
    sim.seed_forward  sim.seed_backward  sim.seed_phase_forward  sim.seed_phase_backward
    sim.total_atoms  sim.tau_end  sim.dtau  sim.tf_half_length_xi
    sweep.axis  sweep.values  sweep.phi0_grid  sweep.parallelism  sweep.mirror_family

``pump.g`` sets chi0 from a lab coupling factor (``chi0 ~ g**2``) and cannot be
combined with ``pump.chi0``.  ``sweep.phi0_grid`` is a comma list or
``uniform:N``.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import replace
from pathlib import Path

from .model import ConfigError, SimConfig, SpatialGrid, chi0_for_coupling, make_default_config
from .sweep import SweepSpec, uniform_phi0_grid


class ConfigSyntaxError(ConfigError):
    def __init__(self, lineno: int, line: str, reason: str = "expected 'key = value'"):
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno


class UnknownKeyError(ConfigError):
    def __init__(self, key: str, lineno: int):
        super().__init__(f"line {lineno}: unknown key {key!r}")
        self.key = key
        self.lineno = lineno


class ConfigValueError(ConfigError):
    pass


FLOAT_KEYS = {
    "grid.xi_min",
    "grid.xi_max",
    "pump.chi0",
    "pump.phi0",
    "pump.g",
    "sim.seed_forward",
    "sim.seed_backward",
    "sim.seed_phase_forward",
    "sim.seed_phase_backward",
    "sim.total_atoms",
    "sim.tau_end",
    "sim.dtau",
    "sim.tf_half_length_xi",
}
INT_KEYS = {"grid.n_points", "sweep.parallelism"}
OTHER_KEYS = {"sweep.axis", "sweep.values", "sweep.phi0_grid", "sweep.mirror_family"}
KNOWN_KEYS = FLOAT_KEYS | INT_KEYS | OTHER_KEYS

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def eval_number(text: str) -> float:
    """Evaluate a float literal or a small arithmetic expression in ``pi``."""
    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(text)

    try:
        value = ev(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    return value


def read_pairs(text: str) -> dict[str, tuple[str, int]]:
    pairs: dict[str, tuple[str, int]] = {}
    section = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or not line[1:-1].strip():
                raise ConfigSyntaxError(lineno, raw, "malformed section header")
            section = line[1:-1].strip()
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigSyntaxError(lineno, raw)
        if section and "." not in key:
            key = f"{section}.{key}"
        if key not in KNOWN_KEYS:
            raise UnknownKeyError(key, lineno)
        if key in pairs:
            raise ConfigSyntaxError(lineno, raw, f"duplicate key {key!r}")
        pairs[key] = (value, lineno)
    return pairs


def _number(pairs, key):
    text, lineno = pairs[key]
    try:
        value = eval_number(text)
    except ValueError:
        raise ConfigValueError(f"line {lineno}: {key} expects a number, got {text!r}") from None
    if key in INT_KEYS:
        if value != int(value):
            raise ConfigValueError(f"line {lineno}: {key} expects an integer, got {text!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigValueError(f"line {lineno}: {key} must be finite")
    return value


def _number_list(pairs, key):
    text, lineno = pairs[key]
    if key == "sweep.phi0_grid" and text.startswith("uniform:"):
        try:
            return uniform_phi0_grid(int(text.split(":", 1)[1]))
        except ValueError:
            raise ConfigValueError(f"line {lineno}: bad uniform grid {text!r}") from None
    try:
        return tuple(eval_number(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigValueError(f"line {lineno}: {key}: {exc}") from None


def _build_config(pairs) -> SimConfig:
    base = make_default_config()
    get = {k: _number(pairs, k) for k in pairs if k in FLOAT_KEYS | INT_KEYS}
    try:
        half = get.get("sim.tf_half_length_xi", base.tf_half_length_xi)
        xi_max = get.get("grid.xi_max", base.grid.xi_max if half == base.tf_half_length_xi else 1.2 * half)
        grid = SpatialGrid(
            get.get("grid.xi_min", -xi_max), xi_max, get.get("grid.n_points", base.grid.n_points)
        )
        if "pump.g" in get and "pump.chi0" in get:
            raise ConfigValueError("pump.g and pump.chi0 are mutually exclusive")
        chi0 = get.get("pump.chi0", base.pump.chi0)
        if "pump.g" in get:
            chi0 = chi0_for_coupling(get["pump.g"])
        pump = replace(base.pump, chi0=chi0, phi0=get.get("pump.phi0", base.pump.phi0))
        fields = {
            name: get[f"sim.{name}"]
            for name in (
                "seed_forward",
                "seed_backward",
                "seed_phase_forward",
                "seed_phase_backward",
                "total_atoms",
                "tau_end",
                "dtau",
            )
            if f"sim.{name}" in get
        }
        return replace(base, grid=grid, pump=pump, tf_half_length_xi=half, **fields)
    except ConfigValueError:
        raise
    except ConfigError as exc:
        raise ConfigValueError(str(exc)) from None


def parse_config(path) -> SimConfig:
    """Read a simulation config; sweep keys are accepted and ignored here."""
    return _build_config(read_pairs(_read(path)))


def parse_sweep_spec(path, parallelism: int | None = None, mirror_family: bool | None = None) -> SweepSpec:
    pairs = read_pairs(_read(path))
    cfg = _build_config(pairs)
    if "sweep.axis" not in pairs:
        raise ConfigValueError("sweep config needs sweep.axis")
    if "sweep.values" not in pairs:
        raise ConfigValueError("sweep config needs sweep.values")
    axis = pairs["sweep.axis"][0]
    values = _number_list(pairs, "sweep.values")
    phi0_grid = _number_list(pairs, "sweep.phi0_grid") if "sweep.phi0_grid" in pairs else None
    par = _number(pairs, "sweep.parallelism") if "sweep.parallelism" in pairs else 1
    mirror = False
    if "sweep.mirror_family" in pairs:
        text, lineno = pairs["sweep.mirror_family"]
        if text.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigValueError(f"line {lineno}: sweep.mirror_family expects a boolean, got {text!r}")
        mirror = text.lower() in ("true", "1", "yes")
    try:
        return SweepSpec(
            cfg,
            axis,
            values,
            parallelism if parallelism is not None else par,
            phi0_grid,
            mirror if mirror_family is None else (mirror or mirror_family),
        )
    except ConfigValueError:
        raise
    except ConfigError as exc:
        raise ConfigValueError(str(exc)) from None


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")
