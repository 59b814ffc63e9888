"""Config-driven time sweeps, CSV output and oracle verification.

Config files are flat YAML mappings (one ``key: value`` per line, lists in
``[a, b]`` form); see README for the full list of keys.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field, fields, replace

import numpy as np
import yaml
from scipy import integrate

from .errors import ConfigError, UnphysicalStateError
from .gaussian import twb_state, validate_physical
from .markers import DiscordOptions, marker_sample
from .oracles import OdeOptions, discord_grid_oracle, ode_covariance
from .propagation import COMMON_SCALE, PropagatorMode, propagate
from .spectral import BathSpec, coefficient_model

OUT_ENV = "NMGAUSS_OUT"

CSV_COLUMNS = (
    "tau", "icorr", "icorr_subshot", "negativity", "discord", "mutual_info",
    "classical", "rho_star", "phi_star", "nu_minus",
)
SCALED_COLUMNS = ("icorr_scaled", "negativity_scaled", "discord_scaled")


@dataclass(frozen=True)
class SweepConfig:
    topology: str = "independent"
    r: tuple = (2.0,)
    N: tuple = (0.0,)
    alpha: float = 0.1
    x: float = 10.0
    temperature_ratio: float = 100.0
    tau_start: float = 0.0
    tau_stop: float = 5.0
    tau_count: int = 51
    mode: str = "short-time"
    rho_max: float = 6.0
    grid_rho: int = 25
    grid_phi: int = 24
    output: str = "sweep.csv"
    verify: bool = False
    verify_stride: int = 5
    scaled: bool = False

    def __post_init__(self):
        for name in ("r", "N"):
            val = getattr(self, name)
            vals = tuple(float(v) for v in (val if isinstance(val, (list, tuple)) else [val]))
            if not vals or any(v < 0 for v in vals):
                raise ConfigError("must be one or more values >= 0", field=name)
            object.__setattr__(self, name, vals)
        if self.topology not in ("independent", "common"):
            raise ConfigError("must be 'independent' or 'common'", field="topology")
        try:
            PropagatorMode(self.mode)
        except ValueError:
            raise ConfigError("must be 'short-time' or 'exact'", field="mode") from None
        if not self.alpha >= 0:
            raise ConfigError("must be >= 0", field="alpha")
        if not self.x > 0:
            raise ConfigError("must be > 0", field="x")
        if not self.temperature_ratio >= 0:
            raise ConfigError("must be >= 0", field="temperature_ratio")
        if self.tau_count < 2:
            raise ConfigError("must be >= 2", field="tau_count")
        if not (0 <= self.tau_start < self.tau_stop):
            raise ConfigError("need 0 <= tau_start < tau_stop", field="tau_stop")
        if self.verify_stride < 1:
            raise ConfigError("must be >= 1", field="verify_stride")
        if not self.rho_max > 0 or self.grid_rho < 2 or self.grid_phi < 1:
            raise ConfigError("invalid discord grid", field="rho_max")

    @property
    def bath(self):
        return BathSpec(self.x, self.alpha, self.temperature_ratio)

    @property
    def taus(self):
        return np.linspace(self.tau_start, self.tau_stop, self.tau_count)

    @property
    def discord_options(self):
        return DiscordOptions(rho_max=self.rho_max, grid_rho=self.grid_rho, grid_phi=self.grid_phi)

    def curves(self):
        return [(r, n) for r in self.r for n in self.N]


_FIELD_TYPES = {f.name: f.type for f in fields(SweepConfig)}


def _coerce(name, value, line):
    kind = _FIELD_TYPES[name]
    try:
        if kind == "tuple":
            return value
        if kind == "bool":
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind == "int":
            if isinstance(value, bool) or float(value) != int(value):
                raise TypeError
            return int(value)
        if kind == "float":
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if not isinstance(value, str):
            raise TypeError
        return value
    except (TypeError, ValueError):
        raise ConfigError(f"expected {kind}, got {value!r}", field=name, line=line) from None


def parse_config(text):
    """Parse config text into a :class:`SweepConfig` with line-aware errors."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"syntax error: {getattr(exc, 'problem', exc)}",
                          line=mark.line + 1 if mark else None) from None
    if node is None:
        return SweepConfig()
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError("config must be a key: value mapping", line=node.start_mark.line + 1)
    values, lines = {}, {}
    for key_node, val_node in node.value:
        key, line = key_node.value, key_node.start_mark.line + 1
        if key not in _FIELD_TYPES:
            raise ConfigError("unknown key", field=key, line=line)
        if key in values:
            raise ConfigError("duplicate key", field=key, line=line)
        if isinstance(val_node, yaml.MappingNode):
            raise ConfigError("nested mappings are not allowed", field=key, line=line)
        value = yaml.safe_load(yaml.serialize(val_node))
        values[key] = _coerce(key, value, line)
        lines[key] = line
    try:
        return SweepConfig(**values)
    except ConfigError as exc:
        raise ConfigError(exc.message, field=exc.field,
                          line=lines.get(exc.field)) from None


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)


@dataclass
class Curve:
    r: float
    N: float
    samples: list = field(default_factory=list)


def _propagator(config, model):
    bath, mode = config.bath, PropagatorMode(config.mode)

    def run(sigma0, tau):
        return propagate(sigma0, tau, bath, config.topology, mode, model=model)

    return run


def run_sweep(config, propagator=None):
    """Propagate every (r, N) curve over the tau grid and evaluate all markers.

    Raises :class:`UnphysicalStateError` (carrying tau and nu_minus) if a
    propagated state violates the uncertainty bound.
    """
    model = coefficient_model(config.bath, config.tau_stop)
    prop = propagator or _propagator(config, model)
    opts = config.discord_options
    curves = []
    for r, n_th in config.curves():
        sigma0 = twb_state(r, n_th)
        curve = Curve(r, n_th)
        for tau in config.taus:
            sigma = prop(sigma0, float(tau))
            report = validate_physical(sigma)
            if not report.ok:
                raise UnphysicalStateError(
                    f"unphysical state at tau={tau:.6g} (nu-={report.nu_minus:.9g})",
                    nu_minus=report.nu_minus, tau=float(tau),
                )
            curve.samples.append(marker_sample(sigma, tau, opts))
        curves.append(curve)
    return curves


def _fmt(v):
    return "" if v is None else repr(float(v))


def curve_rows(curve, scaled=False):
    first = curve.samples[0]
    rows = []
    for smp in curve.samples:
        row = [
            _fmt(smp.tau), _fmt(smp.icorr), "1" if smp.icorr_subshot else "0",
            _fmt(smp.negativity), _fmt(smp.discord), _fmt(smp.mutual_information),
            _fmt(smp.classical_correlations), _fmt(smp.rho_star), _fmt(smp.phi_star),
            _fmt(smp.nu_minus),
        ]
        if scaled:
            for val, ref in ((smp.icorr, first.icorr), (smp.negativity, first.negativity),
                             (smp.discord, first.discord)):
                ok = val is not None and ref is not None and ref != 0
                row.append(_fmt(val / ref) if ok else "")
        rows.append(row)
    return rows


def output_paths(base, curves):
    """One file per curve; with several curves a ``_r<r>_N<N>`` suffix is added."""
    if len(curves) == 1:
        return [base]
    root, ext = os.path.splitext(base)
    return [f"{root}_r{c.r:g}_N{c.N:g}{ext or '.csv'}" for c in curves]


def write_csv(curves, base, scaled=False):
    paths = output_paths(base, curves)
    header = list(CSV_COLUMNS) + (list(SCALED_COLUMNS) if scaled else [])
    for path, curve in zip(paths, curves):
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(curve_rows(curve, scaled))
    return paths


def resolve_output(config, cli_out=None):
    """CLI flag first, then the environment override, then the config value."""
    return cli_out or os.environ.get(OUT_ENV) or config.output


# ---------------------------------------------------------------- verification

@dataclass(frozen=True)
class VerifyThresholds:
    propagator: float = 1e-6
    markers: float = 1e-5
    discord_oracle: float = 1e-6


@dataclass
class VerifyReport:
    max_propagator: float = 0.0
    max_markers: dict = field(default_factory=dict)
    max_discord_excess: float = 0.0
    max_discord_gap: float = 0.0
    short_time_ratio: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def lines(self):
        out = [f"propagator vs ODE oracle: max |d sigma| = {self.max_propagator:.3e}"]
        for name, val in sorted(self.max_markers.items()):
            out.append(f"marker {name}: max deviation = {val:.3e}")
        out.append(f"discord vs grid oracle: max excess = {self.max_discord_excess:.3e}, "
                   f"max gap beyond grid resolution = {self.max_discord_gap:.3e}")
        out.append(f"short-time vs exact weights: max deviation / bound = {self.short_time_ratio:.3f}")
        out.extend(f"FAIL: {msg}" for msg in self.failures)
        out.append("verify: " + ("ok" if self.ok else "FAILED"))
        return out


def short_time_bound(tau, bath, scale=1.0, model=None, samples=2001):
    """Entrywise bound on |noise(short-time) - noise(exact weights)|.

    The weights differ from 1 by at most ``eps = exp(g G) - 1`` with ``G`` the
    largest |Gamma(tau) - Gamma(s)| on [0, tau] and ``g`` the weight scale;
    each noise entry combines at most two Delta integrals and one Pi integral.
    """
    if tau == 0:
        return 0.0
    model = model or coefficient_model(bath, tau)
    s = np.linspace(0.0, tau, samples)
    big = np.asarray(model.big_gamma(s), dtype=float)
    spread = float(np.max(np.abs(big[-1] - big)))
    eps = math.expm1(scale * spread * (1 + 1e-3))
    ad = integrate.quad(lambda u: abs(model.delta(u)), 0, tau, limit=400)[0]
    ap = integrate.quad(lambda u: abs(model.pi(u)), 0, tau, limit=400)[0]
    return scale * eps * (2 * ad + ap) * (1 + 1e-6) + 1e-14


_MARKER_FIELDS = ("icorr", "negativity", "discord", "mutual_information")


def verify_mode(config, propagator=None, thresholds=VerifyThresholds(),
                ode_options=OdeOptions(rtol=1e-11, atol=1e-13)):
    """Check a sweep against the oracles on every ``verify_stride``-th time.

    * exact-weights propagation (or the injected ``propagator``) vs the ODE;
    * markers of the propagated states vs markers of the ODE states;
    * discord vs the dense-grid oracle (must not exceed it, and may sit
      below it by at most the oracle's grid resolution);
    * the configured short-time states vs exact weights, within
      :func:`short_time_bound`.
    """
    bath = config.bath
    model = coefficient_model(bath, config.tau_stop)
    taus = config.taus[:: config.verify_stride]
    exact = propagator or _propagator(replace(config, mode="exact"), model)
    configured = _propagator(config, model)
    opts = config.discord_options
    scale = COMMON_SCALE if config.topology == "common" else 1.0
    rep = VerifyReport(max_markers={k: 0.0 for k in _MARKER_FIELDS})
    for r, n_th in config.curves():
        sigma0 = twb_state(r, n_th)
        ode = ode_covariance(sigma0, taus, bath, config.topology, options=ode_options)
        for tau, ref in zip(taus, ode):
            sig = exact(sigma0, float(tau))
            dev = float(np.max(np.abs(sig - ref)))
            rep.max_propagator = max(rep.max_propagator, dev)
            if dev > thresholds.propagator:
                rep.failures.append(f"propagator deviates by {dev:.3e} at r={r}, N={n_th}, tau={tau:.4g}")
                continue
            a, b = marker_sample(sig, tau, opts), marker_sample(ref, tau, opts)
            for name in _MARKER_FIELDS:
                va, vb = getattr(a, name), getattr(b, name)
                if (va is None) != (vb is None):
                    rep.failures.append(f"{name} defined on one side only at tau={tau:.4g}")
                    continue
                d = 0.0 if va is None else abs(va - vb)
                rep.max_markers[name] = max(rep.max_markers[name], d)
                if d > thresholds.markers:
                    rep.failures.append(f"{name} deviates by {d:.3e} at r={r}, N={n_th}, tau={tau:.4g}")
            grid = discord_grid_oracle(sig, rho_max=config.rho_max, details=True)
            excess = a.discord - grid.discord
            gap = grid.discord - a.discord - grid.resolution
            rep.max_discord_excess = max(rep.max_discord_excess, excess)
            rep.max_discord_gap = max(rep.max_discord_gap, gap)
            if excess > thresholds.discord_oracle or gap > thresholds.discord_oracle:
                rep.failures.append(f"discord disagrees with grid oracle at tau={tau:.4g}")
            if config.mode == PropagatorMode.SHORT_TIME.value and tau > 0:
                diff = float(np.max(np.abs(configured(sigma0, float(tau)) - sig)))
                bound = short_time_bound(float(tau), bath, scale, model)
                rep.short_time_ratio = max(rep.short_time_ratio, diff / bound)
                if diff > bound:
                    rep.failures.append(f"short-time deviation {diff:.3e} exceeds bound {bound:.3e}")
    return rep
