"""Command-line surface: parameter parsing, sweeps, reproducible CSV/JSON output.

Subcommands: rayleigh, barrier-scan, tentacle, perturbation, capacitance,
screened.  Defaults reproduce the water benchmark (R = 10 um, sigma = 0.073
N/m, T = 293 K, charged to half the Rayleigh limit, protrusion radius 1 nm).

Configuration is resolved in three layers: built-in defaults, then a flat
key=value config file (--config, '#' comments), then command-line flags.
Every output carries a metadata header echoing the fully resolved
configuration; re-running with those values reproduces the bytes exactly
(no timestamps or absolute paths enter the output).

Exit codes: 0 success, 2 usage/config error, 3 domain error, 4 numerical
error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys

import numpy as np

from . import __version__
from ._rootfind import bisect_root
from .core import (
    CODATA,
    DropletSpec,
    Liquid,
    ball_energy_conductor,
    ball_energy_uniform,
    debye_radius,
    ion_density_for_debye_radius,
    rayleigh_charge,
    thermal_energy,
)
from .errors import DomainError, NumericalError
from . import barrier as barrier_mod
from . import bem
from . import perturbation as pert
from . import screened as screened_mod
from . import shapes

__all__ = ["main", "run", "ConfigError"]


class ConfigError(Exception):
    """Bad configuration input (maps to exit code 2)."""


_COMMON_DEFAULTS = {
    "R": 10e-6,
    "sigma": 0.073,
    "temp": 293.0,
    "charge_fraction": 0.5,
    "epsilon_r": 80.0,
    "ion_density": 6.02e25,
    "format": "csv",
}

_SUBCOMMAND_DEFAULTS = {
    "rayleigh": {},
    "barrier-scan": {"r": 1e-9, "h_min": 5e-8, "h_max": 1.6e-6, "n": 64,
                     "field": 0.0, "field_mode": "opt"},
    "tentacle": {"h_min": None, "h_max": None, "n": 64},
    "perturbation": {"delta_min": None, "delta_max": None, "n": 24},
    "capacitance": {"shape": "sphere", "r": 1.0, "h": 4.0, "panels": 200,
                    "fillet_ratio": 0.25, "curve_file": None},
    "screened": {"rd_over_R": "0.01,0.1,1,10,100", "grid_n": 512},
}

_FLOAT_KEYS = {"R", "sigma", "temp", "charge_fraction", "epsilon_r", "ion_density",
               "r", "h", "h_min", "h_max", "field", "delta_min", "delta_max",
               "fillet_ratio"}
_INT_KEYS = {"n", "panels", "grid_n"}


def _parse_config_file(path):
    values = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = text.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            if not value:
                raise ConfigError(f"{path}:{lineno}: missing value for key {key!r}")
            values[key] = value
    return values


def _coerce(key, value):
    if value is None or not isinstance(value, str):
        return value
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {value!r}") from None
    return value


def _resolve_config(args):
    """Merge defaults <- config file <- flags for the chosen subcommand."""
    sub = args.subcommand
    allowed = dict(_COMMON_DEFAULTS)
    allowed.update(_SUBCOMMAND_DEFAULTS[sub])
    config = dict(allowed)

    explicit = set()
    if args.config:
        for key, value in _parse_config_file(args.config).items():
            if key not in allowed:
                raise ConfigError(
                    f"unknown config key {key!r} for subcommand {sub!r} "
                    f"(known: {', '.join(sorted(allowed))})")
            config[key] = _coerce(key, value)
            explicit.add(key)
    for key in allowed:
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            config[key] = _coerce(key, flag_val)
            explicit.add(key)

    if config.get("format") not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {config.get('format')!r}")
    config["charge_fraction_assumed"] = "charge_fraction" not in explicit

    # ranges left open by default are anchored to the drop radius
    R = config["R"]
    if sub == "tentacle":
        config["h_min"] = config["h_min"] if config["h_min"] is not None else 1.0 * R
        config["h_max"] = config["h_max"] if config["h_max"] is not None else 100.0 * R
    if sub == "perturbation":
        config["delta_min"] = config["delta_min"] if config["delta_min"] is not None else 0.002 * R
        config["delta_max"] = config["delta_max"] if config["delta_max"] is not None else 0.499 * R
    return config


def _spec_from_config(config):
    liquid = Liquid(sigma=config["sigma"], epsilon_r=config["epsilon_r"],
                    temperature=config["temp"], ion_density_n0=config["ion_density"])
    return DropletSpec.from_charge_fraction(config["R"], liquid,
                                            config["charge_fraction"])


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _config_hash(config):
    # provenance annotations (*_assumed) do not change the physics
    blob = "|".join(f"{k}={_fmt(v)}" for k, v in sorted(config.items())
                    if not k.endswith("_assumed"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _metadata(subcommand, config):
    meta = {"tool": "chargedrop", "version": __version__, "subcommand": subcommand}
    for key in sorted(config):
        meta[key] = config[key]
    meta["config_hash"] = _config_hash(config)
    return meta


def _write_csv(out, meta, records, summary):
    for key, value in meta.items():
        out.write(f"# {key} = {_fmt(value)}\n")
    if records:
        columns = list(records[0].keys())
        out.write(",".join(columns) + "\n")
        for rec in records:
            out.write(",".join(_fmt(rec.get(c)) for c in columns) + "\n")
    if summary:
        for key, value in summary.items():
            out.write(f"# summary.{key} = {_fmt(value)}\n")


def _write_json(out, meta, records, summary):
    doc = {"metadata": meta, "records": records}
    if summary is not None:
        doc["summary"] = summary
    json.dump(doc, out, indent=2)
    out.write("\n")


def _emit(config, meta, records, summary, out_path):
    buf = io.StringIO()
    if config["format"] == "csv":
        _write_csv(buf, meta, records, summary)
    else:
        _write_json(buf, meta, records, summary)
    text = buf.getvalue()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_rayleigh(config, out_path):
    spec = _spec_from_config(config)
    kbt = thermal_energy(config["temp"])
    e_cond = ball_energy_conductor(spec)
    e_unif = ball_energy_uniform(spec)
    record = {
        "Q_R_C": spec.rayleigh_limit,
        "Q_C": spec.charge_Q,
        "Q_over_QR": spec.charge_fraction,
        "r_D_m": debye_radius(spec.liquid),
        "E_ball_conductor_J": e_cond,
        "E_ball_conductor_kBT": e_cond / kbt,
        "E_ball_uniform_J": e_unif,
        "E_ball_uniform_kBT": e_unif / kbt,
    }
    _emit(config, _metadata("rayleigh", config), [record], None, out_path)
    return 0


def _cmd_barrier_scan(config, out_path):
    spec = _spec_from_config(config)
    kbt = thermal_energy(config["temp"])
    e_unit = CODATA.e_charge
    r = config["r"]
    field = config["field"]
    after = config["field_mode"] == "post"
    n = config["n"]

    records = []
    if n < 16:
        # too few samples for refinement: evaluate the raw grid and say so
        h_grid = np.geomspace(config["h_min"], config["h_max"], max(n, 1))
        dE = [barrier_mod.delta_E(spec, r, h, field=field, field_after_qopt=after)
              for h in h_grid]
        i_max = int(np.argmax(dE))
        for h, e in zip(h_grid, dE):
            p = shapes.SpheroidProtrusion(r=r, h=h)
            q = barrier_mod.optimal_protrusion_charge(
                spec, p, field=0.0 if after else field)
            records.append({"h_m": float(h), "deltaE_J": e, "deltaE_kBT": e / kbt,
                            "q_star_e": q / e_unit})
        summary = {"h_max_m": float(h_grid[i_max]), "deltaE_max_J": dE[i_max],
                   "deltaE_max_kBT": dE[i_max] / kbt,
                   "q_at_hmax_e": records[i_max]["q_star_e"],
                   "h0_m": None, "interior_maximum": False,
                   "degenerate_scan": True}
    else:
        res = barrier_mod.scan_barrier(spec, r, config["h_min"], config["h_max"],
                                       n_samples=n, field=field,
                                       field_after_qopt=after)
        for h, e in zip(res.h_samples, res.deltaE_samples):
            p = shapes.SpheroidProtrusion(r=r, h=float(h))
            q = barrier_mod.optimal_protrusion_charge(
                spec, p, field=0.0 if after else field)
            records.append({"h_m": float(h), "deltaE_J": float(e),
                            "deltaE_kBT": float(e) / kbt, "q_star_e": q / e_unit})
        summary = {"h_max_m": res.h_max, "deltaE_max_J": res.deltaE_max,
                   "deltaE_max_kBT": res.deltaE_max / kbt,
                   "q_at_hmax_e": res.q_at_hmax / e_unit,
                   "h0_m": res.h0, "interior_maximum": res.interior_maximum,
                   "degenerate_scan": False}
    _emit(config, _metadata("barrier-scan", config), records, summary, out_path)
    return 0


def _cmd_tentacle(config, out_path):
    spec = _spec_from_config(config)
    kbt = thermal_energy(config["temp"])
    e_ball = ball_energy_conductor(spec)
    h_grid = np.geomspace(config["h_min"], config["h_max"], config["n"])

    records = []
    valid = []
    for h in h_grid:
        h = float(h)
        r_h = shapes.optimal_tentacle_radius(spec, h)
        row = {"h_m": h, "r_of_h_m": r_h, "deficit_J": None, "deficit_kBT": None,
               "E_total_J": None, "slender_ok": False}
        try:
            deficit = shapes.tentacle_energy_deficit(spec, h)
        except DomainError:
            records.append(row)
            continue
        row.update({"deficit_J": deficit, "deficit_kBT": deficit / kbt,
                    "E_total_J": e_ball + deficit, "slender_ok": True})
        records.append(row)
        valid.append((h, deficit))

    h_zero = None
    for (h0, d0), (h1, d1) in zip(valid, valid[1:]):
        if d0 > 0.0 >= d1:
            h_zero = bisect_root(lambda h: shapes.tentacle_energy_deficit(spec, h),
                                 h0, h1, rtol=1e-9)
            break
    summary = {
        "h_zero_m": h_zero,
        "asymptote_energy_J": 4.0 * math.pi * spec.liquid.sigma * spec.radius_R**2,
        "E_ball_J": e_ball,
        "skipped_rows": sum(1 for rec in records if not rec["slender_ok"]),
    }
    _emit(config, _metadata("tentacle", config), records, summary, out_path)
    return 0


# below this relative spike volume the depression solve is pure round-off
_MIN_RESOLVABLE_SPIKE = 1e-13


def _cmd_perturbation(config, out_path):
    spec = _spec_from_config(config)
    R = spec.radius_R
    deltas = np.geomspace(config["delta_min"], config["delta_max"], config["n"])

    records = []
    for delta in deltas:
        delta = float(delta)
        radii = pert.inner_radii(R, delta)
        sign, log_mag = pert.delta_E0_bracket_log(spec, delta)
        value = pert.delta_E0_bracket(spec, delta)
        x_r = radii.log_r - math.log(R)
        x_rp = radii.log_rprime - math.log(R)
        h_solved = None
        spike_scale = math.exp(2.0 * x_r) * (delta / R)
        if delta < 0.5 * R and spike_scale > _MIN_RESOLVABLE_SPIKE:
            h_solved = pert.solve_depression_depth(
                pert.PerturbationParams(delta=delta, R=R))
        records.append({
            "delta_over_R": delta / R,
            "r_over_R": radii.r / R,
            "log10_r_over_R": x_r / math.log(10.0),
            "rprime_over_R": radii.rprime / R,
            "log10_rprime_over_R": x_rp / math.log(10.0),
            "h_solved_m": h_solved,
            "bracket": value,
            "bracket_sign": sign,
            "log10_bracket_mag": log_mag / math.log(10.0) if math.isfinite(log_mag) else None,
        })
    try:
        delta_star = pert.instability_threshold_delta(spec)
    except DomainError:
        delta_star = None
    summary = {
        "delta_star_m": delta_star,
        "delta_star_over_R": None if delta_star is None else delta_star / R,
        "bracket_prefactor_J": pert.delta_E0_prefactor(spec),
    }
    _emit(config, _metadata("perturbation", config), records, summary, out_path)
    return 0


def _cmd_capacitance(config, out_path):
    eps0 = CODATA.eps0
    panels = config["panels"]
    if config["curve_file"]:
        curve = bem.load_generating_curve(config["curve_file"])
        coarse = None
        label = "curve-file"
    else:
        label = config["shape"]
        if label == "sphere":
            shape = bem.Sphere(config["R"])
        elif label == "spheroid":
            shape = bem.ProlateSpheroid(r=config["r"], h=config["h"])
        elif label == "cylinder":
            shape = bem.CappedCylinder(r=config["r"], h=config["h"])
        elif label == "bump":
            shape = bem.SphereWithSpheroidBump(
                R=config["R"], r=config["r"], h=config["h"],
                fillet_ratio=config["fillet_ratio"])
        else:
            raise ConfigError(
                f"unknown shape {label!r} (sphere, spheroid, cylinder, bump)")
        curve = bem.generating_curve(shape, panels)
        coarse = bem.capacitance(shape, max(16, panels // 2))
    C = bem.capacitance_of_curve(curve)
    volume = curve.enclosed_volume()
    R_equiv = (3.0 * volume / (4.0 * math.pi)) ** (1.0 / 3.0)
    record = {
        "shape": label,
        "n_panels": curve.n_panels,
        "C_F": C,
        "c_radius_m": C / (4.0 * math.pi * eps0),
        "R_equiv_m": R_equiv,
        "C_over_sphere_of_R_equiv": C / (4.0 * math.pi * eps0 * R_equiv),
        "grid_convergence": None if coarse is None else abs(C - coarse) / C,
    }
    _emit(config, _metadata("capacitance", config), [record], None, out_path)
    return 0


def _cmd_screened(config, out_path):
    eps0 = CODATA.eps0
    R = config["R"]
    Q = config["charge_fraction"] * rayleigh_charge(R, config["sigma"])
    try:
        ratios = [float(tok) for tok in str(config["rd_over_R"]).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse rd_over_R list {config['rd_over_R']!r}") from None
    if not ratios:
        raise ConfigError("rd_over_R list is empty")
    conductor = Q**2 / (8.0 * math.pi * eps0 * R)
    uniform = 3.0 * Q**2 / (20.0 * math.pi * eps0 * R)

    records = []
    for ratio in ratios:
        n0 = ion_density_for_debye_radius(ratio * R, epsilon_r=1.0,
                                          temperature=config["temp"])
        liquid = Liquid(sigma=config["sigma"], epsilon_r=1.0,
                        temperature=config["temp"], ion_density_n0=n0)
        spec = DropletSpec(R, liquid, Q)
        _, result = screened_mod.minimize_screened_ball(spec, config["grid_n"])
        records.append({
            "rd_over_R": ratio,
            "electrostatic_J": result.electrostatic,
            "entropic_J": result.entropic,
            "total_J": result.total,
            "gap_vs_conductor": (result.electrostatic - conductor) / conductor,
            "gap_vs_uniform": (result.electrostatic - uniform) / uniform,
        })
    summary = {"conductor_energy_J": conductor, "uniform_energy_J": uniform,
               "surface_energy_J": 4.0 * math.pi * config["sigma"] * R**2}
    _emit(config, _metadata("screened", config), records, summary, out_path)
    return 0


_RUNNERS = {
    "rayleigh": _cmd_rayleigh,
    "barrier-scan": _cmd_barrier_scan,
    "tentacle": _cmd_tentacle,
    "perturbation": _cmd_perturbation,
    "capacitance": _cmd_capacitance,
    "screened": _cmd_screened,
}


def _add_common(parser):
    parser.add_argument("--config", help="flat key=value config file ('#' comments)")
    parser.add_argument("--R", help="drop radius in m (default 1e-05)")
    parser.add_argument("--sigma", help="surface tension in N/m (default 0.073, water)")
    parser.add_argument("--temp", help="temperature in K (default 293)")
    parser.add_argument("--charge-fraction", dest="charge_fraction",
                        help="Q / Q_R (default 0.5)")
    parser.add_argument("--epsilon-r", dest="epsilon_r",
                        help="relative dielectric constant (default 80)")
    parser.add_argument("--ion-density", dest="ion_density",
                        help="free ion density per species in 1/m^3 (default 6.02e25)")
    parser.add_argument("--format", choices=["csv", "json"],
                        help="output format (default csv)")
    parser.add_argument("--out", help="output path (default stdout)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="chargedrop",
        description="Charged-drop energetics: Rayleigh reference numbers, "
                    "protrusion energy barriers, tentacle bounds, smooth-spike "
                    "perturbations, BEM capacitances, screened-ball profiles. "
                    "Defaults are the water benchmark: R=10 um, sigma=0.073 N/m, "
                    "T=293 K, Q/Q_R=0.5.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("rayleigh", help="critical charge, Debye radius and "
                                         "spherical reference energies")
    _add_common(p)

    p = subs.add_parser("barrier-scan", help="delta-E(r, h) landscape over "
                                             "protrusion heights")
    _add_common(p)
    p.add_argument("--r", help="protrusion equatorial radius in m (default 1e-09)")
    p.add_argument("--h-min", dest="h_min", help="smallest height in m (default 5e-08)")
    p.add_argument("--h-max", dest="h_max", help="largest height in m (default 1.6e-06)")
    p.add_argument("--n", help="number of log-spaced samples (default 64)")
    p.add_argument("--field", help="external field magnitude in V/m (default 0)")
    p.add_argument("--field-mode", dest="field_mode", choices=["opt", "post"],
                   help="include field in the charge optimization (opt, default) "
                        "or add it after optimizing at zero field (post)")

    p = subs.add_parser("tentacle", help="slender-tentacle energy deficit sweep")
    _add_common(p)
    p.add_argument("--h-min", dest="h_min", help="smallest height in m (default R)")
    p.add_argument("--h-max", dest="h_max", help="largest height in m (default 100R)")
    p.add_argument("--n", help="number of log-spaced samples (default 64)")

    p = subs.add_parser("perturbation", help="smooth-spike construction sweep over "
                                             "spike height delta")
    _add_common(p)
    p.add_argument("--delta-min", dest="delta_min",
                   help="smallest spike height in m (default 0.002R)")
    p.add_argument("--delta-max", dest="delta_max",
                   help="largest spike height in m (default 0.499R)")
    p.add_argument("--n", help="number of log-spaced samples (default 24)")

    p = subs.add_parser("capacitance", help="BEM capacitance of axisymmetric "
                                            "conductors")
    _add_common(p)
    p.add_argument("--shape", choices=["sphere", "spheroid", "cylinder", "bump"],
                   help="shape family (default sphere)")
    p.add_argument("--r", help="shape radius parameter in m (default 1)")
    p.add_argument("--h", help="shape height parameter in m (default 4)")
    p.add_argument("--fillet-ratio", dest="fillet_ratio",
                   help="bump junction fillet radius as a fraction of r (default 0.25)")
    p.add_argument("--panels", help="number of ring panels (default 200)")
    p.add_argument("--curve-file", dest="curve_file",
                   help="two-column (z rho) meridian curve file; overrides --shape")

    p = subs.add_parser("screened", help="screened-ball minimal charge profiles "
                                         "over a list of r_D/R ratios")
    _add_common(p)
    p.add_argument("--rd-over-R", dest="rd_over_R",
                   help="comma-separated r_D/R values (default 0.01,0.1,1,10,100)")
    p.add_argument("--grid-n", dest="grid_n",
                   help="radial cells for the solver (default 512)")

    return parser


def run(argv=None):
    args = _build_parser().parse_args(argv)
    config = _resolve_config(args)
    out_path = args.out
    return _RUNNERS[args.subcommand](config, out_path)


def main(argv=None):
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"chargedrop: config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"chargedrop: domain error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"chargedrop: numerical error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
