"""``weakphase <scenario> --config <file> [--out DIR] [--seed N]``

Scenarios: retrieve, crystal, sliver, bridge, zeros.  The config is a JSON
object with keys ``scenario``, ``parameters``, ``seed`` and ``output_dir``.
Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.
Errors go to stderr as one JSON line.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import birefringence_sim as bs
from . import direct_measure_sim as dm
from . import weakvalue_bridge as wb
from .expfilter import FilterSpec, phase_error, retrieve, simulate_intensities
from .fieldio import FieldFormatError, load_field, save_field, save_intensity, save_phase, write_csv, write_json
from .presets import PRESETS, central_support, padded_grid
from .wavefield import Grid, dft
from .zeros import ZeroSet, find_real_zeros, sine_model_final_state, zero_shift_factor

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
REQUIRED = object()
PRESET_KEYS = ("sigma", "chirp", "cubic", "center", "tilt", "x", "x1", "x2",
               "lobe_offset", "lobe_weight")


class ConfigError(ValueError):
    pass


class CheckFailed(RuntimeError):
    """An in-run assertion did not hold."""

    def __init__(self, message: str, summary=None):
        super().__init__(message)
        self.summary = dict(summary or {})


def _preset_defaults(**overrides):
    base = {k: None for k in PRESET_KEYS}
    base.update(overrides)
    return base


SCHEMAS = {
    "retrieve": {
        "preset": "chirped_gaussian", "input": None, "n": 1024, "half_width": 12.0,
        "oversample": 4, "strength": 2.0, "offset": 0.05, "floor_rel": 1e-6,
        "rms_tolerance": 1e-3, **_preset_defaults(),
    },
    "crystal": {
        "theta": [0.05, 0.1, 0.2], "eps": 1e-3, "sigma": 1.0, "n": 4096, "span": 12.0,
        "allow_large_theta": False,
    },
    "sliver": {
        "preset": "cubic_phase_gaussian", "input": None, "n": 512, "half_width": 12.0,
        "theta": [0.2, 0.1, 0.05], **_preset_defaults(sigma=1.0, cubic=0.1),
    },
    "bridge": {
        "preset": "gaussian", "input": None, "n": 1024, "half_width": 12.0,
        "c": [1e-3, 3e-3, 1e-2, 3e-2, 1e-1], "p": [0.0], "s": None, **_preset_defaults(),
    },
    "zeros": {
        "eps": 0.05, "theta": 0.1, "p_max": None, "n_points": 201, "n_zeros": 2,
        "preset": None, "n": 512, "half_width": 12.0, "floor": 1e-3, **_preset_defaults(),
    },
}
TOP_KEYS = {"scenario", "parameters", "seed", "output_dir"}


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    parameters: dict
    seed: int = 0
    output_dir: str = "weakphase-out"

    def echo(self) -> dict:
        return {"scenario": self.scenario, "parameters": self.parameters,
                "seed": self.seed, "output_dir": self.output_dir}


def parse_config(record, scenario=None, seed=None, out=None) -> ScenarioConfig:
    """Validate a config mapping and fill parameter defaults."""
    if not isinstance(record, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(record) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "scenario" not in record:
        raise ConfigError("missing required key 'scenario'")
    name = record["scenario"]
    if name not in SCHEMAS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {sorted(SCHEMAS)}")
    if scenario is not None and scenario != name:
        raise ConfigError(f"command-line scenario {scenario!r} does not match config scenario {name!r}")
    params = record.get("parameters", {})
    if not isinstance(params, dict):
        raise ConfigError("'parameters' must be a mapping")
    schema = SCHEMAS[name]
    unknown = set(params) - set(schema)
    if unknown:
        raise ConfigError(f"unknown parameters for {name}: {sorted(unknown)}")
    missing = [k for k, v in schema.items() if v is REQUIRED and k not in params]
    if missing:
        raise ConfigError(f"missing parameters for {name}: {missing}")
    resolved = {k: params.get(k, v) for k, v in schema.items()}
    seed_val = record.get("seed", 0) if seed is None else seed
    if isinstance(seed_val, bool) or not isinstance(seed_val, int):
        raise ConfigError(f"seed must be an integer, got {seed_val!r}")
    out_dir = out if out is not None else record.get("output_dir", "weakphase-out")
    if not isinstance(out_dir, str):
        raise ConfigError("output_dir must be a string")
    return ScenarioConfig(name, resolved, seed_val, out_dir)


def load_config(path, scenario=None, seed=None, out=None) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from None
    if not text.strip():
        record = {}
    else:
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(record, scenario, seed, out)


# --- parameter helpers ------------------------------------------------------

def _num(params, key, kind=float):
    val = params[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"parameter {key!r} must be a number, got {val!r}")
    if kind is int:
        if int(val) != val:
            raise ConfigError(f"parameter {key!r} must be an integer, got {val!r}")
        return int(val)
    return float(val)


def _num_list(params, key):
    val = params[key]
    items = val if isinstance(val, list) else [val]
    if not items:
        raise ConfigError(f"parameter {key!r} must not be empty")
    out = []
    for item in items:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"parameter {key!r} must hold numbers, got {item!r}")
        out.append(float(item))
    return out


def _build_object(cfg: ScenarioConfig, grid: Grid, with_support: bool):
    """Object from ``input`` (field CSV) or from a named preset."""
    params = cfg.parameters
    if params.get("input"):
        return load_field(params["input"])
    name = params["preset"]
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    builder = PRESETS[name]
    accepted = inspect.signature(builder).parameters
    kwargs = {}
    for key in PRESET_KEYS:
        if params.get(key) is None:
            continue
        if key not in accepted:
            raise ConfigError(f"preset {name!r} does not take parameter {key!r}")
        kwargs[key] = _num(params, key)
    if "seed" in accepted:
        kwargs["seed"] = cfg.seed
    if with_support and "support" in accepted:
        kwargs["support"] = central_support(grid, _num(params, "oversample", int))
    return builder(grid, **kwargs)


def _finite(label, *values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise CheckFailed(f"{label} is not finite")


# --- scenarios --------------------------------------------------------------

def run_retrieve(cfg: ScenarioConfig, out: Path) -> dict:
    prm = cfg.parameters
    grid = padded_grid(_num(prm, "n", int), _num(prm, "half_width"), _num(prm, "oversample", int))
    obj = _build_object(cfg, grid, with_support=True)
    grid = obj.grid
    fs = FilterSpec.default_for(obj, _num(prm, "strength"), _num(prm, "offset"))
    I0, I1 = simulate_intensities(obj, fs)
    pr, rec = retrieve(I0, I1, fs, grid, floor_rel=_num(prm, "floor_rel"), include_tilt=True)
    rms, _ = phase_error(pr, obj)
    truth = obj.normalized()
    overlap = abs(np.sum(np.conj(rec.normalized().values) * truth.values) * grid.dx)
    save_field(obj, out / "object.csv")
    save_intensity(grid.p, I0, out / "intensity.csv")
    save_intensity(grid.p, I1, out / "intensity_filtered.csv")
    save_phase(pr, out / "phase.csv")
    save_field(rec, out / "reconstruction.csv")
    _finite("retrieved phase", pr.phase[pr.valid_mask], pr.tilt)
    summary = {"phase_rms": rms, "tilt": pr.tilt, "valid_bins": int(pr.valid_mask.sum()),
               "reconstruction_overlap_error": float(1 - overlap), "c": fs.c, "s": fs.s,
               "imag_residual": pr.diagnostics["imag_residual"]}
    if not rms <= _num(prm, "rms_tolerance"):
        raise CheckFailed(f"phase RMS {rms:.3g} exceeds rms_tolerance {prm['rms_tolerance']}", summary)
    return summary


def run_crystal(cfg: ScenarioConfig, out: Path) -> dict:
    prm = cfg.parameters
    probe = bs.default_probe(_num(prm, "n", int), _num(prm, "sigma"), _num(prm, "span"))
    eps = _num(prm, "eps")
    rows = []
    for theta in _num_list(prm, "theta"):
        sc = bs.CrystalScenario(probe, eps, theta, bool(prm["allow_large_theta"]))
        rep = bs.measure_displacement(sc)
        _finite("displacement report", *rep.as_row().values())
        if not 0 < rep.post_selection_probability <= 1 + 1e-12:
            raise CheckFailed(f"post-selection probability {rep.post_selection_probability} outside (0, 1]")
        rows.append(rep.as_row())
    header = ["theta", "eps", "exact", "weak", "amplified", "zero_model", "probability"]
    write_csv(out / "displacement.csv", header, ([r[h] for h in header] for r in rows))
    rel = [abs(r["exact"] - r["weak"]) / abs(r["weak"]) for r in rows]
    return {"rows": len(rows), "max_relative_deviation_from_weak": max(rel)}


def run_sliver(cfg: ScenarioConfig, out: Path) -> dict:
    prm = cfg.parameters
    grid = Grid.spanning(_num(prm, "half_width"), _num(prm, "n", int))
    obj = _build_object(cfg, grid, with_support=False)
    truth = dm.fix_gauge(obj)
    thetas = _num_list(prm, "theta")
    conv, oper = [], []
    for k, theta in enumerate(thetas):
        probe = dm.SliverScenario(obj, theta, int(np.argmax(np.abs(obj.values))))
        ps = dm.sliver_rotate(probe)
        if abs(ps.norm2() - dft(obj).norm2()) > 1e-12 * dft(obj).norm2():
            raise CheckFailed("sliver rotation did not conserve norm")
        rec = dm.scan_reconstruct(obj, theta)
        orec = dm.operational_reconstruct(obj, theta)
        route_diff = float(np.max(np.abs(dm.scan_weak_values(obj, theta)
                                         - dm.operational_weak_values(obj, theta))))
        _finite("reconstruction", rec.values, orec.values)
        write_csv(out / f"scan_{k}.csv", ["x", "re_true", "im_true", "re_rec", "im_rec"],
                  zip(obj.x, truth.values.real, truth.values.imag, rec.values.real, rec.values.imag))
        conv.append((theta, dm.max_pointwise_error(rec, obj), dm.overlap_error(rec, obj)))
        oper.append((theta, dm.max_pointwise_error(orec, obj), dm.overlap_error(orec, obj), route_diff))
    write_csv(out / "convergence.csv", ["theta", "max_err", "overlap_err"], conv)
    write_csv(out / "operational.csv", ["theta", "max_err", "overlap_err", "route_diff"], oper)
    summary = {"scan_files": [f"scan_{k}.csv" for k in range(len(thetas))],
               "overlap_error": {repr(t): e for t, _, e in conv}}
    if len(thetas) >= 2:
        summary["max_err_slope"] = wb.loglog_slope(thetas, [c[1] for c in conv])
        summary["route_diff_slope"] = wb.loglog_slope(thetas, [o[3] for o in oper])
    return summary


def run_bridge(cfg: ScenarioConfig, out: Path) -> dict:
    prm = cfg.parameters
    grid = Grid.spanning(_num(prm, "half_width"), _num(prm, "n", int))
    obj = _build_object(cfg, grid, with_support=False)
    s = obj.grid.x0 - obj.grid.dx if prm["s"] is None else _num(prm, "s")
    c_list = _num_list(prm, "c")
    rows, slopes = [], {}
    for p in _num_list(prm, "p"):
        reports = wb.bridge_residual(obj, s, c_list, p)
        rows.extend(r.as_row() for r in reports)
        res = [r.residual for r in reports]
        _finite("bridge residual", res)
        if len(c_list) >= 2 and min(res) > 0:
            slopes[repr(p)] = wb.loglog_slope(c_list, res)
    header = ["p", "c", "lhs", "rhs", "residual", "wv_re", "wv_im"]
    write_csv(out / "bridge.csv", header, ([r[h] for h in header] for r in rows))
    return {"s": s, "slopes": slopes, "max_residual": max(r["residual"] for r in rows)}


def run_zeros(cfg: ScenarioConfig, out: Path) -> dict:
    prm = cfg.parameters
    eps, theta = _num(prm, "eps"), _num(prm, "theta")
    p_max = 0.2 / abs(eps) if prm["p_max"] is None else _num(prm, "p_max")
    p = np.linspace(-p_max, p_max, _num(prm, "n_points", int))
    exact = bs.exact_factor(eps, theta, p)
    sine = sine_model_final_state(eps, theta, p)
    shift, linear = zero_shift_factor(theta, eps, p)
    write_csv(out / "zeros.csv",
              ["p", "exact_re", "exact_im", "sine_re", "sine_im", "shift_re", "shift_im", "linear_phase"],
              zip(p, exact.real, exact.imag, sine.real, sine.imag, shift.real, shift.imag, linear))
    K = _num(prm, "n_zeros", int)
    zlist = [(k * np.pi - 1j * theta) / eps for k in range(-K, K + 1)]
    zs = ZeroSet(zlist, scale=sine_model_final_state(eps, theta, 0.0), support=(-abs(eps), abs(eps)))
    write_json(out / "zeroset.json", zs.to_dict())
    z0 = -1j * theta / eps
    at_zero = abs(-1j * np.sin(eps * z0 + 1j * theta))
    if at_zero > 1e-12:
        raise CheckFailed(f"sine model does not vanish at -i theta/eps (|f|={at_zero:.3g})")
    summary = {"z0": [z0.real, z0.imag], "max_sine_model_deviation": float(np.max(np.abs(sine - exact)))}
    if prm["preset"] is not None:
        grid = Grid.spanning(_num(prm, "half_width"), _num(prm, "n", int))
        obj = _build_object(cfg, grid, with_support=False)
        summary["real_zeros"] = find_real_zeros(dft(obj), _num(prm, "floor"))
    return summary


RUNNERS = {
    "retrieve": run_retrieve,
    "crystal": run_crystal,
    "sliver": run_sliver,
    "bridge": run_bridge,
    "zeros": run_zeros,
}


def run(cfg: ScenarioConfig) -> dict:
    """Run one scenario, write its files and ``run.json``; returns the metadata record.

    A failed in-run check still writes ``run.json`` (status ``check_failed``)
    before the :class:`CheckFailed` propagates.
    """
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    failure = None
    with warnings.catch_warnings(record=True) as log:
        warnings.simplefilter("always")
        try:
            summary = RUNNERS[cfg.scenario](cfg, out)
        except CheckFailed as exc:
            failure = exc
            summary = {**exc.summary, "failure": str(exc)}
    meta = {
        "config": cfg.echo(),
        "version": __version__,
        "status": "ok" if failure is None else "check_failed",
        "summary": _plain(summary),
        "warnings": [f"{w.category.__name__}: {w.message}" for w in log],
    }
    write_json(out / "run.json", meta)
    if failure is not None:
        raise failure
    return meta


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    return obj


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="weakphase", description="Run a named weakphase scenario.")
    ap.add_argument("scenario", choices=sorted(SCHEMAS))
    ap.add_argument("--config", required=True, help="JSON config file")
    ap.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    ap.add_argument("--seed", type=int, default=None, help="seed for randomized objects")
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    try:
        cfg = load_config(args.config, args.scenario, args.seed, args.out)
        run(cfg)
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except (FieldFormatError, OSError) as exc:
        return _fail("io", str(exc), EXIT_IO)
    except CheckFailed as exc:
        return _fail("check", str(exc), EXIT_NUMERIC)
    except (ValueError, OverflowError, FloatingPointError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("numerical", str(exc), EXIT_NUMERIC)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
