"""Command-line front end: ``teichkit <command> [--config FILE] [--out DIR]``.

Each command reads its own TOML table (named like the command), fills in
defaults, writes ``<command>.json`` plus CSV data files into the output
directory, and exits with the error category's status code on failure:

    0 success, 2 usage, 3 config, 4 domain, 5 invariant, 6 numerics, 1 other.

The JSON summary records the fully resolved configuration, so a summary
alone is enough to rerun the computation.  Outputs contain no timestamps
and are written atomically; reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from . import circlemap as cm
from . import hilbert as hb
from . import quasifuchsian as qf
from . import teichmetric as tm
from .corpus import get_field, get_map
from .errors import ConfigError, InvariantViolation, TeichError
from .extension import ba_extend, beltrami_of, rect_grid
from .quaddiff import RationalQD, field_beltrami, pairing_integral, pairing_residue
from .trigapprox import approximate, sup_norm, _difference, RateProfile

SCHEMA_VERSION = "1.0"

_GRID = {"x_range": [-2.0, 2.0], "y_range": [0.01, 2.0], "nx": 21, "ny": 21, "log_y": True}

DEFAULTS: dict[str, dict] = {
    "qs-measure": {"maps": ["identity", "cubic", "kink2", "sine_lift"], "n_x": 256, "n_t": 32,
                   "line_x_range": [-4.0, 4.0], "line_t_range": [1e-3, 4.0]},
    "extend": {"map": "identity", "doubled": True, "grid": dict(_GRID)},
    "dilatation-field": {"map": "kink2", "method": "exact", "grid": dict(_GRID)},
    "hilbert": {"field": "sin1", "n_x": 16, "methods": ["fourier", "pv"], "pv_nodes": 16384,
                "max_discrepancy": 1e-4, "beltrami_tol": 1e-3},
    "approx-rate": {"field": "weierstrass", "n": [4, 8, 16, 32, 64, 128, 256], "kind": "jackson-vdp"},
    "pairing": {"field": "fixture", "pairs": [{"poles": [2.0], "weights": [1.0]}], "integral": True,
                "rel_tol": 1e-3},
    "distance-bracket": {"maps": ["identity", "kink2"], "phi_poles": [-1.0, 0.5, 2.0],
                         "phi_degenerate": [[0.0, 1.0], [0.0, 0.25]], "grid": {**_GRID, "x_range": [-4.0, 5.0],
                                                                              "y_range": [1e-3, 5.0],
                                                                              "nx": 91, "ny": 61}},
    "qf-check": {"seed": 0, "n_coeffs": 1000, "n_points": 16, "tol": 1e-15},
}

COMMANDS = tuple(DEFAULTS)


# ---------------------------------------------------------------------------
# configuration and output plumbing


def _merge(base: dict, over: dict, where: str) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if k not in base:
            raise ConfigError(f"unknown key {where}.{k}")
        out[k] = _merge(base[k], v, f"{where}.{k}") if isinstance(base[k], dict) else v
    return out


def load_config(command: str, path: str | None) -> dict:
    if command not in DEFAULTS:
        raise ConfigError(f"unknown command {command!r}")
    if path is None:
        return copy.deepcopy(DEFAULTS[command])
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return _merge(DEFAULTS[command], data.get(command, {}), command)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: str, rows) -> str:
    lines = [header] + [",".join(v if isinstance(v, str) else repr(float(v)) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _grid(cfg: dict) -> np.ndarray:
    return rect_grid(tuple(cfg["x_range"]), tuple(cfg["y_range"]), int(cfg["nx"]), int(cfg["ny"]),
                     bool(cfg["log_y"]))


# ---------------------------------------------------------------------------
# commands; each returns (results, {filename: csv text})


def _qs_measure(cfg):
    results, rows = {}, []
    for name in cfg["maps"]:
        h = get_map(name)
        if h.periodic:
            x, t = cm._default_circle_grids(cfg["n_x"], cfg["n_t"])
        else:
            x = np.linspace(*cfg["line_x_range"], cfg["n_x"])
            t = np.geomspace(*cfg["line_t_range"], cfg["n_t"])
        M = cm.qs_constant(h, x, t)
        prof = cm.ratio_distortion_profile(h, np.sort(t)[::-1], x)
        results[name] = {"M": M, "holder_bound": cm.holder_exponent_bound(M), "circle": h.periodic}
        rows += [(name, s, d) for s, d in zip(prof.scales, prof.distortion)]
    return results, {"qs_profile.csv": _csv("map,scale,distortion", rows)}


def _extend(cfg):
    h = get_map(cfg["map"])
    H = ba_extend(h, doubled=cfg["doubled"])
    z = _grid(cfg["grid"])
    w = H(z)
    field = beltrami_of(H, z, method="exact")
    res = {"map": h.name, "n_points": int(z.size), "max_abs_H_minus_z": float(np.max(np.abs(w - z))),
           "K_max": field.K_max, "d_upper": 0.5 * math.log(field.K_max)}
    rows = np.column_stack([z.real, z.imag, w.real, w.imag])
    return res, {"extension.csv": _csv("x,y,re_H,im_H", rows)}


def _dilatation_field(cfg):
    h = get_map(cfg["map"])
    field = beltrami_of(ba_extend(h), _grid(cfg["grid"]), method=cfg["method"])
    res = {"map": h.name, "K_max": field.K_max, "mu_sup": float(np.max(np.abs(field.mu)))}
    return res, {"dilatation.csv": _csv("x,y,re_mu,im_mu,K", field.rows())}


def _hilbert(cfg):
    V = get_field(cfg["field"])
    x = 2 * np.pi * np.arange(cfg["n_x"]) / cfg["n_x"]
    cols = {}
    for m in cfg["methods"]:
        if m == "fourier":
            cols[m] = hb.hilbert_fourier(V)(x)
        elif m == "pv":
            cols[m] = hb.hilbert_pv(V, x, n_nodes=cfg["pv_nodes"])
        elif m == "beltrami":
            cols[m] = hb.hilbert_via_beltrami(field_beltrami(V), x)
        else:
            raise ConfigError(f"unknown Hilbert method {m!r}")
    res = {"field": V.name, "methods": list(cols)}
    if "fourier" in cols and "pv" in cols:
        d = float(np.max(np.abs((cols["pv"] - cols["fourier"]) - np.mean(cols["pv"] - cols["fourier"]))))
        res["pv_vs_fourier"] = d
        if d > cfg["max_discrepancy"]:
            raise InvariantViolation(f"PV and Fourier routes differ by {d:.3e}")
    if "fourier" in cols and "beltrami" in cols:
        JV = hb.hilbert_fourier(V)
        ref = hb.normalize_01(cols["fourier"], x, (float(JV(0.0)), float(JV(1.0))))
        d = float(np.max(np.abs(cols["beltrami"] - ref)))
        res["beltrami_vs_fourier"] = d
        if d > cfg["beltrami_tol"]:
            raise InvariantViolation(f"Beltrami and Fourier routes differ by {d:.3e}")
    rows = np.column_stack([x] + list(cols.values()))
    return res, {"hilbert.csv": _csv(",".join(["x"] + list(cols)), rows)}


def _approx_rate(cfg):
    V = get_field(cfg["field"])
    ns = np.asarray(cfg["n"], dtype=int)
    err = np.array([sup_norm(_difference(V, approximate(V, int(n), cfg["kind"]))) for n in ns])
    prof = RateProfile(n=ns, error=err)
    s = prof.scaled
    res = {"field": V.name, "kind": cfg["kind"], "constant": prof.constant,
           "spread": float(s.max() / s.min()) if s.min() > 0 else float("inf")}
    rows = [(str(int(n)), e, v) for n, e, v in zip(ns, err, s)]
    return res, {"approx_rate.csv": _csv("n,error,n_error", rows)}


def _pairing(cfg):
    V = get_field(cfg["field"])
    out = []
    for pair in cfg["pairs"]:
        phi = RationalQD(poles=tuple(pair["poles"]), weights=tuple(pair.get("weights", ())),
                         numerator=tuple(pair["numerator"]) if "numerator" in pair else None)
        item = {"poles": list(phi.poles), "residue": pairing_residue(V, phi)}
        if cfg["integral"]:
            val = pairing_integral(field_beltrami(V), phi)
            rel = abs(val - item["residue"]) / max(abs(item["residue"]), 1e-300)
            item.update(quadrature=val, rel_error=rel)
            if rel > cfg["rel_tol"]:
                raise InvariantViolation(f"residue and quadrature differ (relative {rel:.3e})")
        out.append(item)
    res = {"field": V.name, "pairs": out}
    if len(out) == 1:
        res.update({k: v for k, v in out[0].items() if k != "poles"})
    return res, {}


def _distance_bracket(cfg):
    phis = tm.phi_family(tuple(cfg["phi_poles"]), tuple(map(tuple, cfg["phi_degenerate"])))
    grid = _grid(cfg["grid"])
    out, rows = [], []
    for name in cfg["maps"]:
        b = tm.distance_bracket(get_map(name), phis, grid=grid)
        if b.d_lower > b.d_upper + 1e-9:
            raise InvariantViolation(f"bracket inverted for {name}")
        out.append(b.as_dict())
        rows.append((b.map_id, b.K, b.d_upper, b.d_lower, b.gap))
    return {"brackets": out}, {"distance_bracket.csv": _csv("map,K_BA,d_upper,d_lower,gap", rows)}


def _qf_check(cfg):
    rng = np.random.default_rng(cfg["seed"])
    worst: dict[str, float] = {}
    for _ in range(cfg["n_coeffs"]):
        mu = qf.random_coefficient(rng)
        z = rng.uniform(-3, 3, cfg["n_points"]) + 1j * rng.uniform(0, 3, cfg["n_points"])
        for k, v in qf.quaternion_table(mu, z).errors.items():
            worst[k] = max(worst.get(k, 0.0), v)
    passed = {k: v <= cfg["tol"] for k, v in worst.items()}
    res = {"max_error": worst, "pass": passed, "all_pass": all(passed.values())}
    if not res["all_pass"]:
        raise InvariantViolation("quaternion relation failed")
    return res, {}


RUNNERS = {
    "qs-measure": _qs_measure,
    "extend": _extend,
    "dilatation-field": _dilatation_field,
    "hilbert": _hilbert,
    "approx-rate": _approx_rate,
    "pairing": _pairing,
    "distance-bracket": _distance_bracket,
    "qf-check": _qf_check,
}


def run(command: str, config_path: str | None = None, out_dir: str | Path = ".") -> dict:
    """Run one command and write its artifacts; returns the JSON summary."""
    cfg = load_config(command, config_path)
    results, files = RUNNERS[command](cfg)
    out = Path(out_dir)
    summary = _jsonable({"schema_version": SCHEMA_VERSION, "command": command, "config": cfg,
                         "results": results, "files": sorted(files)})
    for name, text in sorted(files.items()):
        _atomic_write(out / name, text)
    _atomic_write(out / f"{command}.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="teichkit", description="Quasisymmetric maps, Beltrami fields and bounds.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="TOML file with a table per command")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--quiet", action="store_true", help="do not echo the summary")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        summary = run(args.command, args.config, args.out)
    except TeichError as exc:
        print(f"teichkit: {exc.category} error: {exc}", file=sys.stderr)
        return exc.exit_code
    if not args.quiet:
        print(json.dumps(summary["results"], indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
