"""``apt-flow`` command line: figure data as CSV/JSON, circuit export, symmetry reports.

Settings are resolved as defaults < ``--config`` file < command-line flags.
The config file is either flat ``key = value`` text (``#`` comments, lists
comma separated) or a JSON manifest written by a previous run, which replays
that run.

Exit codes: 0 success, 1 domain or configuration error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import export_circuit, parse_circuit
from .exceptions import AptFlowError
from .hamiltonian import AptHamiltonian, from_lambda, spectrum, symmetry_check
from .lcu import Scheme, build_circuit, environment_state, run_circuit
from .nmr import ExperimentConfig, noise_monte_carlo
from .observables import distinguishability_series, oscillation_metrics, purity

OUT_ENV = "APT_FLOW_OUT"
DEFAULT_OUT = "apt_flow_out"
COMMANDS = ("fig3", "fig4a", "fig4b", "export-circuit", "symmetry")

DEFAULTS = {
    "s": 3.0,
    "lambdas": [2.0, 1.5, 1.01, 0.5],
    "t_final": 1.0,
    "n_points": 9,
    "noise_fraction": 0.05,
    "n_trials": 200,
    "seed": 20190101,
    "scheme": "four",
    "dense": 1000,
    "lambda_min": 0.5,
    "lambda_max": 5.0,
    "steps": 10,
    "lambda": 2.0,
    "t": 0.0,
    "r": 6.0,
    "theta": 0.0,
    "mu": 3.0,
}
_INT_KEYS = {"n_points", "n_trials", "seed", "dense", "steps"}
_STR_KEYS = {"scheme"}


class ConfigError(AptFlowError, ValueError):
    pass


def _coerce(key: str, value):
    if key not in DEFAULTS:
        raise ConfigError(f"unknown setting {key!r}")
    try:
        if key == "lambdas":
            if isinstance(value, str):
                value = [v for v in value.replace(" ", "").split(",") if v]
            return [float(v) for v in value]
        if key in _INT_KEYS:
            return int(value)
        if key in _STR_KEYS:
            return str(value)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def read_config(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        data = data.get("config", data)
        return {k: _coerce(k, v) for k, v in data.items()}
    settings = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key = key.strip().replace("-", "_")
        settings[key] = _coerce(key, value.strip())
    return settings


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else _fmt(c) for c in row])
    return buf.getvalue()


def _lam_tag(lam: float) -> str:
    return format(lam, "g")


def _experiment_config(cfg: dict) -> ExperimentConfig:
    return ExperimentConfig(
        s=cfg["s"], lambdas=tuple(cfg["lambdas"]), t_final=cfg["t_final"], n_points=cfg["n_points"],
        noise_fraction=cfg["noise_fraction"], n_trials=cfg["n_trials"], seed=cfg["seed"],
    )


def cmd_fig3(cfg: dict, out: Path, workers: int = 1) -> list[Path]:
    """Nine-point grid with noise bands plus a dense theory curve, one pair of CSVs per lambda."""
    exp = _experiment_config(cfg)
    bands = noise_monte_carlo(exp, workers=workers)
    dense = np.linspace(0.0, exp.t_final, cfg["dense"])
    files = []
    for lam, band in bands.items():
        rows = [(t, d, lo, hi, p, "1" if k == 0 else "0")
                for k, (t, d, lo, hi, p) in enumerate(zip(band.times, band.nominal, band.lower, band.upper,
                                                          band.success_probability))]
        path = out / f"fig3_grid_lambda_{_lam_tag(lam)}.csv"
        _atomic_write(path, _csv_text(["time", "D_nominal", "D_lower", "D_upper", "success_prob", "reference"], rows))
        files.append(path)
        curve = distinguishability_series(from_lambda(exp.s, lam), dense)
        path = out / f"fig3_curve_lambda_{_lam_tag(lam)}.csv"
        _atomic_write(path, _csv_text(["time", "D"], zip(curve.times, curve.distinguishability)))
        files.append(path)
    return files


def fig4a_lambdas(cfg: dict) -> list[float]:
    if cfg.get("lambdas_explicit"):
        return list(cfg["lambdas"])
    return list(np.linspace(cfg["lambda_min"], cfg["lambda_max"], cfg["steps"]))


def cmd_fig4a(cfg: dict, out: Path) -> list[Path]:
    """Period (numeric and formula) and amplitude of D(t) against lambda."""
    rows = []
    for lam in fig4a_lambdas(cfg):
        m = oscillation_metrics(cfg["s"], lam)
        rows.append((lam, m.regime.value, m.period, m.period_formula, m.amplitude, m.d_min))
    path = out / "fig4a.csv"
    _atomic_write(path, _csv_text(["lambda", "regime", "period_numeric", "period_formula", "amplitude", "d_min"], rows))
    return [path]


def cmd_fig4b(cfg: dict, out: Path) -> list[Path]:
    """Purity of the work qubit with the ancillas traced out, on a dense grid."""
    grid = np.linspace(0.0, cfg["t_final"], cfg["dense"])
    files = []
    for lam in cfg["lambdas"]:
        h = from_lambda(cfg["s"], lam)
        rows = [(t, purity(environment_state(h, t))) for t in grid]
        path = out / f"fig4b_lambda_{_lam_tag(lam)}.csv"
        _atomic_write(path, _csv_text(["time", "purity"], rows))
        files.append(path)
    return files


def cmd_export_circuit(cfg: dict, out: Path) -> tuple[list[Path], dict]:
    scheme = Scheme(cfg["scheme"])
    h = from_lambda(cfg["s"], cfg["lambda"])
    circuit = build_circuit(h, cfg["t"], scheme)
    text = export_circuit(circuit)
    if not parse_circuit(text).same_as(circuit):
        raise RuntimeError("exported circuit does not parse back to itself")
    _, prob, _ = run_circuit(h, cfg["t"], None, scheme)
    path = out / f"circuit_{scheme.value}_lambda_{_lam_tag(cfg['lambda'])}_t_{_lam_tag(cfg['t'])}.txt"
    _atomic_write(path, text)
    return [path], {"gate_count": len(circuit), "success_probability": prob, "file": path.name}


def symmetry_report(r: float, theta: float, s: float, mu: float) -> dict:
    h = AptHamiltonian(r, theta, s, mu)
    sp = spectrum(h)
    sym = symmetry_check(h)

    def cplx(z):
        return [z.real, z.imag]

    return {
        "r": r, "theta": theta, "s": s, "mu": mu,
        "eps_plus": cplx(sp.eps_plus), "eps_minus": cplx(sp.eps_minus), "w": cplx(sp.w),
        "w_squared": sp.w_squared, "regime": sp.regime.value,
        "negative_transpose": sym.negative_transpose, "anti_commutes": sym.anti_commutes,
    }


def cmd_symmetry(cfg: dict, out: Path) -> tuple[list[Path], dict]:
    report = symmetry_report(cfg["r"], cfg["theta"], cfg["s"], cfg["mu"])
    path = out / "symmetry.json"
    _atomic_write(path, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return [path], report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apt-flow", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value file or a JSON run manifest")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    p.add_argument("--seed", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--lambda", dest="lambdas", help="comma-separated lambda values")
    p.add_argument("--t-final", type=float)
    p.add_argument("--points", dest="n_points", type=int)
    p.add_argument("--noise", dest="noise_fraction", type=float)
    p.add_argument("--trials", dest="n_trials", type=int)
    p.add_argument("--scheme", choices=[s.value for s in Scheme])
    p.add_argument("--dense", type=int, help="samples of the dense curves")
    p.add_argument("--lambda-min", type=float)
    p.add_argument("--lambda-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--t", type=float, help="evolution time for export-circuit")
    p.add_argument("--r", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--workers", type=int, default=1, help="processes for the Monte Carlo (output is unaffected)")
    p.error = _usage_error
    return p


def _usage_error(message):
    print(f"apt-flow: error: {message}", file=sys.stderr)
    raise SystemExit(1)


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    explicit = False
    if args.config:
        loaded = read_config(args.config)
        explicit = "lambdas" in loaded
        cfg.update(loaded)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = _coerce(key, value)
            explicit = explicit or key == "lambdas"
    if args.command == "export-circuit" and args.lambdas:
        values = cfg["lambdas"]
        if len(values) != 1:
            raise ConfigError("export-circuit takes a single --lambda")
        cfg["lambda"] = values[0]
    cfg["lambdas_explicit"] = explicit
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = resolve(args)
        out = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
        echo = None
        if args.command == "fig3":
            files = cmd_fig3(cfg, out, workers=args.workers)
        elif args.command == "fig4a":
            files = cmd_fig4a(cfg, out)
        elif args.command == "fig4b":
            files = cmd_fig4b(cfg, out)
        elif args.command == "export-circuit":
            files, echo = cmd_export_circuit(cfg, out)
        else:
            files, echo = cmd_symmetry(cfg, out)
        manifest = {
            "command": args.command,
            "config": {k: v for k, v in cfg.items() if k != "lambdas_explicit"},
            "seed": cfg["seed"],
            "version": __version__,
            "outputs": [f.name for f in files],
            "duration_s": time.perf_counter() - start,
        }
        if not cfg["lambdas_explicit"]:
            manifest["config"].pop("lambdas")
        _atomic_write(out / f"{args.command}_manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except (AptFlowError, ValueError) as exc:
        print(f"apt-flow: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"apt-flow: I/O error: {exc}", file=sys.stderr)
        return 2
    if echo is not None:
        print(json.dumps(echo, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
