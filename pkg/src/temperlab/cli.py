"""Command-line entry point: run experiments, validate, sweep all defaults.

Exit codes: 0 success, 1 config error, 2 sampler failure, 3 validation
failure. Outputs (response_curve.csv, identity_checks.csv, manifest.json)
are written atomically and are byte-identical across reruns of the same
config and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import jsonschema
import numpy as np

from . import __version__
from .defaults import DEFAULT_CONFIGS, build_experiment, default_config
from .hmc import SamplerAbort
from .responses import (
    build_response_curve,
    covariance_identity_check,
    observable_series,
)
from .sweep import run_sweep
from .validate import run_validation

IDENTITY_CSV_HEADER = "beta,fd_derivative,covariance,residual,mc_se"

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["experiment", "n", "seed", "teacher", "grid", "sampler", "observables"],
    "properties": {
        "experiment": {"enum": ["mixture", "rrr", "nn", "conjugate"]},
        "n": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "teacher": {"type": "object"},
        "model": {"type": "object"},
        "output_dir": {"type": "string"},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["beta_min", "beta_max", "K"],
            "properties": {
                "beta_min": {"type": "number", "exclusiveMinimum": 0},
                "beta_max": {"type": "number", "exclusiveMinimum": 0},
                "K": {"type": "integer", "minimum": 2},
                "include_unity": {"type": "boolean"},
                "include_wbic": {"type": "boolean"},
            },
        },
        "sampler": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_warmup": {"type": "integer", "minimum": 0},
                "n_samples": {"type": "integer", "minimum": 100},
                "n_leapfrog": {"type": "integer", "minimum": 1},
                "target_accept": {"type": "number", "minimum": 0.5, "maximum": 0.95},
                "init_step": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "observables": {
            "type": "array",
            "items": {"type": "string"},
            "minItems": 1,
        },
    },
}


def _atomic_write(path: str, content: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(content)
    os.replace(tmp, path)


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = fh.read()
        config = json.loads(raw)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    validate_config(config, source=path)
    return config


class ConfigError(ValueError):
    pass


def validate_config(config: dict, source: str = "<config>"):
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{source}: at {loc}: {exc.message}") from exc


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _identity_check_rows(model, data, grid, hmc_config, obs, n_temps: int = 5):
    idx = np.unique(np.linspace(1, len(grid.values) - 2, n_temps).round().astype(int))
    rows = []
    for k in idx:
        rep = covariance_identity_check(
            model, data, obs, float(grid.values[k]), hmc_config
        )
        rows.append(rep)
    return rows


def run_experiment(config: dict, out_dir: str) -> dict:
    """Execute one configured experiment and write its artifacts."""
    started = time.time()
    model, data, grid, hmc_config, observables = build_experiment(config)
    sweep = run_sweep(model, data, grid, hmc_config)
    os.makedirs(out_dir, exist_ok=True)

    written = []
    for j, obs in enumerate(observables):
        curve = build_response_curve(sweep, model, data, obs)
        fname = "response_curve.csv" if j == 0 else f"response_curve_{obs.name}.csv"
        _atomic_write(os.path.join(out_dir, fname), curve.to_csv())
        written.append(fname)

    reports = _identity_check_rows(model, data, grid, hmc_config, observables[0])
    lines = [IDENTITY_CSV_HEADER]
    for rep in reports:
        lines.append(
            ",".join(
                repr(float(v))
                for v in (rep.beta, rep.fd_derivative, rep.covariance, rep.residual, rep.mc_se)
            )
        )
    _atomic_write(os.path.join(out_dir, "identity_checks.csv"), "\n".join(lines) + "\n")
    written.append("identity_checks.csv")

    manifest = {
        "artifact_version": __version__,
        "config": config,
        "config_hash": config_hash(config),
        "seed": config["seed"],
        "grid": [float(b) for b in grid.values],
        "per_beta": [
            {
                "beta": float(c.beta),
                "accept_rate": float(c.accept_rate),
                "ess_min": float(np.min(c.ess_by_coordinate)),
                "n_divergent": int(c.n_divergent),
            }
            for c in sweep.chains
        ],
        "wallclock_sec": round(time.time() - started, 3),
        "outputs": written,
    }
    _atomic_write(
        os.path.join(out_dir, "manifest.json"),
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
    )
    return manifest


def cmd_run(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    out_dir = args.out or config.get("output_dir")
    if not out_dir:
        print("config error: no output directory (use --out or output_dir)", file=sys.stderr)
        return 1
    try:
        run_experiment(config, out_dir)
    except SamplerAbort as exc:
        print(f"sampler failure: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_validate(args) -> int:
    results = run_validation()
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  ({r.detail})" if r.detail else ""
        print(f"{status}  {r.name:<{width}}  value={r.value:.4g}  tol={r.tolerance:.4g}{extra}")
        failures += 0 if r.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 3


def cmd_sweep_all(args) -> int:
    n_threads = int(os.environ.get("TEMPERLAB_THREADS", "1"))
    experiments = ["mixture", "rrr", "nn"]
    failures = {}

    def one(name):
        config = default_config(name)
        config["seed"] = args.seed
        run_experiment(config, os.path.join(args.out, name))

    if n_threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            futures = {name: pool.submit(one, name) for name in experiments}
            for name, fut in futures.items():
                try:
                    fut.result()
                except Exception as exc:  # isolate per-experiment failures
                    failures[name] = exc
    else:
        for name in experiments:
            try:
                one(name)
            except Exception as exc:
                failures[name] = exc
    for name, exc in failures.items():
        print(f"{name}: failed: {exc}", file=sys.stderr)
    return 0 if not failures else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="temperlab",
        description="Tempered-posterior response-function experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configured experiment")
    p_run.add_argument("--config", required=True, help="path to a JSON config")
    p_run.add_argument("--out", help="output directory (overrides config output_dir)")
    p_run.set_defaults(fn=cmd_run)

    p_val = sub.add_parser("validate", help="run the oracle/invariance suite")
    p_val.set_defaults(fn=cmd_validate)

    p_all = sub.add_parser("sweep-all", help="run the three default experiments")
    p_all.add_argument("--seed", type=int, default=DEFAULT_CONFIGS["mixture"]["seed"])
    p_all.add_argument("--out", required=True, help="parent output directory")
    p_all.set_defaults(fn=cmd_sweep_all)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
