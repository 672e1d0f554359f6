"""Command-line interface.

Subcommands: solve, sweep-theta, sweep-n, threshold, limits, oscillation,
montecarlo. Every option can also come from a flat ``key = value`` config
file (``--config FILE``); explicit flags win over file entries. Numeric
output is written as CSV (header row, 17-significant-digit scientific
notation) or JSON (one object per file), both byte-deterministic for a fixed
config and seed.

Exit codes: 0 on success, 2 on configuration errors, 3 on numerical failure
(non-positive-definite kernel, singular system, non-finite output).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .asymptotics import (
    detect_oscillation,
    limit_report,
    path_limit_error,
    verify_threshold,
)
from .equilibrium import (
    ModelAssumptionError,
    monte_carlo_costs,
    solve_equilibrium,
)
from .kernels import (
    ExponentialKernel,
    ModelParams,
    PowerLawKernel,
    make_equidistant_grid,
)
from .matrices import build_impact_matrices
from .sweeps import sweep_n, sweep_theta

__all__ = ["main", "ConfigError"]


class ConfigError(ValueError):
    """Invalid or missing configuration."""


def _fmt(x) -> str:
    return format(float(x), ".16e")


def _float(raw: str) -> float:
    return float(raw)


def _int(raw: str) -> int:
    return int(raw)


def _str(raw: str) -> str:
    return raw


def _float_list(raw: str):
    return tuple(float(part) for part in raw.split(","))


@dataclass(frozen=True)
class Opt:
    key: str
    parse: Callable
    default: object = None
    required: bool = False
    help: str = ""


_KERNEL_OPTS = (
    Opt("lambda", _float, 1.0, help="transient impact size of the exponential kernel"),
    Opt("rho", _float, 1.0, help="decay rate of the exponential kernel"),
    Opt("gamma", _float, 0.0, help="permanent impact of the exponential kernel"),
    Opt("power-law", _float, None, help="use a power-law kernel (1+t)^-EXP instead"),
)
_GRID_OPTS = (
    Opt("T", _float, 1.0, help="trading horizon"),
    Opt("N", _int, required=True, help="number of trading intervals"),
)
_GAME_OPTS = (
    Opt("theta", _float, 0.0, help="quadratic transaction-cost coefficient"),
    Opt("x0", _float, 1.0, help="initial inventory of agent x"),
    Opt("y0", _float, 1.0, help="initial inventory of agent y"),
)
_OUT = Opt("out", _str, None, help="output file (stdout when omitted)")

_COMMAND_OPTS = {
    "solve": _KERNEL_OPTS
    + _GRID_OPTS
    + _GAME_OPTS
    + (
        _OUT,
        Opt("dump-matrices", _str, None, help="prefix for raw matrix CSV dumps"),
    ),
    "sweep-theta": _KERNEL_OPTS
    + _GRID_OPTS
    + (
        Opt("x0", _float, 1.0, help="initial inventory of agent x"),
        Opt("y0", _float, 1.0, help="initial inventory of agent y"),
        Opt("theta-min", _float, 0.0, help="first cost level"),
        Opt("theta-max", _float, required=True, help="last cost level (inclusive)"),
        Opt("theta-step", _float, 0.005, help="cost-level increment"),
        _OUT,
    ),
    "sweep-n": _KERNEL_OPTS
    + (
        Opt("T", _float, 1.0, help="trading horizon"),
        Opt("theta", _float, 0.0, help="quadratic transaction-cost coefficient"),
        Opt("x0", _float, 1.0, help="initial inventory of agent x"),
        Opt("y0", _float, 1.0, help="initial inventory of agent y"),
        Opt("n-min", _int, required=True, help="smallest interval count"),
        Opt("n-max", _int, required=True, help="largest interval count (inclusive)"),
        _OUT,
    ),
    "threshold": (
        Opt("lambda", _float, 1.0, help="transient impact size"),
        Opt("gamma", _float, 0.0, help="permanent impact"),
        Opt("theta", _float, required=True, help="cost level to scan"),
        Opt("T", _float, 1.0, help="trading horizon"),
        Opt("n-max", _int, 60, help="scan N = 1..n-max"),
        Opt("rho-set", _float_list, (0.5, 1.0, 2.0, 4.0, 8.0), help="comma-separated decay rates"),
        _OUT,
    ),
    "limits": (
        Opt("lambda", _float, 1.0, help="transient impact size"),
        Opt("rho", _float, 1.0, help="decay rate"),
        Opt("T", _float, 1.0, help="trading horizon"),
        Opt("theta", _float, required=True, help="cost level"),
        Opt("N", _int, 4096, help="grid size for the component-limit check"),
        Opt("path-N", _int, 2048, help="grid size for the inventory-path check"),
        _OUT,
    ),
    "oscillation": _KERNEL_OPTS
    + _GRID_OPTS
    + (
        Opt("theta", _float, 0.0, help="quadratic transaction-cost coefficient"),
        Opt("tol", _float, 0.0, help="sign threshold for the pattern"),
        _OUT,
    ),
    "montecarlo": _KERNEL_OPTS
    + _GRID_OPTS
    + _GAME_OPTS
    + (
        Opt("samples", _int, 100000, help="number of realized-cost samples"),
        Opt("seed", _int, 0, help="RNG seed"),
        Opt("s0", _float, 10.0, help="unaffected price level"),
        _OUT,
    ),
}

_HELP = {
    "solve": "compute the equilibrium and write it as JSON",
    "sweep-theta": "equilibrium costs over a grid of cost levels (CSV)",
    "sweep-n": "equilibrium costs over a range of grid sizes (CSV)",
    "threshold": "scan fundamental strategies for negative components",
    "limits": "compare w components and inventory path to their limits",
    "oscillation": "sign-pattern diagnostics of the fundamental strategies",
    "montecarlo": "check closed-form costs against realized-cost samples",
}


def _dest(key: str) -> str:
    return "opt_" + key.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hotpotato",
        description="two-trader liquidation games under transient price impact",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, opts in _COMMAND_OPTS.items():
        sub = commands.add_parser(name, help=_HELP[name])
        sub.add_argument("--config", default=None, help="flat key = value config file")
        for opt in opts:
            sub.add_argument(f"--{opt.key}", dest=_dest(opt.key), default=None, help=opt.help)
        sub.set_defaults(opts=opts, handler=_HANDLERS[name])
    return parser


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and explicit flags (flags win)."""
    file_values = _load_config_file(args.config) if args.config else {}
    known = {opt.key for opt in args.opts}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    resolved = {}
    for opt in args.opts:
        raw = getattr(args, _dest(opt.key))
        if raw is None:
            raw = file_values.get(opt.key)
        if raw is None:
            if opt.required:
                raise ConfigError(f"missing required option --{opt.key}")
            resolved[opt.key] = opt.default
            continue
        try:
            resolved[opt.key] = opt.parse(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for --{opt.key}: {raw!r} ({exc})") from exc
    return resolved


def _make_kernel(cfg: dict):
    if cfg.get("power-law") is not None:
        return PowerLawKernel(exponent=cfg["power-law"])
    return ExponentialKernel(lam=cfg["lambda"], rho=cfg["rho"], gamma=cfg["gamma"])


def _kernel_payload(kernel) -> dict:
    if isinstance(kernel, PowerLawKernel):
        return {"kind": "power-law", "exponent": kernel.exponent}
    return {
        "kind": "exponential",
        "lambda": kernel.lam,
        "rho": kernel.rho,
        "gamma": kernel.gamma,
    }


def _plain(obj):
    """Recursively convert numpy scalars/arrays for JSON output."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):  # before int: bool is an int subclass
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        print(f"wrote {path}")


def _write_json(path: Optional[str], payload: dict) -> None:
    _write_text(path, json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")


def _write_csv(path: Optional[str], header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _dump_matrix(path: str, matrix: np.ndarray) -> None:
    lines = [",".join(_fmt(cell) for cell in row) for row in matrix]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"wrote {path}")


def _game_params(cfg: dict) -> ModelParams:
    return ModelParams(
        kernel=_make_kernel(cfg),
        grid=make_equidistant_grid(cfg["N"], cfg["T"]),
        theta=cfg["theta"],
        x0=cfg.get("x0", 1.0),
        y0=cfg.get("y0", 1.0),
    )


def cmd_solve(cfg: dict) -> int:
    params = _game_params(cfg)
    solution = solve_equilibrium(params)
    if cfg["dump-matrices"]:
        mats = build_impact_matrices(params)
        prefix = cfg["dump-matrices"]
        _dump_matrix(f"{prefix}.gram.csv", mats.gram)
        _dump_matrix(f"{prefix}.gram_cost.csv", mats.gram_cost)
        _dump_matrix(f"{prefix}.causal.csv", mats.causal)
    payload = {
        "params": {
            "kernel": _kernel_payload(params.kernel),
            "n": params.grid.n_intervals,
            "horizon": params.grid.horizon,
            "theta": params.theta,
            "x0": params.x0,
            "y0": params.y0,
        },
        "v": solution.v,
        "w": solution.w,
        "xi_star": solution.xi_star,
        "eta_star": solution.eta_star,
        "cost_x": solution.cost_x,
        "cost_y": solution.cost_y,
        "mu": solution.mu,
        "beta": solution.beta,
        "kkt_residual": solution.kkt_residual,
    }
    _write_json(cfg["out"], payload)
    return 0


def cmd_sweep_theta(cfg: dict) -> int:
    lo, hi, step = cfg["theta-min"], cfg["theta-max"], cfg["theta-step"]
    if step <= 0.0:
        raise ConfigError("theta-step must be positive")
    if hi < lo:
        raise ConfigError("theta-max must be at least theta-min")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    thetas = lo + step * np.arange(count)
    sweep = sweep_theta(
        _make_kernel(cfg),
        make_equidistant_grid(cfg["N"], cfg["T"]),
        thetas,
        x0=cfg["x0"],
        y0=cfg["y0"],
    )
    rows = zip(sweep.values, sweep.cost_x, sweep.cost_y)
    _write_csv(cfg["out"], ("theta", "cost_x", "cost_y"), rows)
    return 0


def cmd_sweep_n(cfg: dict) -> int:
    if cfg["n-min"] < 1 or cfg["n-max"] < cfg["n-min"]:
        raise ConfigError("need 1 <= n-min <= n-max")
    n_values = list(range(cfg["n-min"], cfg["n-max"] + 1))
    sweep = sweep_n(
        _make_kernel(cfg),
        n_values,
        horizon=cfg["T"],
        theta=cfg["theta"],
        x0=cfg["x0"],
        y0=cfg["y0"],
    )
    rows = zip(sweep.values, sweep.cost_x, sweep.cost_y)
    _write_csv(cfg["out"], ("n", "cost_x", "cost_y"), rows)
    return 0


def cmd_threshold(cfg: dict) -> int:
    report = verify_threshold(
        lam=cfg["lambda"],
        gamma=cfg["gamma"],
        theta=cfg["theta"],
        horizon=cfg["T"],
        n_set=range(1, cfg["n-max"] + 1),
        rho_set=cfg["rho-set"],
    )
    payload = {
        "theta": report.theta,
        "theta_star": report.theta_star,
        "all_v_nonneg": report.all_v_nonneg,
        "all_w_nonneg": report.all_w_nonneg,
        "witness": None
        if report.witness is None
        else {
            "n_intervals": report.witness.n_intervals,
            "rho": report.witness.rho,
            "vector": report.witness.vector,
            "index": report.witness.index,
            "value": report.witness.value,
        },
    }
    if cfg["out"]:
        _write_json(cfg["out"], payload)
    if report.passed:
        print("PASS over scan: all components of v and w nonnegative")
    else:
        wit = report.witness
        print(
            f"FAIL over scan: {wit.vector}[{wit.index}] = {wit.value:.6e} "
            f"at N={wit.n_intervals}, rho={wit.rho:g}"
        )
    return 0


def cmd_limits(cfg: dict) -> int:
    report = limit_report(
        lam=cfg["lambda"],
        rho=cfg["rho"],
        horizon=cfg["T"],
        theta=cfg["theta"],
        n_intervals=cfg["N"],
    )
    payload = {
        "n_intervals": report.n_intervals,
        "theta": report.theta,
        "component_limits": report.component_limits,
        "empirical_values": report.empirical_values,
        "max_abs_error": report.max_abs_error,
    }
    if cfg["theta"] > 0.0:
        path_err = path_limit_error(
            lam=cfg["lambda"],
            rho=cfg["rho"],
            horizon=cfg["T"],
            theta=cfg["theta"],
            n_intervals=cfg["path-N"],
        )
        payload["path_n_intervals"] = cfg["path-N"]
        payload["path_max_error"] = path_err
        print(
            f"max component error at N={cfg['N']}: {report.max_abs_error:.6e}; "
            f"max path error at N={cfg['path-N']}: {path_err:.6e}"
        )
    else:
        # the limit inventory profile is a theta > 0 statement
        print(f"max component error at N={cfg['N']}: {report.max_abs_error:.6e}")
    if cfg["out"]:
        _write_json(cfg["out"], payload)
    return 0


def cmd_oscillation(cfg: dict) -> int:
    params = _game_params(cfg)
    solution = solve_equilibrium(params)
    reports = {
        "v": detect_oscillation(solution.v, tol=cfg["tol"]),
        "w": detect_oscillation(solution.w, tol=cfg["tol"]),
    }
    payload = {"n": params.grid.n_intervals, "theta": params.theta}
    for name, rep in reports.items():
        payload[name] = {
            "alternating": rep.alternating,
            "sign_pattern": rep.sign_pattern,
            "num_sign_changes": rep.num_sign_changes,
            "min_abs_component": rep.min_abs_component,
        }
        print(
            f"{name}: alternating={rep.alternating} "
            f"sign_changes={rep.num_sign_changes} min|component|={rep.min_abs_component:.6e}"
        )
    if cfg["out"]:
        _write_json(cfg["out"], payload)
    return 0


def cmd_montecarlo(cfg: dict) -> int:
    params = _game_params(cfg)
    solution = solve_equilibrium(params)
    report = monte_carlo_costs(
        solution.xi_star,
        solution.eta_star,
        params,
        s0=cfg["s0"],
        n_samples=cfg["samples"],
        seed=cfg["seed"],
    )
    payload = {
        "n_samples": report.n_samples,
        "seed": cfg["seed"],
        "s0": cfg["s0"],
        "mean_x": report.mean_x,
        "mean_y": report.mean_y,
        "stderr_x": report.stderr_x,
        "stderr_y": report.stderr_y,
        "closed_form_x": report.closed_form_x,
        "closed_form_y": report.closed_form_y,
        "within_three_stderr": report.within_three_stderr,
    }
    if cfg["out"]:
        _write_json(cfg["out"], payload)
    verdict = "PASS" if report.within_three_stderr else "FAIL"
    print(
        f"{verdict}: |mean - closed form| vs 3*stderr: "
        f"x {abs(report.mean_x - report.closed_form_x):.6e} vs {3 * report.stderr_x:.6e}, "
        f"y {abs(report.mean_y - report.closed_form_y):.6e} vs {3 * report.stderr_y:.6e}"
    )
    return 0


_HANDLERS = {
    "solve": cmd_solve,
    "sweep-theta": cmd_sweep_theta,
    "sweep-n": cmd_sweep_n,
    "threshold": cmd_threshold,
    "limits": cmd_limits,
    "oscillation": cmd_oscillation,
    "montecarlo": cmd_montecarlo,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return args.handler(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ModelAssumptionError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
