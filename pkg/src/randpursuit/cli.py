"""Command line interface.

Four subcommands::

    randpursuit run <config>     one experiment from a flat JSON/TOML file
    randpursuit sweep            the builtin benchmark grid (filterable)
    randpursuit bounds F N [L]   print an objective's spectral bounds
    randpursuit verify           run the fast property suites

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import NumericError
from .harness import SWEEP_ALGORITHMS, ExperimentSpec, run_experiment, sweep_cells
from .objectives import KINDS, Objective, rp_exact_rate_bound, spectral_bounds

_CONFIG_KEYS = {
    "func", "n", "L", "algos", "runs", "seed", "budget", "target", "out",
    "ls", "drift_mode", "sarp_mu", "sarp_L", "workers", "x0", "sigma0",
    "p", "ls_tol",
}


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ValueError(f"config file not found: {path}")
    raw = p.read_bytes()
    if p.suffix == ".json":
        data = json.loads(raw)
    elif p.suffix == ".toml":
        data = tomllib.loads(raw.decode())
    else:
        try:
            data = json.loads(raw)
        except json.JSONDecodeError:
            try:
                data = tomllib.loads(raw.decode())
            except tomllib.TOMLDecodeError:
                raise ValueError(f"config file is neither valid JSON nor TOML: {path}")
    if not isinstance(data, dict):
        raise ValueError("config must be a flat key-value mapping")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _parse_algos(value) -> tuple[str, ...]:
    if isinstance(value, str):
        value = [a for a in value.split(",") if a]
    return tuple(value)


def _apply_ls_mode(algos: tuple[str, ...], ls: str | None) -> tuple[str, ...]:
    # --ls exact upgrades the base ids to their exact-oracle variants;
    # covariance schemes are inherently adaptive and pass through
    if ls in (None, "adaptive"):
        return algos
    out = []
    for a in algos:
        if a in ("rp", "sarp"):
            a = a + "-exact"
        out.append(a)
    # upgrading can collide with an explicitly listed exact id
    return tuple(dict.fromkeys(out))


def _build_spec(config: dict, out_default: str = "results") -> tuple[ExperimentSpec, str]:
    if "func" not in config:
        raise ValueError("config requires 'func'")
    if "n" not in config:
        raise ValueError("config requires 'n'")
    func = str(config["func"])
    if func not in KINDS:
        raise ValueError(f"unknown objective kind {func!r}")
    L = config.get("L")
    objective = Objective(func, int(config["n"]), None if L is None else float(L))
    algos = _apply_ls_mode(_parse_algos(config.get("algos", SWEEP_ALGORITHMS)),
                           config.get("ls"))
    x0_value = config.get("x0")
    budget = config.get("budget")
    spec = ExperimentSpec(
        objective=objective,
        algorithms=algos,
        runs=int(config.get("runs", 51)),
        base_seed=int(config.get("seed", 1000)),
        target=float(config.get("target", 1e-9)),
        budget=None if budget is None else int(budget),
        sigma0=float(config.get("sigma0", 1.0)),
        p=float(config.get("p", 0.27)),
        ls_tol=float(config.get("ls_tol", 1e-12)),
        x0_value=None if x0_value is None else float(x0_value),
        drift_mode=str(config.get("drift_mode", "taken-step")),
        sarp_mu=None if config.get("sarp_mu") is None else float(config["sarp_mu"]),
        sarp_lmax=None if config.get("sarp_L") is None else float(config["sarp_L"]),
        workers=int(config.get("workers", 1)),
    )
    return spec, str(config.get("out", out_default))


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--runs", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--budget", type=int, default=None)
    parser.add_argument("--target", type=float, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", default=None)
    parser.add_argument("--ls", choices=("exact", "adaptive"), default=None)
    parser.add_argument("--drift-mode", choices=("verbatim", "taken-step"), default=None)
    parser.add_argument("--sarp-mu", type=float, default=None)
    parser.add_argument("--sarp-L", type=float, default=None)
    parser.add_argument("--sigma0", type=float, default=None)
    parser.add_argument("--p", type=float, default=None)
    parser.add_argument("--x0", type=float, default=None)


def _flag_overrides(args: argparse.Namespace) -> dict:
    mapping = {"runs": "runs", "seed": "seed", "budget": "budget",
               "target": "target", "workers": "workers", "out": "out",
               "ls": "ls", "drift_mode": "drift_mode", "sarp_mu": "sarp_mu",
               "sarp_L": "sarp_L", "sigma0": "sigma0", "p": "p", "x0": "x0"}
    out = {}
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            out[key] = value
    return out


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    config.update(_flag_overrides(args))
    if args.algos is not None:
        config["algos"] = args.algos
    spec, out_dir = _build_spec(config)
    stats, paths = run_experiment(spec, out_dir)
    print(f"wrote {len(paths)} files to {out_dir}")
    for s in stats:
        med = "na" if s.its_median is None else s.its_median
        print(f"  {s.algorithm}: {s.success_count}/{s.runs} runs reached target, "
              f"median its {med}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    overrides = _flag_overrides(args)
    out_dir = overrides.pop("out", "results")
    ls = overrides.pop("ls", None)
    algos = _apply_ls_mode(_parse_algos(args.algos) if args.algos is not None
                           else SWEEP_ALGORITHMS, ls)
    kwargs = {}
    for key, field in (("target", "target"), ("budget", "budget"),
                       ("sigma0", "sigma0"), ("p", "p"), ("x0", "x0_value"),
                       ("drift_mode", "drift_mode"), ("sarp_mu", "sarp_mu"),
                       ("sarp_L", "sarp_lmax"), ("workers", "workers")):
        if key in overrides:
            kwargs[field] = overrides[key]
    cells = sweep_cells(
        funcs=tuple(args.funcs) if args.funcs else KINDS,
        l_values=tuple(args.L) if args.L else (1e4, 1e6),
        dims=tuple(args.dims) if args.dims else (20, 40, 60, 80, 100),
        algorithms=algos,
        runs=overrides.get("runs"),
        base_seed=overrides.get("seed", 1000),
        **kwargs)
    total = 0
    for spec in cells:
        _, paths = run_experiment(spec, out_dir)
        total += len(paths)
        obj = spec.objective
        print(f"cell {obj.kind} n={obj.n} L={obj.L}: {len(paths)} files")
    print(f"wrote {total} files to {out_dir}")
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    if args.func not in KINDS:
        raise ValueError(f"unknown objective kind {args.func!r}")
    if args.func == "frosen":
        L = None
    elif args.L is None:
        raise ValueError(f"objective {args.func!r} requires L")
    else:
        L = float(args.L)
    obj = Objective(args.func, args.n, L)
    b = spectral_bounds(obj)
    trace = "na" if b.trace is None else repr(b.trace)
    print(f"mu={b.mu!r} lmax={b.lmax!r} trace={trace} kappa={b.kappa!r}")
    if obj.is_quadratic:
        print(f"one_step_rate_bound={rp_exact_rate_bound(b)!r}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    from .selfcheck import run_all
    failures = run_all(verbose=True)
    if failures:
        print(f"{failures} check(s) failed", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randpursuit",
        description="Derivative-free randomized optimization benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one experiment from a config file")
    p_run.add_argument("config", help="flat JSON or TOML experiment description")
    p_run.add_argument("--algos", nargs="+", default=None)
    _add_common_flags(p_run)
    p_run.set_defaults(handler=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the builtin benchmark grid")
    p_sweep.add_argument("--funcs", nargs="+", choices=KINDS, default=None)
    p_sweep.add_argument("--L", nargs="+", type=float, default=None)
    p_sweep.add_argument("--dims", nargs="+", type=int, default=None)
    p_sweep.add_argument("--algos", nargs="+", default=None)
    _add_common_flags(p_sweep)
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_bounds = sub.add_parser("bounds", help="print spectral bounds of an objective")
    p_bounds.add_argument("func")
    p_bounds.add_argument("n", type=int)
    p_bounds.add_argument("L", nargs="?", default=None)
    p_bounds.set_defaults(handler=_cmd_bounds)

    p_verify = sub.add_parser("verify", help="run the fast property suites")
    p_verify.set_defaults(handler=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
