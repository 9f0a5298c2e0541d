"""Command-line interface.

Subcommands: ``simulate`` (seeded ensembles), ``cov`` (closed form next to the
oracle and Monte Carlo columns), ``spectra`` (density matrices by several
methods), ``embed`` (embedding covariance matrices), ``verify`` (invariant
suites).  Options come from flags, or a JSON config file via ``--config``;
flags win over the file.  Exit codes: 0 success, 1 verification failure,
2 configuration error, 3 I/O error, 4 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from .core import CovarianceSeed, make_chain, make_params
from .covariance import dtsim_cov, simple_bm_cov, simple_bm_seed
from .errors import ConvergenceError, DomainError, GridError, PoleError
from .multidim import q_cov
from .simulate import empirical_cov, simulate_brownian, simulate_simple_bm
from .spectral import (
    FrequencyGrid,
    simple_bm_spectral,
    spectral_closed_grid,
    spectral_diag,
    spectral_sum_grid,
)
from .verify import perturb_seed, run_checks

_METHODS = ("closed", "sum", "example", "diag")


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit(rows: list[dict], columns: list[str], fmt: str, out: str | None) -> None:
    if fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(row[c]) for c in columns) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(rows, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise DomainError("config file must contain a JSON object")
    return cfg


def _opt(flag: Any, cfg: dict, path: tuple[str, ...], default: Any) -> Any:
    if flag is not None:
        return flag
    node: Any = cfg
    for key in path:
        if not isinstance(node, dict) or key not in node:
            return default
        node = node[key]
    return default if node is None else node


def _resolve_params(args, cfg: dict):
    H = _opt(args.H, cfg, ("H",), 0.75)
    alpha = _opt(args.alpha, cfg, ("alpha",), 2.0)
    T = _opt(args.T, cfg, ("T",), 2)
    return make_params(float(H), float(alpha), int(T))


def _resolve_seed(args, cfg: dict, params):
    seed_file = _opt(getattr(args, "seed_file", None), cfg, ("seed_file",), None)
    builtin = bool(getattr(args, "builtin", False)) or bool(cfg.get("builtin", False))
    if seed_file and builtin:
        raise DomainError("choose exactly one of --builtin and --seed-file")
    if seed_file:
        seed = CovarianceSeed.from_csv(seed_file)
        return seed, False
    return simple_bm_seed(params), True


def _out_and_format(args, cfg: dict) -> tuple[str | None, str]:
    out = _opt(args.out, cfg, ("output", "path"), None)
    fmt = _opt(args.format, cfg, ("output", "format"), "csv")
    if fmt not in ("csv", "json"):
        raise DomainError(f"output format must be csv or json, got {fmt!r}")
    return out, fmt


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    params = _resolve_params(args, cfg)
    n_paths = int(_opt(args.paths, cfg, ("mc", "n_paths"), 1000))
    k_max = int(_opt(args.kmax, cfg, ("mc", "k_max"), 8))
    rng_seed = int(_opt(args.seed, cfg, ("mc", "rng_seed"), 0))
    out, fmt = _out_and_format(args, cfg)
    sim = simulate_brownian if args.process == "brownian" else simulate_simple_bm
    ens = sim(params, n_paths, k_max, rng_seed)
    times = ens.times
    rows = [
        {"path": p, "k": k, "t": float(times[k]), "value": float(ens.paths[p, k])}
        for p in range(n_paths)
        for k in range(k_max + 1)
    ]
    _emit(rows, ["path", "k", "t", "value"], fmt, out)
    return 0


def cmd_cov(args) -> int:
    cfg = _load_config(args.config)
    params = _resolve_params(args, cfg)
    seed, is_builtin = _resolve_seed(args, cfg, params)
    chain = make_chain(params, seed)
    out, fmt = _out_and_format(args, cfg)
    n_min, n_max = args.n_min, args.n_max if args.n_max is not None else 2 * params.T - 1
    tau_min = args.tau_min if args.tau_min is not None else -params.T
    tau_max = args.tau_max if args.tau_max is not None else 2 * params.T
    if n_min < 0 or n_max < n_min or tau_max < tau_min:
        raise DomainError(
            f"bad ranges: n in [{n_min}, {n_max}], tau in [{tau_min}, {tau_max}]"
        )
    mc_paths = int(_opt(args.mc_paths, cfg, ("mc", "n_paths"), 0))
    ens = None
    if mc_paths > 0:
        k_need = max(n_max, n_max + tau_max)
        rng_seed = int(_opt(args.mc_seed, cfg, ("mc", "rng_seed"), 0))
        ens = simulate_simple_bm(params, mc_paths, k_need, rng_seed)
    rows = []
    for n in range(n_min, n_max + 1):
        for tau in range(tau_min, tau_max + 1):
            if n + tau < 0:
                continue
            oracle = (
                simple_bm_cov(params.alpha ** (n + tau), params.alpha ** n, params.H, params.l)
                if is_builtin
                else None
            )
            mc_est = mc_se = None
            if ens is not None:
                est = empirical_cov(ens, n, tau)
                mc_est, mc_se = est.value, est.std_error
            rows.append(
                {
                    "n": n,
                    "tau": tau,
                    "closed_form": dtsim_cov(chain, n, tau),
                    "oracle": oracle,
                    "mc_estimate": mc_est,
                    "mc_stderr": mc_se,
                }
            )
    _emit(rows, ["n", "tau", "closed_form", "oracle", "mc_estimate", "mc_stderr"], fmt, out)
    return 0


def cmd_spectra(args) -> int:
    cfg = _load_config(args.config)
    params = _resolve_params(args, cfg)
    seed, is_builtin = _resolve_seed(args, cfg, params)
    chain = make_chain(params, seed)
    out, fmt = _out_and_format(args, cfg)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in _METHODS:
            raise DomainError(f"unknown method {m!r}; choose from {', '.join(_METHODS)}")
    if "example" in methods and not is_builtin:
        raise DomainError("method 'example' is the builtin-seed closed form; "
                          "it cannot be used with --seed-file")
    n_omega = int(_opt(args.n_omega, cfg, ("spectra", "n_omega"), 256))
    trunc = _opt(args.truncation, cfg, ("spectra", "truncation"), None)
    grid = FrequencyGrid(n_omega)
    omegas = grid.omegas
    T = params.T
    rows = []
    for method in methods:
        if method == "closed":
            vals = spectral_closed_grid(chain, omegas)
        elif method == "sum":
            vals = spectral_sum_grid(chain, omegas, None if trunc is None else int(trunc))
        elif method == "example":
            vals = np.stack(
                [
                    np.array(
                        [[simple_bm_spectral(params, j, r, w) for r in range(T)] for j in range(T)]
                    )
                    for w in omegas
                ]
            )
        else:  # diag
            for i, w in enumerate(omegas):
                for k in range(T):
                    rows.append(
                        {
                            "omega": float(w),
                            "j": k,
                            "r": k,
                            "re": spectral_diag(chain, k, float(w)),
                            "im": 0.0,
                            "method": "diag",
                        }
                    )
            continue
        for i, w in enumerate(omegas):
            for j in range(T):
                for r in range(T):
                    rows.append(
                        {
                            "omega": float(w),
                            "j": j,
                            "r": r,
                            "re": float(vals[i, j, r].real),
                            "im": float(vals[i, j, r].imag),
                            "method": method,
                        }
                    )
    _emit(rows, ["omega", "j", "r", "re", "im", "method"], fmt, out)
    return 0


def cmd_embed(args) -> int:
    cfg = _load_config(args.config)
    params = _resolve_params(args, cfg)
    seed, _ = _resolve_seed(args, cfg, params)
    chain = make_chain(params, seed)
    out, fmt = _out_and_format(args, cfg)
    n_max = args.n_max if args.n_max is not None else 2
    tau_max = args.tau_max if args.tau_max is not None else 3
    tau_min = args.tau_min if args.tau_min is not None else 0
    rows = []
    for n in range(args.n_min, n_max + 1):
        for tau in range(tau_min, tau_max + 1):
            mat = q_cov(chain, n, tau)
            for j in range(params.T):
                for k in range(params.T):
                    rows.append(
                        {"n": n, "tau": tau, "j": j, "k": k, "value": float(mat[j, k])}
                    )
    _emit(rows, ["n", "tau", "j", "k", "value"], fmt, out)
    return 0


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    params = _resolve_params(args, cfg)
    seed, _ = _resolve_seed(args, cfg, params)
    if args.perturb:
        seed = perturb_seed(seed, args.perturb, int(args.seed or 0))
    results = run_checks(params, seed)
    ok = all(r.passed for r in results)
    if args.json:
        payload = {
            "checks": [
                {
                    "name": r.name,
                    "observed": float(r.observed),
                    "tolerance": float(r.tolerance),
                    "passed": bool(r.passed),
                }
                for r in results
            ],
            "passed": bool(ok),
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        width = max(len(r.name) for r in results)
        lines = [f"{'check':<{width}}  {'observed':>12}  {'tolerance':>10}  status"]
        for r in results:
            status = "pass" if r.passed else "FAIL"
            lines.append(
                f"{r.name:<{width}}  {r.observed:>12.3e}  {r.tolerance:>10.1e}  {status}"
            )
        lines.append(f"overall: {'pass' if ok else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def _add_common(p: argparse.ArgumentParser, seeded: bool) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--alpha", type=float, help="grid ratio alpha > 1 (default 2.0)")
    p.add_argument("--T", type=int, help="scale-invariance period (default 2)")
    p.add_argument("--H", type=float, help="scale exponent H > 0 (default 0.75)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    if seeded:
        p.add_argument("--builtin", action="store_true",
                       help="use the simple-BM seed (default when --seed-file absent)")
        p.add_argument("--seed-file", help="CSV file with header j,r0,r1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtsim",
        description="Scale-invariant Markov processes on geometric grids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a seeded Monte Carlo ensemble")
    _add_common(p, seeded=False)
    p.add_argument("--paths", type=int, help="number of paths (default 1000)")
    p.add_argument("--kmax", type=int, help="largest grid index (default 8)")
    p.add_argument("--seed", type=int, help="master RNG seed (default 0)")
    p.add_argument("--process", choices=("simple-bm", "brownian"), default="simple-bm")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cov", help="closed-form covariance table with oracle and MC columns")
    _add_common(p, seeded=True)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int)
    p.add_argument("--tau-min", type=int)
    p.add_argument("--tau-max", type=int)
    p.add_argument("--mc-paths", type=int, help="Monte Carlo paths (0 disables; default 0)")
    p.add_argument("--mc-seed", type=int, help="Monte Carlo RNG seed (default 0)")
    p.set_defaults(func=cmd_cov)

    p = sub.add_parser("spectra", help="density matrix entries over a frequency grid")
    _add_common(p, seeded=True)
    p.add_argument("--methods", default="closed,sum",
                   help="comma list from closed,sum,example,diag (default closed,sum)")
    p.add_argument("--n-omega", type=int, help="frequency count on [0, 2pi) (default 256)")
    p.add_argument("--truncation", type=int, help="series truncation override for method=sum")
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("embed", help="embedding covariance matrices")
    _add_common(p, seeded=True)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int)
    p.add_argument("--tau-min", type=int)
    p.add_argument("--tau-max", type=int)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="run the invariant suites")
    _add_common(p, seeded=True)
    p.add_argument("--perturb", type=float, default=0.0,
                   help="relative fault injected into the seed's r1 (seeded)")
    p.add_argument("--seed", type=int, help="RNG seed for fault injection (default 0)")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ConvergenceError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (DomainError, GridError, IndexError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
