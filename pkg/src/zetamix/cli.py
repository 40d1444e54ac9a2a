"""Command-line interface: density evaluation, identity verification,
tabulation, and sampling with machine-readable output.

Exit codes: 0 success (verify: all identities pass), 1 identity failure,
2 usage or parameter error, 3 numerical non-convergence. stdout carries data,
stderr carries diagnostics; --output mirrors the stdout bytes to a file.
All numbers are written with 17 significant digits and a '.' decimal point.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from .distributions import (
    GammaParams,
    NbParams,
    YuleParams,
    ZetaParams,
    beta_pdf,
    gamma_pdf,
    nb_pmf,
    poisson_pmf,
    yule_pmf,
    zeta_pmf,
)
from .mixing import (
    gamma_transform_pdf,
    lambda_mixing_pdf,
    mixing_pdf_r1,
    mixing_pdf_r2_closed,
    mixing_pdf_r_gt1,
    mixing_quasi_pdf_r_lt1,
)
from .mixtures import (
    GridConfig,
    report_to_csv_rows,
    report_to_json_dict,
    run_verification_grid,
)
from .quadrature import QuadratureConvergenceError, QuadratureSpec
from .samplers import (
    SeededStream,
    fit_against_zeta,
    sample_zeta_direct,
    sample_zeta_via_geometric_chain,
    sample_zeta_via_poisson_chain,
)

__all__ = ["main", "console_main"]

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _require(args: argparse.Namespace, names: list[str], kind: str) -> dict:
    got = {}
    for name in names:
        value = getattr(args, name.replace("-", "_"), None)
        if value is None:
            raise ValueError(f"kind '{kind}' requires --{name}")
        got[name] = value
    return got


def _single(values, flag: str) -> float:
    if isinstance(values, (list, tuple)):
        if len(values) != 1:
            raise ValueError(f"--{flag} must be a single value here, got {len(values)}")
        return float(values[0])
    return float(values)


def _as_int(value: float, flag: str) -> int:
    if value != int(value):
        raise ValueError(f"--{flag} values must be integers, got {value}")
    return int(value)


def _eval_kind(kind: str, points: list[float], args: argparse.Namespace, spec: QuadratureSpec) -> list[float]:
    if kind == "zeta-pmf":
        params = ZetaParams(_single(args.s, "s"))
        return [zeta_pmf(_as_int(x, "x"), params) for x in points]
    if kind == "nb-pmf":
        _require(args, ["r", "p"], kind)
        params = NbParams(_single(args.r, "r"), _single(args.p, "p"))
        return [nb_pmf(_as_int(x, "x"), params) for x in points]
    if kind == "poisson-pmf":
        lam = _single(args.lam, "lambda")
        return [poisson_pmf(_as_int(x, "x"), lam) for x in points]
    if kind == "gamma-pdf":
        _require(args, ["r", "rate"], kind)
        params = GammaParams(_single(args.r, "r"), float(args.rate))
        return [gamma_pdf(lam, params) for lam in points]
    if kind == "beta-pdf":
        _require(args, ["a", "b"], kind)
        return [beta_pdf(p, float(args.a), float(args.b)) for p in points]
    if kind == "yule-pmf":
        _require(args, ["b"], kind)
        params = YuleParams(float(args.b))
        return [yule_pmf(_as_int(x, "x"), params) for x in points]
    if kind == "mixing-r1":
        s = _single(args.s, "s")
        return [mixing_pdf_r1(p, s) for p in points]
    if kind == "mixing-r2":
        s = _single(args.s, "s")
        return [mixing_pdf_r2_closed(p, s) for p in points]
    if kind == "mixing-r-gt1":
        _require(args, ["r"], kind)
        s = _single(args.s, "s")
        return [mixing_pdf_r_gt1(p, _single(args.r, "r"), s, spec) for p in points]
    if kind == "mixing-quasi":
        _require(args, ["r"], kind)
        s = _single(args.s, "s")
        return [mixing_quasi_pdf_r_lt1(p, _single(args.r, "r"), s, spec) for p in points]
    if kind == "gamma-transform":
        s = _single(args.s, "s")
        return [gamma_transform_pdf(g, s) for g in points]
    if kind == "lambda-mixing":
        s = _single(args.s, "s")
        return [lambda_mixing_pdf(lam, s, spec) for lam in points]
    raise ValueError(f"unknown kind '{kind}'")


_POINT_FLAG = {
    "zeta-pmf": "x",
    "nb-pmf": "x",
    "poisson-pmf": "x",
    "yule-pmf": "x",
    "gamma-pdf": "lam",
    "lambda-mixing": "lam",
    "beta-pdf": "p",
    "mixing-r1": "p",
    "mixing-r2": "p",
    "mixing-r-gt1": "p",
    "mixing-quasi": "p",
    "gamma-transform": "gamma",
}

_KINDS = tuple(sorted(_POINT_FLAG))


def _collect_points(args: argparse.Namespace) -> list[float]:
    flag = _POINT_FLAG[args.kind]
    values = getattr(args, flag)
    if values is None:
        pretty = "lambda" if flag == "lam" else flag
        raise ValueError(f"kind '{args.kind}' needs evaluation points via --{pretty}")
    return [float(v) for v in values]


def _emit(text: str, output: str | None) -> None:
    sys.stdout.write(text)
    if output:
        with open(output, "w") as fh:
            fh.write(text)


def _rows_text(points: list[float], values: list[float], fmt: str) -> str:
    if fmt == "json":
        payload = [{"point": p, "value": v} for p, v in zip(points, values)]
        return json.dumps(payload, indent=2) + "\n"
    lines = ["point,value"]
    lines += [f"{_fmt(p)},{_fmt(v)}" for p, v in zip(points, values)]
    return "\n".join(lines) + "\n"


def _cmd_eval(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    points = _collect_points(args)
    if not points:
        raise ValueError("no evaluation points given")
    values = _eval_kind(args.kind, points, args, spec)
    _emit(_rows_text(points, values, args.format), args.output)
    return EXIT_OK


def _cmd_tabulate(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    lo, hi, count = _parse_grid(args.grid)
    if count < 1:
        raise ValueError(f"zero-point grid: {args.grid}")
    if args.log:
        if lo <= 0:
            raise ValueError("log-spaced grids need lo > 0")
        points = list(np.logspace(math.log10(lo), math.log10(hi), count))
    else:
        points = list(np.linspace(lo, hi, count))
    values = _eval_kind(args.kind, [float(p) for p in points], args, spec)
    _emit(_rows_text([float(p) for p in points], values, args.format), args.output)
    return EXIT_OK


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be lo:hi:count, got '{text}'")
    lo, hi = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if not (lo < hi) and count > 1:
        raise ValueError(f"grid needs lo < hi, got '{text}'")
    return lo, hi, count


_CONFIG_GRID_KEYS = {"grid.r": "r_values", "grid.s": "s_values", "grid.b": "b_values", "grid.p": "kernel_p_values"}
_CONFIG_QUAD_KEYS = {"quad.abs_tol": "abs_tol", "quad.rel_tol": "rel_tol", "quad.max_subdivisions": "max_subdivisions"}


def _parse_config(path: str) -> tuple[GridConfig, QuadratureSpec]:
    """Flat key-value config: one `key = value` per line, '#' comments,
    repeated grid.* keys accumulate into lists."""
    grid_lists: dict[str, list[float]] = {}
    scalars: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got '{line}'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in _CONFIG_GRID_KEYS:
                grid_lists.setdefault(_CONFIG_GRID_KEYS[key], []).append(float(value))
            elif key in _CONFIG_QUAD_KEYS or key in ("x_max", "identities"):
                scalars[key] = value
            else:
                raise ValueError(f"{path}:{lineno}: unknown config key '{key}'")

    grid_kwargs: dict = {k: tuple(v) for k, v in grid_lists.items()}
    if "x_max" in scalars:
        grid_kwargs["x_max"] = int(scalars["x_max"])
    if "identities" in scalars:
        idents = tuple(i.strip() for i in scalars["identities"].split(",") if i.strip())
        grid_kwargs["identities"] = idents
    grid = GridConfig(**grid_kwargs)

    spec = QuadratureSpec()
    if "quad.abs_tol" in scalars:
        spec = replace(spec, abs_tol=float(scalars["quad.abs_tol"]))
    if "quad.rel_tol" in scalars:
        spec = replace(spec, rel_tol=float(scalars["quad.rel_tol"]))
    if "quad.max_subdivisions" in scalars:
        spec = replace(spec, max_subdivisions=int(scalars["quad.max_subdivisions"]))
    return grid, spec


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.config:
        try:
            grid, spec = _parse_config(args.config)
        except OSError as exc:
            raise ValueError(f"cannot read config: {exc}") from exc
    else:
        grid, spec = GridConfig(), QuadratureSpec()
    report = run_verification_grid(grid, spec)
    if args.format == "json":
        text = json.dumps(report_to_json_dict(report), indent=2) + "\n"
    else:
        text = "\n".join(",".join(row) for row in report_to_csv_rows(report)) + "\n"
    _emit(text, args.output)
    n_failed = sum(1 for c in report.checks if not c.passed)
    if n_failed:
        print(f"{n_failed} of {len(report.checks)} checks failed", file=sys.stderr)
        return EXIT_FAILED_CHECKS
    return EXIT_OK


_CHAINS = {
    "direct": sample_zeta_direct,
    "geometric": sample_zeta_via_geometric_chain,
    "poisson": sample_zeta_via_poisson_chain,
}


def _fit_summary_json(summary) -> str:
    return (
        json.dumps(
            {
                "n": summary.n,
                "tv_distance": summary.tv_distance,
                "chi_square": summary.chi_square,
                "dof": summary.dof,
                "truncation_point": summary.truncation_point,
            },
            indent=2,
        )
        + "\n"
    )


def _fit_table_csv(samples: np.ndarray, s: float, trunc: int) -> str:
    values, counts = np.unique(samples, return_counts=True)
    params = ZetaParams(s)
    n = samples.size
    lines = ["x,count,expected,abs_err"]
    for v, c in zip(values, counts):
        if v > trunc:
            break
        expected = n * zeta_pmf(int(v), params)
        lines.append(f"{int(v)},{int(c)},{_fmt(expected)},{_fmt(abs(c - expected))}")
    return "\n".join(lines) + "\n"


def _cmd_sample(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise ValueError(f"--n must be >= 1, got {args.n}")
    stream = SeededStream(args.seed, args.stream_id)
    sampler = _CHAINS[args.chain]
    samples = sampler(args.s, args.n, stream)
    summary = fit_against_zeta(samples, args.s, args.fit_eps)

    counts_text = "\n".join(str(int(v)) for v in samples) + "\n"
    _emit(counts_text, args.output)

    footer = _fit_summary_json(summary)
    if args.format == "csv":
        footer = _fit_table_csv(samples, args.s, summary.truncation_point)
    if args.output:
        ext = "fit.csv" if args.format == "csv" else "fit.json"
        with open(f"{args.output}.{ext}", "w") as fh:
            fh.write(footer)
    else:
        sys.stderr.write(footer)
    return EXIT_OK


def _spec_from_args(args: argparse.Namespace) -> QuadratureSpec:
    spec = QuadratureSpec()
    if getattr(args, "abs_tol", None) is not None:
        spec = replace(spec, abs_tol=args.abs_tol)
    if getattr(args, "rel_tol", None) is not None:
        spec = replace(spec, rel_tol=args.rel_tol)
    return spec


def _add_common_eval_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kind", required=True, choices=_KINDS)
    sub.add_argument("--s", type=float, nargs="+", help="Zeta shape parameter(s)")
    sub.add_argument("--r", type=float, nargs="+", help="Negative Binomial / Gamma shape")
    sub.add_argument("--p", type=float, nargs="+", help="success probability point(s) or parameter")
    sub.add_argument("--x", type=float, nargs="+", help="count point(s)")
    sub.add_argument("--lambda", dest="lam", type=float, nargs="+", help="rate point(s) or parameter")
    sub.add_argument("--gamma", type=float, nargs="+", help="gamma-transform point(s), > 1")
    sub.add_argument("--b", type=float, help="Yule / Beta shape b")
    sub.add_argument("--a", type=float, help="Beta shape a")
    sub.add_argument("--rate", type=float, help="Gamma rate")
    sub.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    sub.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", help="also write stdout bytes to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetamix",
        description="Zeta distribution via continuous Negative Binomial and Poisson mixtures",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="evaluate a density or PMF at given points")
    _add_common_eval_flags(p_eval)

    p_tab = subs.add_parser("tabulate", help="tabulate a density over a grid")
    _add_common_eval_flags(p_tab)
    p_tab.add_argument("--grid", required=True, help="lo:hi:count")
    p_tab.add_argument("--log", action="store_true", help="log-spaced grid")

    p_ver = subs.add_parser("verify", help="run the mixture-identity verification grid")
    p_ver.add_argument("--config", help="flat key-value grid config file")
    p_ver.add_argument("--format", choices=("csv", "json"), default="json")
    p_ver.add_argument("--output", help="also write stdout bytes to this file")

    p_sam = subs.add_parser("sample", help="draw Zeta samples through a mixture chain")
    p_sam.add_argument("--chain", required=True, choices=sorted(_CHAINS))
    p_sam.add_argument("--s", type=float, required=True)
    p_sam.add_argument("--n", type=int, required=True)
    p_sam.add_argument("--seed", type=int, required=True,
                       help="required: all randomness flows from the seed")
    p_sam.add_argument("--stream-id", type=int, default=0)
    p_sam.add_argument("--fit-eps", type=float, default=1e-6,
                       help="tail mass at which the fit summary truncates")
    p_sam.add_argument("--format", choices=("csv", "json"), default="json",
                       help="fit footer format (csv: per-count fit table)")
    p_sam.add_argument("--output", help="write counts here and the fit footer beside it")
    return parser


_DISPATCH = {
    "eval": _cmd_eval,
    "tabulate": _cmd_tabulate,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except QuadratureConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
