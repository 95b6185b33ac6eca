"""Command-line front end: norm scans, asymptotic fits, operator defects and self-checks.

Every command writes a table (CSV or JSON) and a JSON manifest.  With
``--out path`` the table goes to ``path`` and the manifest to
``path.manifest.json``; otherwise the table goes to stdout and the manifest
to stderr.

Exit codes: 0 ok, 2 configuration error, 3 numeric failure, 4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from kshcst import __version__
from kshcst import complexifier as cx
from kshcst import core, opsim, validation
from kshcst import rootsys as rs
from kshcst.errors import ConvexityError, FitError, NumericRangeError, QuadratureError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VALIDATION = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    group: str = "s1"
    h: str = "quadratic"
    tau1: tuple = (0.0,)
    tau2: tuple = (1.0,)
    hbar: tuple = (1.0,)
    lambda_max: int = 0
    tol: float = core.TRUNCATION_TOL
    format: str = "csv"
    out: Optional[str] = None
    N: int = 16
    m: tuple = (1, 2)
    samples: int = 20
    seed: int = 0

    def validate(self):
        for name in ("tau1", "tau2", "hbar"):
            if not getattr(self, name):
                raise ConfigError(f"--{name} grid is empty")
        if any(t <= 0 for t in self.tau2):
            raise ConfigError("--tau2 values must be positive")
        if any(h <= 0 for h in self.hbar):
            raise ConfigError("--hbar values must be positive")
        if self.lambda_max < 0:
            raise ConfigError("--lambda-max must be >= 0")
        if not 0 < self.tol < 1:
            raise ConfigError("--tol must lie in (0, 1)")
        if self.format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.N < 2:
            raise ConfigError("-N must be >= 2")
        if not self.m:
            raise ConfigError("--m list is empty")
        if self.samples < 1:
            raise ConfigError("--samples must be >= 1")

    def manifest_echo(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def _grid(kind):
    def parse(text):
        try:
            return tuple(kind(t) for t in text.split(",") if t.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad comma list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kshcst", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"kshcst {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--group", default="s1", help="s1 | su2 | a:<r> | torus:<r>")
    shared.add_argument("--h", default="quadratic", help="quadratic | quartic:<eps> | radial:<c1,c2,...>")
    shared.add_argument("--tau1", type=_grid(float), default=(0.0,), help="comma list")
    shared.add_argument("--tau2", type=_grid(float), default=None, help="comma list")
    shared.add_argument("--hbar", type=_grid(float), default=(1.0,), help="comma list")
    shared.add_argument("--lambda-max", type=int, default=0, dest="lambda_max")
    shared.add_argument("--tol", type=float, default=core.TRUNCATION_TOL,
                        help="Gaussian tail mass left outside the quadrature box")
    shared.add_argument("--format", choices=("csv", "json"), default="csv")
    shared.add_argument("--out", default=None, help="output path (default: stdout)")
    shared.add_argument("-N", type=int, default=16, help="mode cutoff for operator commands")
    shared.add_argument("--m", type=_grid(int), default=(1, 2), help="character modes, comma list")
    shared.add_argument("--samples", type=int, default=20)
    shared.add_argument("--seed", type=int, default=0)
    for name, text in [("norms", "shifted norms a^2 exp(-2 tau2 h/hbar) over a weight box"),
                       ("b1-fit", "fit of the 1/tau2 coefficient of the norm defect"),
                       ("semiclassical", "shifted norms along a decreasing hbar grid"),
                       ("stardefect", "*-representation defect on the truncated circle model"),
                       ("covariance", "covariance defect for random translations"),
                       ("validate", "structural self-checks")]:
        sub.add_parser(name, parents=[shared], help=text)
    return ap


def config_from_args(args) -> RunConfig:
    tau2 = args.tau2
    if tau2 is None:
        tau2 = core.DEFAULT_TAU2_GRID if args.command == "b1-fit" else (1.0,)
    return RunConfig(args.command, args.group, args.h, tuple(args.tau1), tuple(tau2),
                     tuple(args.hbar), args.lambda_max, args.tol, args.format, args.out,
                     args.N, tuple(args.m), args.samples, args.seed)


# ---------------------------------------------------------------- commands


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    quad_errs: list = field(default_factory=list)
    failed: bool = False


def _require_circle(sys_, cmd):
    if not (sys_.is_torus and sys_.rank == 1):
        raise ConfigError(f"{cmd} is only available for the circle group (s1 or torus:1)")


def cmd_norms(cfg: RunConfig, sys_, c) -> Table:
    t = Table(["group", "h_family", "h_params", "hbar", "tau1", "tau2", "lambda", "h_lambda",
               "log_a2_shifted", "defect", "quad_err"])
    params = ",".join(f"{v:g}" for v in c.params)
    for lam in rs.enumerate_dominant(sys_, cfg.lambda_max):
        for tau2 in cfg.tau2:
            for hbar in cfg.hbar:
                # tau1 enters only as a phase, so one evaluation serves every tau1
                res = _norm(sys_, c, lam, core.QuantParams(0.0, tau2, hbar), cfg.tol)
                for tau1 in cfg.tau1:
                    t.rows.append([cfg.group, c.family, params, hbar, tau1, tau2, str(lam),
                                   res.h_lambda, res.log_a2_shifted, res.defect, res.quad_err])
                    t.quad_errs.append(res.quad_err)
    return t


def _norm(sys_, c, lam, p, tol):
    try:
        return core.a_lambda(sys_, c, lam, p, tol=tol)
    except QuadratureError as exc:
        raise QuadratureError(f"lambda={lam}: {exc}", exc.node) from exc
    except NumericRangeError as exc:
        raise NumericRangeError(f"lambda={lam}: {exc}") from exc


def cmd_b1fit(cfg: RunConfig, sys_, c) -> Table:
    circle = sys_.is_torus and sys_.rank == 1
    t = Table(["lambda", "hbar", "b1_fit", "b1_closed", "rel_gap", "residual",
               "b1_laplace", "laplace_gap"])
    for lam in rs.enumerate_dominant(sys_, cfg.lambda_max):
        for hbar in cfg.hbar:
            fit = core.fit_b1(sys_, c, lam, hbar, cfg.tau2)
            closed = laplace = gap = lgap = None
            if circle:
                closed = core.b1_circle_closed(c, lam, hbar, sys_)
                laplace = core.b1_circle_laplace(c, lam, hbar, sys_)
                gap = _rel_gap(fit.b1_estimate, closed)
                lgap = _rel_gap(fit.b1_estimate, laplace)
            t.rows.append([str(lam), hbar, fit.b1_estimate, closed, gap, fit.residual,
                           laplace, lgap])
    return t


def _rel_gap(x, ref):
    if ref == 0:
        return abs(x)
    return abs(x - ref) / abs(ref)


def cmd_semiclassical(cfg: RunConfig, sys_, c) -> Table:
    t = Table(["lambda", "tau2", "hbar", "ratio", "abs_ratio_minus_1"])
    for lam in rs.enumerate_dominant(sys_, cfg.lambda_max):
        for tau2 in cfg.tau2:
            ratios = core.semiclassical_scan(sys_, c, lam, tau2, cfg.hbar)
            for hbar, ratio in zip(cfg.hbar, ratios):
                t.rows.append([str(lam), tau2, hbar, ratio, abs(ratio - 1.0)])
    return t


def cmd_stardefect(cfg: RunConfig, sys_, c) -> Table:
    _require_circle(sys_, "stardefect")
    space = opsim.TruncatedHilbert(cfg.N)
    if any(abs(m) > cfg.N // 2 for m in cfg.m):
        raise ConfigError(f"|m| must be <= N/2 = {cfg.N // 2}")
    t = Table(["N", "m", "tau2", "hbar", "star_defect", "const_defect", "growth_defect"])
    mask = space.interior
    for tau2 in cfg.tau2:
        for hbar in cfg.hbar:
            coeffs = opsim.ksh_coefficients(space, sys_, c, core.QuantParams(0.0, tau2, hbar))
            inner = coeffs[mask]
            const = float(np.abs(inner - coeffs[space.N]).max())
            growth = float(np.abs(inner - 1.0).max())
            for m in cfg.m:
                t.rows.append([cfg.N, m, tau2, hbar, opsim.star_defect(space, m, coeffs),
                               const, growth])
    return t


def cmd_covariance(cfg: RunConfig, sys_, c) -> Table:
    _require_circle(sys_, "covariance")
    space = opsim.TruncatedHilbert(cfg.N)
    rng = np.random.default_rng(cfg.seed)
    t = Table(["tau2", "hbar", "theta1", "theta2", "m", "covariance_defect"])
    for tau2 in cfg.tau2:
        for hbar in cfg.hbar:
            coeffs = opsim.ksh_coefficients(space, sys_, c, core.QuantParams(0.0, tau2, hbar))
            for _ in range(cfg.samples):
                th1, th2 = rng.uniform(0.0, 1.0, size=2)
                m = int(rng.integers(-(cfg.N // 2), cfg.N // 2 + 1))
                t.rows.append([tau2, hbar, th1, th2, m,
                               opsim.covariance_defect(space, th1, th2, m, coeffs)])
    return t


def cmd_validate(cfg: RunConfig, sys_, c) -> Table:
    t = Table(["suite", "value", "tolerance", "passed"])
    checks = validation.run_all(sys_, c, seed=cfg.seed)
    for chk in checks:
        t.rows.append([chk.suite, chk.value, chk.tolerance, chk.passed])
    t.failed = not all(chk.passed for chk in checks)
    return t


COMMANDS = {
    "norms": cmd_norms,
    "b1-fit": cmd_b1fit,
    "semiclassical": cmd_semiclassical,
    "stardefect": cmd_stardefect,
    "covariance": cmd_covariance,
    "validate": cmd_validate,
}


# ---------------------------------------------------------------- output


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        rows = [{k: (float(v) if isinstance(v, np.floating) else v)
                 for k, v in zip(table.columns, row)} for row in table.rows]
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _manifest(cfg, started, table):
    errs = [e for e in table.quad_errs if e is not None and math.isfinite(e)]
    return {
        "config": cfg.manifest_echo(),
        "version": __version__,
        "started_at": started,
        "rows_written": len(table.rows),
        "max_quad_err": max(errs) if errs else None,
    }


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    try:
        cfg.validate()
        sys_ = rs.parse_group(cfg.group)
        c = cx.parse_h(cfg.h)
        table = COMMANDS[cfg.command](cfg, sys_, c)
    except (ConfigError, ConvexityError, ValueError) as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        node = None if exc.node is None else np.asarray(exc.node).tolist()
        print(f"numeric failure: {exc} (node={node})", file=stderr)
        return EXIT_NUMERIC
    except (NumericRangeError, FitError) as exc:
        print(f"numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    text = render(table, cfg.format)
    manifest = json.dumps(_manifest(cfg, started, table), indent=1)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
        with open(cfg.out + ".manifest.json", "w") as fh:
            fh.write(manifest + "\n")
    else:
        stdout.write(text)
        print(manifest, file=stderr)
    return EXIT_VALIDATION if table.failed else EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
