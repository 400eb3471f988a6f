"""Command-line front end: tables, scaling scans, verification and the m = 1/2 figure data.

Exit codes: 0 success, 1 runtime or precision error, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

import mpmath as mp
import numpy as np

from . import __version__
from .errors import BocrossError
from .hypergeom import MIN_PRECISION
from .radial_kernel import DEFAULT_RHO_MAX, HalfOddInt, bounded_solution, large_rho_asymptotic
from .verify import run_checks
from .wavefield import OBSERVABLES, scaling_scan

log = logging.getLogger("bocross")

PRECISION_ENV = "BOCROSS_PRECISION"
DEFAULT_PRECISION = 30
DEFAULT_MU_LIST = (1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
COMMANDS = ("tabulate", "scan", "verify", "fig6")
FIG6 = dict(m="1/2", rho_min=0.0, rho_max=15.0, n_points=300, log_grid=False)


class ConfigError(ValueError):
    """Invalid command-line configuration (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    m: HalfOddInt
    mu: Optional[float] = None
    rho_min: float = 0.0
    rho_max: float = 15.0
    n_points: int = 300
    precision_digits: int = DEFAULT_PRECISION
    output_format: str = "csv"
    output_path: Optional[str] = None
    region_constant: float = 1.0
    mu_list: Optional[tuple] = None
    log_grid: bool = False
    observable: str = "mixing"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.rho_min < self.rho_max:
            raise ConfigError("rho_min must be smaller than rho_max")
        if self.rho_min < 0:
            raise ConfigError("rho_min must be >= 0")
        if self.n_points < 2:
            raise ConfigError("n_points must be >= 2")
        if self.precision_digits < MIN_PRECISION:
            raise ConfigError(f"precision must be >= {MIN_PRECISION}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.log_grid and self.rho_min <= 0:
            raise ConfigError("a log grid needs rho_min > 0")
        if self.region_constant <= 0:
            raise ConfigError("region constant must be positive")
        if self.observable not in OBSERVABLES:
            raise ConfigError(f"observable must be one of {OBSERVABLES}")
        if self.mu is not None and not 0 < self.mu <= 1e-2:
            raise ConfigError("mu must lie in (0, 1e-2]")
        if self.command == "scan":
            mus = self.mu_list or ()
            if len(mus) < 4 or len(set(mus)) != len(mus):
                raise ConfigError("a scan needs at least four distinct mu values")
            if any(not 0 < mu <= 1e-2 for mu in mus):
                raise ConfigError("mu values must lie in (0, 1e-2]")
            if math.log10(max(mus) / min(mus)) < 3 - 1e-12:
                raise ConfigError("mu values must span at least three decades")

    def echo(self) -> dict:
        out = asdict(self)
        out["m"] = str(self.m)
        out["mu_list"] = list(self.mu_list) if self.mu_list else None
        return out


@dataclass(frozen=True)
class TableRow:
    rho: object
    phi_plus: object
    phi_minus: object
    wkb_plus: object = None
    wkb_minus: object = None
    envelope: object = None


TABLE_COLUMNS = tuple(f.name for f in fields(TableRow))


def format_number(x, digits: int) -> str:
    """Scientific notation with ``digits`` significant digits; ``None`` stays empty."""
    if x is None:
        return ""
    with mp.workdps(digits + 5):
        if isinstance(x, (float, np.floating)):
            x = mp.mpf(repr(float(x)))  # shortest round-trip digits, not the binary expansion
        elif not isinstance(x, (mp.mpf, mp.mpc)):
            x = mp.mpf(x)
        if isinstance(x, mp.mpc):
            x = mp.re(x)
        if x == 0:
            return "0." + "0" * (digits - 1) + "e+0"
        return mp.nstr(x, digits, min_fixed=mp.inf, max_fixed=-mp.inf, strip_zeros=False, show_zero_exponent=True)


def grid(cfg: RunConfig) -> list:
    with mp.workdps(cfg.precision_digits + 10):
        if cfg.log_grid:
            lo, hi = mp.log(cfg.rho_min), mp.log(cfg.rho_max)
            return [mp.exp(lo + (hi - lo) * i / (cfg.n_points - 1)) for i in range(cfg.n_points)]
        lo, hi = mp.mpf(cfg.rho_min), mp.mpf(cfg.rho_max)
        return [lo + (hi - lo) * i / (cfg.n_points - 1) for i in range(cfg.n_points)]


def tabulate_rows(cfg: RunConfig) -> list:
    """Bounded solution plus the large-rho reference on the configured grid.

    Reference columns are left empty below rho = 1, where the asymptotic
    form does not apply.
    """
    if cfg.m.twice_m < 0:
        raise ConfigError("tabulate requires m >= 1/2")
    rows = []
    rho_cap = max(DEFAULT_RHO_MAX, cfg.rho_max)
    for rho in grid(cfg):
        pair = bounded_solution(cfg.m, rho, cfg.precision_digits, rho_max=rho_cap)
        if rho >= 1:
            ref = large_rho_asymptotic(cfg.m, rho, cfg.precision_digits)
            with mp.workdps(cfg.precision_digits + 10):
                env = (2 * mp.pi) ** mp.mpf(-1.5) * rho ** mp.mpf(-0.75)
            rows.append(TableRow(rho, pair.phi_plus, pair.phi_minus, ref.phi_plus, ref.phi_minus, env))
        else:
            rows.append(TableRow(rho, pair.phi_plus, pair.phi_minus))
    return rows


def _csv(columns, rows, digits) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_number(row[c], digits) for c in columns))
    return "\n".join(lines) + "\n"


def _json(meta, columns, rows, digits) -> str:
    # numbers are written as literals so JSON and CSV carry identical digits
    body = []
    for row in rows:
        items = []
        for c in columns:
            v = row[c]
            items.append(f'"{c}": ' + ("null" if v is None else format_number(v, digits)))
        body.append("    {" + ", ".join(items) + "}")
    return (
        '{\n  "meta": ' + json.dumps(meta, sort_keys=True) + ',\n  "rows": [\n'
        + ",\n".join(body) + "\n  ]\n}\n"
    )


def render(cfg: RunConfig, meta: dict, columns, rows: list) -> str:
    dict_rows = [r if isinstance(r, dict) else asdict(r) for r in rows]
    if cfg.output_format == "json":
        return _json(meta, columns, dict_rows, cfg.precision_digits)
    return _csv(columns, dict_rows, cfg.precision_digits)


def write_atomic(path: Optional[str], text: str) -> None:
    """Write via a temporary file in the target directory and rename; stdout if no path."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bocross-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {"config": cfg.echo(), "version": __version__}
    meta.update(extra)
    return meta


def cmd_tabulate(cfg: RunConfig) -> int:
    rows = tabulate_rows(cfg)
    write_atomic(cfg.output_path, render(cfg, _meta(cfg), TABLE_COLUMNS, rows))
    return 0


def cmd_fig6(cfg: RunConfig) -> int:
    preset = RunConfig(
        command="fig6", m=HalfOddInt.parse(FIG6["m"]), rho_min=FIG6["rho_min"], rho_max=FIG6["rho_max"],
        n_points=FIG6["n_points"], log_grid=FIG6["log_grid"], precision_digits=cfg.precision_digits,
        output_format=cfg.output_format, output_path=cfg.output_path,
    )
    return cmd_tabulate(preset)


SCAN_COLUMNS = ("mu", "value", "fitted_exponent", "fit_residual")


def cmd_scan(cfg: RunConfig) -> int:
    res = scaling_scan(
        cfg.observable, cfg.m, cfg.mu_list, region_constant=cfg.region_constant,
        precision=cfg.precision_digits,
    )
    rows = [
        {"mu": mu, "value": v, "fitted_exponent": res.fitted_exponent, "fit_residual": res.fit_residual}
        for mu, v in zip(res.mu_values, res.observable_values)
    ]
    meta = _meta(cfg, fitted_exponent=res.fitted_exponent, fit_residual=res.fit_residual, observable=cfg.observable)
    write_atomic(cfg.output_path, render(cfg, meta, SCAN_COLUMNS, rows))
    log.info("fitted exponent %.6f (rms residual %.2e)", res.fitted_exponent, res.fit_residual)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    report = run_checks(cfg.precision_digits)
    payload = report.as_dict()
    payload["version"] = __version__
    write_atomic(cfg.output_path, json.dumps(payload, indent=2, sort_keys=False) + "\n")
    for c in report.checks:
        log.info("%-34s %s measured=%.3e threshold=%.3e", c.name, "PASS" if c.passed else "FAIL", c.measured, c.threshold)
    return 0 if report.passed else 1


HANDLERS = {"tabulate": cmd_tabulate, "scan": cmd_scan, "verify": cmd_verify, "fig6": cmd_fig6}


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


def _mu_list(text: str) -> tuple:
    try:
        return tuple(float(t) for t in text.replace(";", ",").split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse mu list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bocross", description=__doc__.splitlines()[0])
    p.add_argument("--command", choices=COMMANDS, default="tabulate")
    p.add_argument("--m", default="1/2", help='angular number, e.g. "1/2", "3/2"')
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--mu-list", type=_mu_list, default=None, help="comma-separated mu values")
    p.add_argument("--rho-min", type=float, default=0.0)
    p.add_argument("--rho-max", type=float, default=15.0)
    p.add_argument("--n", type=int, default=300, dest="n_points")
    p.add_argument("--precision", type=int, default=None, help=f"decimal digits (default ${PRECISION_ENV} or {DEFAULT_PRECISION})")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--region-constant", type=float, default=1.0)
    p.add_argument("--log-grid", action="store_true")
    p.add_argument("--observable", choices=OBSERVABLES, default="mixing")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        m = HalfOddInt.parse(args.m)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from None
    precision = args.precision if args.precision is not None else _default_precision()
    mu_list = args.mu_list
    if args.command == "scan" and mu_list is None:
        mu_list = DEFAULT_MU_LIST
    return RunConfig(
        command=args.command, m=m, mu=args.mu, rho_min=args.rho_min, rho_max=args.rho_max,
        n_points=args.n_points, precision_digits=precision, output_format=args.format,
        output_path=args.out, region_constant=args.region_constant, mu_list=mu_list,
        log_grid=args.log_grid, observable=args.observable,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
        return HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"bocross: configuration error: {exc}", file=sys.stderr)
        return 2
    except (BocrossError, ArithmeticError, OSError, ValueError) as exc:
        print(f"bocross: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
