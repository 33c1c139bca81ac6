"""``qrun``: tables, identity checks and asymptotic comparisons from the command line.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from . import asymptotics as asy
from . import qgen
from .series import euler_inverse
from .suites import SUITES, gating_passed, run_suite

log = logging.getLogger("qrun")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# every default in one place; each is overridable by the flag of the same name
DEFAULTS: dict[str, Any] = {
    "k": 1,
    "n": 10,
    "order": 500,
    "x_order": 30,
    "q_order": 120,
    "budget": 10_000,
    "eps": 0.1,
    "eps_min": 0.02,
    "tol": 1e-13,
    "format": "json",
    "threads": 1,
}

SERIES_FAMILIES = ("gbar", "hk", "gk", "euler", "phi", "chi", "fine")
ASYM_KINDS = ("pbar", "p2", "pklog", "hk", "contour")


class BudgetExceeded(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    k: int = DEFAULTS["k"]
    n: int = DEFAULTS["n"]
    order: int = DEFAULTS["order"]
    x_order: int = DEFAULTS["x_order"]
    q_order: int = DEFAULTS["q_order"]
    budget: int = DEFAULTS["budget"]
    eps: list[float] = field(default_factory=lambda: [DEFAULTS["eps"]])
    eps_min: float = DEFAULTS["eps_min"]
    tol: float = DEFAULTS["tol"]
    format: str = DEFAULTS["format"]
    out: str | None = None
    threads: int = DEFAULTS["threads"]
    suite: str = "all"
    family: str = "gbar"
    kind: str = "pbar"
    points: list[int] | None = None
    inject_fault: bool = False

    def __post_init__(self):
        for name in ("k", "x_order", "q_order", "budget", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        for name in ("n", "order"):
            if getattr(self, name) < 0:
                raise ValueError(f"--{name} must be non-negative")
        if any(e <= 0 for e in self.eps) or self.eps_min <= 0 or self.tol <= 0:
            raise ValueError("--eps, --eps-min and --tol must be positive")


# ---------------------------------------------------------------------------
# commands; each returns (payload, rows, fields, exit_code)


def _check_budget(n: int, cfg: RunConfig) -> None:
    if n > cfg.budget:
        raise BudgetExceeded(f"requested order {n} exceeds the series budget {cfg.budget}")


def cmd_count(cfg: RunConfig):
    _check_budget(cfg.n, cfg)
    if cfg.family not in ("gbar", "gk"):
        raise ValueError("count supports --family gbar (pbar_k) or gk (p_k)")
    s = (qgen.gbar_series if cfg.family == "gbar" else qgen.gk_series)(cfg.k, cfg.n, workers=cfg.threads)
    rows = [{"n": i, "value": str(c)} for i, c in enumerate(s.coeffs)]
    return {"command": "count", "k": cfg.k, "family": cfg.family}, rows, ["n", "value"], EXIT_OK


def cmd_series(cfg: RunConfig):
    _check_budget(cfg.order, cfg)
    fam, N = cfg.family, cfg.order
    if fam == "gbar":
        s = qgen.gbar_series(cfg.k, N, workers=cfg.threads)
    elif fam == "hk":
        s = qgen.hk_series(cfg.k, N, workers=cfg.threads)
    elif fam == "gk":
        s = qgen.gk_series(cfg.k, N, workers=cfg.threads)
    elif fam == "euler":
        s = euler_inverse(N)
    elif fam == "phi":
        s = qgen.phi_series(N)
    elif fam == "chi":
        s = qgen.chi_series(N)
    elif fam == "fine":
        s = qgen.fine_bracket_series(N)
    else:
        raise ValueError(f"unknown family {fam!r}")
    rows = [{"n": i, "value": str(c)} for i, c in enumerate(s.coeffs)]
    return {"command": "series", "k": cfg.k, "family": fam}, rows, ["n", "value"], EXIT_OK


def cmd_bivariate(cfg: RunConfig):
    _check_budget(cfg.q_order, cfg)
    b = qgen.gbar_bivariate(cfg.k, cfg.x_order, cfg.q_order)
    rows = [
        {"parts": m, "n": n, "value": str(b[m, n])}
        for m in range(b.x_order + 1)
        for n in range(b.q_order + 1)
        if b[m, n]
    ]
    return {"command": "bivariate", "k": cfg.k}, rows, ["parts", "n", "value"], EXIT_OK


VERIFY_FIELDS = ["identity_name", "trunc_order", "status", "first_mismatch", "lhs_coeff", "rhs_coeff", "informational"]


def cmd_verify(cfg: RunConfig):
    reports = run_suite(
        cfg.suite,
        order=cfg.order,
        n_max=cfg.n,
        x_order=cfg.x_order,
        q_order=cfg.q_order,
        inject_fault=cfg.inject_fault,
    )
    for r in reports:
        tag = "info" if r.informational else r.status
        log.info("%-4s %s", tag, r.identity_name)
    rows = [r.to_dict() for r in reports]
    code = EXIT_OK if gating_passed(reports) else EXIT_FAIL
    payload = {"command": "verify", "suite": cfg.suite, "exit_code": code}
    return payload, rows, VERIFY_FIELDS, code


ASYM_FIELDS = ["point", "exact_log", "asym_log", "ratio"]


def _asym_row(point, exact_log: float, asym_log: float) -> dict:
    return {"point": point, "exact_log": exact_log, "asym_log": asym_log, "ratio": math.exp(exact_log - asym_log)}


def _asym_rows(cfg: RunConfig, kind: str, points) -> list[dict]:
    rows = []
    if kind in ("pbar", "p2", "pklog"):
        top = max(points)
        _check_budget(top, cfg)
        if kind == "pbar":
            s = qgen.gbar_series(cfg.k, top, workers=cfg.threads)
        else:
            s = qgen.gk_series(2 if kind == "p2" else cfg.k, top, workers=cfg.threads)
        for n in points:
            exact = asy.bigint_log(int(s[n]))
            if kind == "pbar":
                a = asy.pbar_asymptote(cfg.k, n).log_value
            elif kind == "p2":
                a = asy.p2_asymptote(n).log_value
            else:
                a = asy.pk_log_asymptote(cfg.k, n)
            rows.append(_asym_row(n, exact, a))
    elif kind == "hk":
        for eps in points:
            rows.append(_asym_row(eps, math.log(asy.hk_numeric(cfg.k, eps, cfg.tol)), asy.hk_asymptote(cfg.k, eps).log_value))
    elif kind == "contour":
        for eps in points:
            rows.append(_asym_row(eps, math.log(asy.hk_numeric(cfg.k, eps, cfg.tol)), math.log(asy.hk_contour(cfg.k, eps))))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return rows


def cmd_asym(cfg: RunConfig):
    if cfg.kind in ("hk", "contour"):
        points = cfg.eps
    else:
        points = cfg.points or [cfg.n]
        if min(points) < 1:
            raise ValueError("asymptotic points must be >= 1")
    rows = _asym_rows(cfg, cfg.kind, points)
    return {"command": "asym", "kind": cfg.kind, "k": cfg.k}, rows, ASYM_FIELDS, EXIT_OK


def cmd_sweep(cfg: RunConfig):
    """Geometric sweep: n = 10, 100, ... up to --n, or eps halving from --eps to --eps-min."""
    if cfg.kind in ("hk", "contour"):
        points, e = [], cfg.eps[0]
        while e >= cfg.eps_min * (1 - 1e-12):
            points.append(e)
            e /= 2
    else:
        points, n = [], 10
        while n <= cfg.n:
            points.append(n)
            n *= 10
        if not points:
            raise ValueError("sweep needs --n >= 10")
    rows = _asym_rows(cfg, cfg.kind, points)
    return {"command": "sweep", "kind": cfg.kind, "k": cfg.k}, rows, ASYM_FIELDS, EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "series": cmd_series,
    "bivariate": cmd_bivariate,
    "verify": cmd_verify,
    "asym": cmd_asym,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# serialisation


def _json_value(v):
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return v


def to_json(payload: dict, rows: list[dict]) -> str:
    doc = dict(payload)
    doc["rows"] = [_json_value(r) for r in rows]
    return json.dumps(doc, indent=2) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(x) for x in v)
    return str(v)


def to_csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_csv_cell(_json_value(r.get(f))) for f in fields])
    return buf.getvalue()


def csv_to_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qrun", description="Tables, identity checks and asymptotic comparisons for k-run overpartitions.", epilog=__doc__.splitlines()[2])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--k", type=int, default=DEFAULTS["k"], help="run length k (default %(default)s)")
    p.add_argument("--n", type=int, default=DEFAULTS["n"], help="largest n (count, sweep) / exhaustive bound (verify)")
    p.add_argument("--order", type=int, default=DEFAULTS["order"], help="q truncation order for series and identity checks")
    p.add_argument("--x-order", type=int, default=DEFAULTS["x_order"], help="x truncation order for bivariate work")
    p.add_argument("--q-order", type=int, default=DEFAULTS["q_order"], help="q truncation order for bivariate work")
    p.add_argument("--budget", type=int, default=DEFAULTS["budget"], help="largest series order allowed")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--family", choices=SERIES_FAMILIES, default="gbar")
    p.add_argument("--kind", choices=ASYM_KINDS, default="pbar")
    p.add_argument("--points", type=_int_list, default=None, help="comma-separated n values for asym")
    p.add_argument("--eps", type=_float_list, default=[DEFAULTS["eps"]], help="comma-separated eps values")
    p.add_argument("--eps-min", type=float, default=DEFAULTS["eps_min"])
    p.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    p.add_argument("--format", choices=("json", "csv"), default=DEFAULTS["format"])
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument(
        "--threads", type=int, default=int(os.environ.get("QRUN_THREADS", DEFAULTS["threads"])),
        help="worker processes for the double-sum kernel (env QRUN_THREADS)",
    )
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = RunConfig(
            command=args.command, k=args.k, n=args.n, order=args.order, x_order=args.x_order,
            q_order=args.q_order, budget=args.budget, eps=args.eps, eps_min=args.eps_min,
            tol=args.tol, format=args.format, out=args.out, threads=args.threads,
            suite=args.suite, family=args.family, kind=args.kind, points=args.points,
            inject_fault=args.inject_fault,
        )
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"qrun: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        payload, rows, fields, code = COMMANDS[cfg.command](cfg)
    except BudgetExceeded as exc:
        print(f"qrun: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"qrun: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = to_json(payload, rows) if cfg.format == "json" else to_csv(rows, fields)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
