"""Command-line front end: prime sweeps, window checks, the full battery, and
series dumps.

Exit codes are a stable contract for CI: 0 means every mathematical check
passed, 1 means at least one failed, 2 means a usage, configuration, or I/O
problem.  Exact integers are serialized as decimal strings because they
routinely overflow 64 bits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import multiprocessing
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .checks import (
    CheckReport,
    check_fixed_prime,
    check_supercongruence_window,
    run_battery,
    _expansions,
)
from .figures import figure_path, render_sweep_figure, render_window_figure
from .rationals import format_rational, is_prime, primes_in_range, vp
from .store import SweepStore, store_path
from . import qexpansions as qx
from . import recurrence as rec


class ConfigError(Exception):
    """Invalid run configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    pmin: int = 5
    pmax: int = 499
    p: int | None = None
    nmax: int = 499
    terms: int | None = None
    jobs: int = 1
    out: str | None = None
    fmt: str = "json"
    resume: bool = True
    profile: str = "default"
    name: str | None = None
    store: str | None = None
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command == "fixed-primes":
            if self.pmin < 5:
                raise ConfigError("pmin must be at least 5")
            if self.pmax < self.pmin:
                raise ConfigError("pmax must be >= pmin")
            if self.jobs < 1:
                raise ConfigError("jobs must be positive")
        elif self.command == "window":
            if not primes_in_range(5, self.pmax):
                raise ConfigError(f"no primes >= 5 up to pmax = {self.pmax}")
            if self.nmax < 5:
                raise ConfigError("nmax must be at least 5")
        elif self.command == "series":
            if self.name not in SERIES_NAMES:
                raise ConfigError(
                    f"unknown series {self.name!r}; choose from {sorted(SERIES_NAMES)}"
                )
            if self.name == "Up" and self.p is None:
                raise ConfigError("series Up requires --p")
            if self.p is not None and (self.p < 5 or not is_prime(self.p)):
                raise ConfigError(f"--p must be a prime >= 5, got {self.p}")
            if (self.terms or 0) < 1:
                raise ConfigError("--terms must be positive")
        if self.fmt == "csv" and self.command not in ("fixed-primes",):
            raise ConfigError("csv output is only available for the prime sweep")


SERIES_NAMES = {"A", "B", "t", "H", "C", "L", "Up", "theta"}


def _sweep_worker(p: int) -> dict:
    return check_fixed_prime(p).to_json()


def _delta_rows(reports: list[CheckReport]):
    """Flatten fixed-prime reports into (p, r, s, value, vp, passed) rows.

    A vanishing delta has infinite valuation, reported as "inf" and passing.
    """
    rows = []
    for rep in reports:
        p = rep.params["p"]
        for w in rep.witnesses:
            if not w.label.startswith("delta[") or w.valuation is None:
                continue
            r, s = (int(x) for x in w.label[6:-1].split(","))
            rows.append((p, r, s, w.value, w.valuation.to_json(), w.valuation >= 4))
    return rows


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _report_json(cfg: RunConfig, reports: list[CheckReport], params: dict) -> str:
    doc = {
        "version": __version__,
        "command": cfg.command,
        "params": params,
        "reports": [r.to_json() for r in reports],
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def _human_lines(reports: list[CheckReport]) -> str:
    buf = io.StringIO()
    for rep in reports:
        head = f"{rep.name}: {rep.status.upper()}"
        if rep.min_valuation is not None:
            head += f" (min v_p = {rep.min_valuation.to_json()})"
        print(head, file=buf)
        matrix = rep.params.get("matrix")
        if matrix:
            for row in matrix:
                print("   " + " ".join(str(v) for v in row), file=buf)
        for w in rep.witnesses:
            parts = [f"   {w.label}"]
            if w.value is not None:
                parts.append(f"= {w.value}")
            if w.valuation is not None:
                parts.append(f"[v_p = {w.valuation.to_json()}]")
            print(" ".join(parts), file=buf)
    return buf.getvalue()


def cmd_fixed_primes(cfg: RunConfig) -> int:
    primes = primes_in_range(cfg.pmin, cfg.pmax)
    store = SweepStore.load(store_path(cfg.store), __version__)
    todo = [p for p in primes if not store.has_current(p, 3 * p + 1)]
    # Largest primes first: work units are self-contained, this balances load.
    todo.sort(reverse=True)
    if todo:
        _expansions(3 * max(todo) + 1)  # shared by fork-started workers
        if cfg.jobs > 1 and len(todo) > 1:
            with multiprocessing.Pool(min(cfg.jobs, len(todo))) as pool:
                for doc in pool.imap_unordered(_sweep_worker, todo):
                    rep = CheckReport.from_json(doc)
                    store.put(rep.params["p"], [rep], rep.params["precision"])
                    store.save()
        else:
            for p in todo:
                rep = check_fixed_prime(p)
                store.put(p, [rep], rep.params["precision"])
                store.save()
    reports = []
    for p in primes:
        reports.extend(store.reports_for(p))
    reports.sort(key=lambda r: r.params["p"])
    rows = _delta_rows(reports)
    passed = sum(1 for row in rows if row[5])
    params = {
        "pmin": cfg.pmin,
        "pmax": cfg.pmax,
        "jobs": cfg.jobs,
        "primes": len(primes),
        "subchecks": len(rows),
        "subchecks_passed": passed,
    }
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["p", "r", "s", "delta_decimal", "vp", "pass"])
        for p, r, s, delta, v, ok in rows:
            writer.writerow([p, r, s, delta, v, ok])
        _write_output(buf.getvalue(), cfg.out)
    elif cfg.fmt == "human":
        body = _human_lines(reports)
        body += f"subchecks passed: {passed}/{len(rows)}\n"
        _write_output(body, cfg.out)
    else:
        _write_output(_report_json(cfg, reports, params), cfg.out)
    if cfg.out:
        fig_rows = [(p, r, s, v, ok) for p, r, s, _, v, ok in rows if isinstance(v, int)]
        render_sweep_figure(fig_rows, figure_path(cfg.out))
    return 0 if all(r.passed for r in reports) else 1


def cmd_window(cfg: RunConfig) -> int:
    report = check_supercongruence_window(cfg.pmax, cfg.nmax)
    params = {"pmax": cfg.pmax, "nmax": cfg.nmax}
    if cfg.fmt == "human":
        _write_output(_human_lines([report]), cfg.out)
    else:
        _write_output(_report_json(cfg, [report], params), cfg.out)
    if cfg.out:
        table = rec.a_seq(cfg.nmax)
        entries = []
        for p in primes_in_range(5, cfg.pmax):
            for m in range(1, cfg.nmax // p + 1):
                v = vp(table.a(m * p) - table.a(m), p).value
                if v is not None:
                    entries.append((p, m, v))
        render_window_figure(entries, figure_path(cfg.out))
    return 0 if report.passed else 1


def cmd_verify_all(cfg: RunConfig) -> int:
    reports = run_battery(cfg.profile, identity_N=cfg.terms)
    params = {"profile": cfg.profile}
    if cfg.fmt == "human":
        body = _human_lines(reports)
        failed = [r.name for r in reports if not r.passed]
        body += (
            "all checks passed\n"
            if not failed
            else f"FAILED: {', '.join(failed)}\n"
        )
        _write_output(body, cfg.out)
    else:
        _write_output(_report_json(cfg, reports, params), cfg.out)
    return 0 if all(r.passed for r in reports) else 1


def _series_values(name: str, terms: int, p: int | None):
    if name == "A":
        table = rec.a_seq(terms - 1)
        return [(n, table.a(n)) for n in range(terms)]
    if name == "B":
        table = rec.a_seq(terms - 1)
        return [(n, table.b(n)) for n in range(terms)]
    gens = {
        "t": lambda: qx.gen_t(terms + 1),
        "H": lambda: qx.gen_H(max(terms, 2)),
        "C": lambda: qx.gen_C(terms),
        "L": lambda: qx.gen_L(terms + 1),
        "theta": lambda: qx.gen_theta(max(terms, 2)),
        "Up": lambda: qx.gen_Up(p, terms + 1),
    }
    series = gens[name]()
    exps = list(range(series.min_exp, series.min_exp + terms))
    return [(n, series.coeff(n)) for n in exps if n < series.prec]


def cmd_series(cfg: RunConfig) -> int:
    values = _series_values(cfg.name, cfg.terms or 8, cfg.p)
    if cfg.fmt == "human":
        body = "".join(
            f"q^{n}: {format_rational(v)}\n" for n, v in values
        )
        _write_output(body, cfg.out)
    else:
        doc = {
            "version": __version__,
            "command": "series",
            "params": {"name": cfg.name, "terms": cfg.terms, "p": cfg.p},
            "reports": [
                {
                    "name": f"series({cfg.name})",
                    "coefficients": [
                        {"exponent": n, "value": format_rational(v)} for n, v in values
                    ],
                }
            ],
        }
        _write_output(json.dumps(doc, indent=1), cfg.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supercong",
        description="Exact-arithmetic verification of q-series congruence claims",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, csv_ok=False):
        sp.add_argument("--out", help="write the report to this path")
        choices = ["json", "csv", "human"] if csv_ok else ["json", "human"]
        sp.add_argument("--format", dest="fmt", choices=["json", "csv", "human"],
                        default="json", help=f"output format ({'/'.join(choices)})")

    sp = sub.add_parser("fixed-primes", help="principal-part sweep over a prime range")
    sp.add_argument("--pmin", type=int, default=5)
    sp.add_argument("--pmax", type=int, default=499)
    sp.add_argument("--jobs", type=int, default=1, help="parallel worker count")
    sp.add_argument("--resume", action="store_true",
                    help="reuse stored results (always on; flag kept for scripts)")
    sp.add_argument("--store", help="override the result store path")
    common(sp, csv_ok=True)

    sp = sub.add_parser("window", help="A(pm) = A(m) mod p^4 over a finite window")
    sp.add_argument("--pmax", type=int, default=47)
    sp.add_argument("--nmax", type=int, default=499)
    common(sp)

    sp = sub.add_parser("verify-all", help="run the full verification battery")
    sp.add_argument("--profile", choices=["quick", "default", "deep"], default="default")
    sp.add_argument("--terms", type=int, default=None,
                    help="override the q-series identity depth")
    common(sp)

    sp = sub.add_parser("series", help="dump exact coefficients of a named series")
    sp.add_argument("name", help="one of A, B, t, H, C, L, Up, theta")
    sp.add_argument("--terms", type=int, default=8, help="number of coefficients")
    sp.add_argument("--p", type=int, default=None, help="prime (required for Up)")
    common(sp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; preserve both.
        return int(exc.code or 0)
    cfg = RunConfig(command=args.command)
    for key in ("pmin", "pmax", "p", "nmax", "terms", "jobs", "out", "fmt",
                "profile", "name", "store"):
        if hasattr(args, key) and getattr(args, key) is not None:
            setattr(cfg, key, getattr(args, key))
    try:
        cfg.validate()
        if cfg.command == "fixed-primes":
            return cmd_fixed_primes(cfg)
        if cfg.command == "window":
            return cmd_window(cfg)
        if cfg.command == "verify-all":
            return cmd_verify_all(cfg)
        if cfg.command == "series":
            return cmd_series(cfg)
        raise ConfigError(f"unknown command {cfg.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())
