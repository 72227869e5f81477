"""Command line front end: eval, verify, scan, sum, search."""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .exactfield import embed_complex, format_element
from .kernel import BACKEND
from .mocktheta import CATALOG, MAIN_IDS, evaluate_at_root
from .qseries import SeriesError
from .scan import (
    ParseError,
    ScanRecord,
    SumRecord,
    completed,
    encode_coeffs,
    format_record,
    odd_primes,
    persist,
    prime_sum_search,
    root_sum,
    scan_nonvanishing,
)
from .verify import SUITES, run_disk_suite, run_suite

COMMANDS = ("eval", "verify", "scan", "sum", "search")
FORMATS = ("text", "records", "csv")
DISK_TOL = 1e-10
DISK_K = 80


class UsageError(ValueError):
    pass


@dataclass
class CliConfig:
    command: str
    fns: list[str] = field(default_factory=list)
    n: int | None = None
    n_min: int | None = None
    n_max: int | None = None
    p_max: int | None = None
    j: int = 1
    suite: str | None = None
    out: str | None = None
    fmt: str = "text"
    digits: int = 12
    cap_multiplier: int = 4
    jobs: int = 1
    resume: str | None = None
    approx: bool = False

    def odd_ns(self) -> list[int]:
        if self.n is not None:
            if self.n_min is not None or self.n_max is not None:
                raise UsageError("--n cannot be combined with --n-min/--n-max")
            lo = hi = self.n
        else:
            if self.n_max is None:
                raise UsageError("--n or --n-max is required")
            lo = 1 if self.n_min is None else self.n_min
            hi = self.n_max
        if lo < 1 or lo % 2 == 0:
            raise UsageError(f"--n/--n-min must be odd and positive, got {lo}")
        if hi % 2 == 0:
            raise UsageError(f"--n-max must be odd, got {hi}")
        if hi < lo:
            raise UsageError(f"--n-max {hi} is below --n-min {lo}")
        return list(range(lo, hi + 1, 2))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclomock", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--fn", action="append", default=[], help="function id (repeatable)")
    p.add_argument("--all", action="store_true", help="all main catalog functions")
    p.add_argument("--n", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--p-max", type=int)
    p.add_argument("--j", type=int, default=1, help="evaluate at zeta_n^j")
    p.add_argument("--suite", choices=SUITES)
    p.add_argument("--out", help="write records here (relative to $CYCLOMOCK_OUT if set)")
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--cap-multiplier", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", help="record file to resume from and append to")
    p.add_argument("--approx", action="store_true", help="also print complex embeddings")
    return p


def parse_config(argv: list[str] | None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(
        command=ns.command, fns=list(ns.fn), n=ns.n, n_min=ns.n_min, n_max=ns.n_max,
        p_max=ns.p_max, j=ns.j, suite=ns.suite, out=ns.out, fmt=ns.fmt, digits=ns.digits,
        cap_multiplier=ns.cap_multiplier, jobs=ns.jobs, resume=ns.resume, approx=ns.approx,
    )
    if cfg.digits < 6:
        raise UsageError(f"--digits must be >= 6, got {cfg.digits}")
    if cfg.cap_multiplier < 1:
        raise UsageError("--cap-multiplier must be >= 1")
    if cfg.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if ns.all:
        if cfg.fns:
            raise UsageError("--all cannot be combined with --fn")
        cfg.fns = list(MAIN_IDS)
    for f in cfg.fns:
        if f not in CATALOG:
            raise UsageError(f"--fn: unknown function {f!r}")
    return cfg


def _out_path(path: str) -> str:
    base = os.environ.get("CYCLOMOCK_OUT")
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


def _point(fn: str, n: int, j: int) -> str:
    return f"{fn}(zeta_{n})" if j % n == 1 or n == 1 else f"{fn}(zeta_{n}^{j % n})"


def _approx(value, digits: int) -> str:
    c = embed_complex(value, digits)
    return f"{c.real:.{digits}g}{c.imag:+.{digits}g}i"


def _csv_line(row) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(row)
    return buf.getvalue()


def _require_fns(cfg: CliConfig) -> list[str]:
    if not cfg.fns:
        raise UsageError("--fn or --all is required")
    return cfg.fns


# -- commands ------------------------------------------------------------------

def cmd_eval(cfg: CliConfig, out) -> int:
    fns = _require_fns(cfg)
    rows = []
    for n in cfg.odd_ns():
        for fn in fns:
            try:
                res = evaluate_at_root(fn, n, cfg.j, cap=cfg.cap_multiplier * n)
            except SeriesError as exc:
                rows.append(ScanRecord(fn, n, cfg.j % n, False, -1, (), 0, error=str(exc)))
                continue
            rows.append((fn, n, res))
    if cfg.fmt == "csv":
        out.write(_csv_line(["fn", "n", "j", "value", "terminated_at"] + (["approx"] if cfg.approx else [])))
    failed = False
    for row in rows:
        if isinstance(row, ScanRecord):
            failed = True
            if cfg.fmt == "records":
                out.write(format_record(row))
            else:
                out.write(f"{_point(row.function, row.n, row.j)}: error: {row.error}\n")
            continue
        fn, n, res = row
        j = cfg.j % n
        if cfg.fmt == "records":
            out.write(format_record(ScanRecord(fn, n, j, res.value.is_zero(), res.terminated_at,
                                               res.value.coeffs, 0)))
        elif cfg.fmt == "csv":
            extra = [_approx(res.value, cfg.digits)] if cfg.approx else []
            out.write(_csv_line([fn, n, j, format_element(res.value), res.terminated_at] + extra))
        else:
            line = f"{_point(fn, n, j)} = {format_element(res.value)}"
            if cfg.approx:
                line += f"  ~ {_approx(res.value, cfg.digits)}"
            out.write(line + "\n")
    return 1 if failed else 0


def _check_record(c) -> ScanRecord:
    witness = c.witness.coeffs if c.witness is not None else ()
    return ScanRecord(c.check_id, c.n, 1, c.passed, -1, witness, 0)


def cmd_verify(cfg: CliConfig, out) -> int:
    if cfg.suite is None:
        raise UsageError("--suite is required for verify")
    if cfg.suite == "disk":
        return _verify_disk(cfg, out)
    ns = cfg.odd_ns()
    if cfg.suite == "margins":
        return _verify_margins(cfg, [n for n in ns if n >= 7], out)
    checks = run_suite(cfg.suite, ns, cfg.jobs)
    failures = [c for c in checks if not c.passed]
    if cfg.fmt == "csv":
        out.write(_csv_line(["check", "n", "passed", "detail"]))
    for c in checks:
        if cfg.fmt == "records":
            out.write(format_record(_check_record(c)))
        elif cfg.fmt == "csv":
            out.write(_csv_line([c.check_id, c.n, c.passed, _detail(c.detail)]))
        else:
            tag = "PASS" if c.passed else "FAIL"
            extra = f"  {_detail(c.detail)}" if c.detail else ""
            out.write(f"{tag} {c.check_id} n={c.n}{extra}\n")
            if c.witness is not None:
                out.write(f"     residual = {format_element(c.witness)}\n")
    if cfg.fmt == "text":
        out.write(f"{len(checks) - len(failures)}/{len(checks)} checks passed\n")
    return 1 if failures else 0


def _detail(d: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in sorted(d.items()))


def _verify_margins(cfg: CliConfig, ns: list[int], out) -> int:
    # informational: margins are reported, never a failure
    from .verify import MARGIN_IDS, margin_report

    fns = [f for f in (cfg.fns or MARGIN_IDS) if f in MARGIN_IDS]
    if cfg.fmt == "csv":
        out.write(_csv_line(["fn", "n", "terminal_modulus", "partial_sum_modulus", "margin"]))
    d = cfg.digits
    for n in ns:
        for fn in fns:
            r = margin_report(fn, n, cfg.digits)
            if cfg.fmt == "records":
                rec = ScanRecord(fn, n, 1, False, -1, (), 0, margin=r.margin)
                out.write(format_record(rec))
            elif cfg.fmt == "csv":
                out.write(_csv_line([fn, n, f"{r.terminal_modulus:.{d}g}",
                                     f"{r.partial_sum_modulus:.{d}g}", f"{r.margin:.{d}g}"]))
            else:
                sign = "+" if r.margin > 0 else "-"
                out.write(f"{sign} {fn} n={n} |T|={r.terminal_modulus:.{d}g} "
                          f"P={r.partial_sum_modulus:.{d}g} margin={r.margin:.{d}g}\n")
    return 0


def _verify_disk(cfg: CliConfig, out) -> int:
    rows = run_disk_suite(DISK_K)
    bad = 0
    if cfg.fmt == "csv":
        out.write(_csv_line(["relation", "q", "residual", "passed"]))
    for which, q, res in rows:
        ok = res < DISK_TOL
        bad += not ok
        if cfg.fmt == "records":
            rec = ScanRecord(f"disk:{which}", 1, 0, ok, DISK_K, (), 0)
            d = rec.to_json()
            d["q"] = str(complex(q))
            d["residual"] = res
            out.write(json.dumps(d, separators=(",", ":")) + "\n")
        elif cfg.fmt == "csv":
            out.write(_csv_line([which, complex(q), f"{res:.3e}", ok]))
        else:
            out.write(f"{'PASS' if ok else 'FAIL'} {which} q={complex(q)} residual={res:.3e}\n")
    return 1 if bad else 0


def cmd_scan(cfg: CliConfig, out, err) -> int:
    fns = [f for f in _require_fns(cfg) if not CATALOG[f].diagnostic]
    if not fns:
        raise UsageError("scan needs main catalog functions")
    ns = cfg.odd_ns()
    skip: set = set()
    log_path = None
    if cfg.resume:
        log_path = cfg.resume
        skip = completed(log_path)
    records = scan_nonvanishing(fns, ns[0], ns[-1], jobs=cfg.jobs,
                                cap_multiplier=cfg.cap_multiplier, skip=skip)
    if log_path:
        persist(records, log_path)
    if cfg.out:
        path = _out_path(cfg.out)
        if os.path.abspath(path) != os.path.abspath(log_path or ""):
            open(path, "w").close()
            persist(records, path)
    zeros = [r for r in records if r.is_zero]
    errors = [r for r in records if r.error]
    if cfg.fmt == "csv":
        out.write(_csv_line(["fn", "n", "j", "is_zero", "terminated_at", "value", "error"]))
    for r in records:
        if cfg.fmt == "records":
            out.write(format_record(r))
        elif cfg.fmt == "csv":
            out.write(_csv_line([r.function, r.n, r.j, r.is_zero, r.terminated_at,
                                 encode_coeffs(r.value), r.error or ""]))
        else:
            status = "ZERO" if r.is_zero else ("ERROR " + r.error if r.error else "nonzero")
            out.write(f"{r.function} n={r.n} terminated_at={r.terminated_at} {status}\n")
    if cfg.fmt == "text":
        out.write(f"{len(records)} evaluations, {len(skip)} resumed, {len(zeros)} zeros, "
                  f"{len(errors)} errors\n")
    for r in zeros:
        err.write(f"*** ZERO FOUND: {r.function} vanishes at zeta_{r.n} ***\n")
    return 1 if zeros or errors else 0


def cmd_sum(cfg: CliConfig, out) -> int:
    fns = [f for f in _require_fns(cfg) if not CATALOG[f].diagnostic]
    if cfg.fmt == "csv":
        out.write(_csv_line(["fn", "n", "sum"]))
    for n in cfg.odd_ns():
        for fn in fns:
            _write_sum(cfg, out, root_sum(fn, n))
    return 0


def _write_sum(cfg: CliConfig, out, r: SumRecord) -> None:
    if cfg.fmt == "records":
        out.write(format_record(r))
    elif cfg.fmt == "csv":
        out.write(_csv_line([r.function, r.n, str(r.value)]))
    else:
        out.write(f"sum {r.function} over n={r.n} roots = {r.value}\n")


def cmd_search(cfg: CliConfig, out) -> int:
    if cfg.p_max is None:
        raise UsageError("--p-max is required for search")
    if cfg.p_max < 3:
        raise UsageError(f"--p-max must be >= 3, got {cfg.p_max}")
    fns = [f for f in _require_fns(cfg) if not CATALOG[f].diagnostic]
    vanishing, table = prime_sum_search(fns, cfg.p_max, jobs=cfg.jobs)
    if cfg.out:
        path = _out_path(cfg.out)
        open(path, "w").close()
        persist(table, path)
    if cfg.fmt == "text":
        primes = odd_primes(cfg.p_max)
        out.write(f"odd primes <= {cfg.p_max}: {len(primes)}; functions: {len(fns)}\n")
        for r in vanishing:
            out.write(f"vanishing: {r.function} p={r.n}\n")
        out.write(f"{len(vanishing)} vanishing root sums out of {len(table)}\n")
    else:
        if cfg.fmt == "csv":
            out.write(_csv_line(["fn", "n", "sum"]))
        for r in table:
            _write_sum(cfg, out, r)
    return 0


def dispatch(cfg: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    err.write(f"# cyclomock {__version__} backend={BACKEND} command={cfg.command} at {stamp}\n")
    if cfg.command == "eval":
        return cmd_eval(cfg, out)
    if cfg.command == "verify":
        return cmd_verify(cfg, out)
    if cfg.command == "scan":
        return cmd_scan(cfg, out, err)
    if cfg.command == "sum":
        return cmd_sum(cfg, out)
    if cfg.command == "search":
        return cmd_search(cfg, out)
    raise UsageError(f"unknown command {cfg.command}")


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        return dispatch(cfg)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (UsageError, ParseError) as exc:
        sys.stderr.write(f"cyclomock: error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"cyclomock: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
