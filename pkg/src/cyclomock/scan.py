"""Nonvanishing scans, root sums over all n-th roots, and resumable record logs.

Records are JSON objects, one per line::

    {"schema":1, "fn":"phi", "n":7, "j":1, "is_zero":false,
     "terminated_at":3, "value":"2/1,0/1,...", "elapsed_ms":0}
    {"schema":1, "fn":"phi", "n":5, "sum":"0/1"}
"""
from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactfield import divisors, lift, make_context, trace
from .mocktheta import MAIN_IDS, catalog_lookup, evaluate_at_root
from .qseries import SeriesError

log = logging.getLogger(__name__)

SCHEMA = 1


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class CoercionFailure(ArithmeticError):
    pass


@dataclass
class ScanRecord:
    function: str
    n: int
    j: int
    is_zero: bool
    terminated_at: int
    value: tuple[Fraction, ...]
    elapsed_ms: int
    margin: float | None = None
    error: str | None = None

    def key(self) -> tuple[str, int]:
        return (self.function, self.n)

    def to_json(self) -> dict:
        d = {
            "schema": SCHEMA,
            "fn": self.function,
            "n": self.n,
            "j": self.j,
            "is_zero": self.is_zero,
            "terminated_at": self.terminated_at,
            "value": encode_coeffs(self.value),
            "elapsed_ms": self.elapsed_ms,
        }
        if self.margin is not None:
            d["margin"] = self.margin
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class SumRecord:
    function: str
    n: int
    value: Fraction

    def key(self) -> tuple[str, int]:
        return (self.function, self.n)

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "fn": self.function, "n": self.n, "sum": encode_rational(self.value)}


def encode_rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def encode_coeffs(coeffs: Sequence[Fraction]) -> str:
    return ",".join(encode_rational(c) for c in coeffs)


def decode_coeffs(text: str) -> tuple[Fraction, ...]:
    if not text:
        return ()
    return tuple(Fraction(part) for part in text.split(","))


_SCAN_KEYS = {"schema", "fn", "n", "j", "is_zero", "terminated_at", "value", "elapsed_ms"}
_SUM_KEYS = {"schema", "fn", "n", "sum"}


def record_from_json(d: dict):
    if not isinstance(d, dict) or d.get("schema") != SCHEMA:
        raise ValueError("missing or unsupported schema")
    if "sum" in d:
        if not _SUM_KEYS <= d.keys():
            raise ValueError(f"missing keys {_SUM_KEYS - d.keys()}")
        return SumRecord(d["fn"], int(d["n"]), Fraction(d["sum"]))
    if not _SCAN_KEYS <= d.keys():
        raise ValueError(f"missing keys {_SCAN_KEYS - d.keys()}")
    if not isinstance(d["is_zero"], bool):
        raise ValueError("is_zero must be boolean")
    return ScanRecord(
        d["fn"], int(d["n"]), int(d["j"]), d["is_zero"], int(d["terminated_at"]),
        decode_coeffs(d["value"]), int(d["elapsed_ms"]), d.get("margin"), d.get("error"),
    )


def format_record(rec) -> str:
    return json.dumps(rec.to_json(), separators=(",", ":")) + "\n"


def persist(records: Iterable, path: str | os.PathLike) -> None:
    """Append records to ``path``, one line each, flushed to disk."""
    with open(path, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(format_record(rec))
        fh.flush()
        os.fsync(fh.fileno())


def resume(path: str | os.PathLike) -> list:
    """Read back every complete record; a torn final line is skipped."""
    if not os.path.exists(path):
        return []
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    torn = lines.pop()  # text after the last newline
    out = []
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            out.append(record_from_json(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(i, str(exc)) from None
    if torn.strip():
        log.warning("ignoring partial trailing line %d in %s", len(lines) + 1, path)
    return out


def completed(path: str | os.PathLike) -> set[tuple[str, int]]:
    return {rec.key() for rec in resume(path)}


# -- nonvanishing scans -------------------------------------------------------

def evaluate_record(fid: str, n: int, j: int = 1, cap_multiplier: int = 4,
                    with_margin: bool = False) -> ScanRecord:
    t0 = time.perf_counter()
    try:
        res = evaluate_at_root(fid, n, j, cap=cap_multiplier * n)
    except SeriesError as exc:
        ms = int((time.perf_counter() - t0) * 1000)
        return ScanRecord(fid, n, j, False, -1, (), ms, error=f"{type(exc).__name__}: {exc}")
    margin = None
    if with_margin and n >= 7:
        from .verify import MARGIN_IDS, margin_report

        if fid in MARGIN_IDS:
            margin = margin_report(fid, n).margin
    ms = int((time.perf_counter() - t0) * 1000)
    return ScanRecord(fid, n, j, res.value.is_zero(), res.terminated_at, res.value.coeffs, ms, margin)


def _scan_task(args):
    n, ids, cap_multiplier, with_margin = args
    return [evaluate_record(fid, n, 1, cap_multiplier, with_margin) for fid in ids]


def odd_range(n_min: int, n_max: int) -> list[int]:
    if n_min < 1 or n_max < n_min or n_min % 2 == 0 or n_max % 2 == 0:
        raise ValueError(f"need odd 1 <= n_min <= n_max, got {n_min}..{n_max}")
    return list(range(n_min, n_max + 1, 2))


def scan_nonvanishing(ids: Iterable[str], n_min: int, n_max: int, *, jobs: int = 1,
                      cap_multiplier: int = 4, with_margin: bool = False,
                      skip: set[tuple[str, int]] | None = None) -> list[ScanRecord]:
    """Evaluate each function at zeta_n for odd n in range; sorted by (n, fn).

    By Galois equivariance a zero at zeta_n is a zero at every primitive
    n-th root, so one evaluation per (fn, n) decides vanishing.
    """
    ids = sorted(set(ids))
    for fid in ids:
        if catalog_lookup(fid).diagnostic:
            raise ValueError(f"{fid} is a diagnostic entry")
    skip = skip or set()
    tasks = []
    for n in odd_range(n_min, n_max):
        todo = [f for f in ids if (f, n) not in skip]
        if todo:
            tasks.append((n, todo, cap_multiplier, with_margin))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_scan_task, tasks))
    else:
        chunks = [_scan_task(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.n, r.function))
    return records


# -- root sums -----------------------------------------------------------------

def root_sum(fid: str, n: int) -> SumRecord:
    """sum of f(a) over all n-th roots a, as sum_{d | n} Trace(f(zeta_d))."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be odd and positive, got {n}")
    if catalog_lookup(fid).diagnostic:
        raise ValueError(f"{fid} is a diagnostic entry")
    total = Fraction(0)
    for d in divisors(n):
        value = evaluate_at_root(fid, d, 1 if d > 1 else 0).value
        try:
            total += trace(value)
        except ArithmeticError as exc:
            raise CoercionFailure(str(exc)) from None
    return SumRecord(fid, n, total)


def root_sum_naive(fid: str, n: int) -> Fraction:
    """Oracle: add f(zeta_n^j) for every j inside Q(zeta_n)."""
    ctx = make_context(n)
    acc = ctx.zero
    for j in range(n):
        acc = acc + lift(evaluate_at_root(fid, n, j).value, n)
    if not acc.is_rational():
        raise CoercionFailure(f"sum for {fid} at n={n} is not rational")
    return acc.coeffs[0]


def odd_primes(limit: int) -> list[int]:
    if limit < 3:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(3, limit + 1) if sieve[p]]


def prime_sum_search(ids: Iterable[str], p_max: int, *, jobs: int = 1) -> tuple[list[SumRecord], list[SumRecord]]:
    """Root sums over odd primes p <= p_max; returns (vanishing, full table)."""
    if p_max < 3:
        raise ValueError("p_max must be >= 3")
    ids = sorted(set(ids))
    tasks = [(fid, p) for p in odd_primes(p_max) for fid in ids]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            table = list(pool.map(_sum_task, tasks))
    else:
        table = [_sum_task(t) for t in tasks]
    table.sort(key=lambda r: (r.n, r.function))
    return [r for r in table if r.value == 0], table


def _sum_task(args):
    return root_sum(*args)


def default_ids() -> tuple[str, ...]:
    return MAIN_IDS
