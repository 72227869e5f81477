"""Exact identity checks at odd roots of unity, margin reports and disk residuals."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import mpmath

from .exactfield import (
    CycloElement,
    abs_square,
    conjugate,
    embed_mp,
    make_context,
)
from .mocktheta import (
    CATALOG,
    MAIN_IDS,
    PRIMED_IDS,
    catalog_lookup,
    evaluate_at_root,
    evaluate_truncated,
)
from .qseries import pochhammer

LINEAR_IDENTITIES = ("phi_sigma", "phi_mu", "psi_lambda", "psi_rho", "U0_U1")
MARGIN_IDS = ("phi", "psi", "S0_neg", "S1_neg", "U0_neg", "phi0_neg", "phi1_neg", "u")
DISK_RELATIONS = ("u_rel", "U0_rel", "U1_rel")


@dataclass
class CheckOutcome:
    check_id: str
    n: int
    passed: bool
    witness: CycloElement | None = None
    detail: dict = field(default_factory=dict)


@dataclass
class MarginRecord:
    function: str
    n: int
    terminal_modulus: float
    partial_sum_modulus: float
    margin: float
    terminal_abs_square: object = None  # exact rational |T|^2


def _odd(n: int, minimum: int = 1) -> None:
    if n < minimum or n % 2 == 0:
        raise ValueError(f"expected odd n >= {minimum}, got {n}")


def _outcome(check_id: str, n: int, residual: CycloElement, **detail) -> CheckOutcome:
    ok = residual.is_zero()
    return CheckOutcome(check_id, n, ok, None if ok else residual, detail)


def check_unit_product(n: int) -> CheckOutcome:
    """(-z; z)_{n-1} == 1."""
    _odd(n)
    z = make_context(n).zeta
    return _outcome("unit_product", n, pochhammer(-z, z, n - 1) - 1)


def check_n_product(n: int) -> CheckOutcome:
    """(z; z)_{n-1} == n."""
    _odd(n)
    z = make_context(n).zeta
    return _outcome("n_product", n, pochhammer(z, z, n - 1) - n)


def check_terminal_term(n: int) -> CheckOutcome:
    """|T|^2 == n and A^2 == (-1)^h z^(h^2) n, where A = (z; z^2)_h, T = (-1)^h z^(h^2) A."""
    _odd(n)
    if n == 1:
        return CheckOutcome("terminal_term", n, True, detail={"vacuous": True})
    ctx = make_context(n)
    z = ctx.zeta
    h = (n - 1) // 2
    sign = -1 if h % 2 else 1
    a = pochhammer(z, z * z, h)
    t = sign * z ** (h * h) * a
    r1 = abs_square(t) - n
    if not r1.is_zero():
        return CheckOutcome("terminal_term", n, False, r1, {"part": "abs_square"})
    r2 = a * a - sign * n * z ** (h * h)
    return _outcome("terminal_term", n, r2, part="squared")


def check_even_half_product(n: int) -> CheckOutcome:
    """B^2 == z^((n^2-1)/4) for B = (-z^2; z^2)_h; reports eps with B == eps z^((n^2-1)/8)."""
    _odd(n)
    if n == 1:
        return CheckOutcome("even_half_product", n, True, detail={"vacuous": True, "eps": 1})
    z = make_context(n).zeta
    h = (n - 1) // 2
    b = pochhammer(-(z * z), z * z, h)
    root = z ** ((n * n - 1) // 8)
    eps = 1 if b == root else (-1 if b == -root else 0)
    return _outcome("even_half_product", n, b * b - z ** ((n * n - 1) // 4), eps=eps)


def _val(fid: str, n: int, j: int) -> CycloElement:
    """f(z^j) as an element of Q(zeta_n); gcd(j, n) must be 1."""
    return evaluate_at_root(fid, n, j).value


def check_linear_identity(which: str, n: int) -> CheckOutcome:
    _odd(n)
    z = make_context(n).zeta
    zi = z**-1
    if which == "phi_sigma":
        r = _val("phi", n, 2) + 2 * _val("sigma_neg", n, 1)
    elif which == "phi_mu":
        r = _val("phi", n, 2) - _val("mu", n, 1)
    elif which == "psi_lambda":
        r = -2 * zi * _val("psi", n, 2) + _val("lambda", n, 1)
    elif which == "psi_rho":
        # rho(z) itself is undefined at odd roots; the identity is used at -q
        r = -zi * _val("psi", n, 2) + _val("rho_neg", n, 1)
    elif which == "U0_U1":
        r = _val("U0_neg", n, 1) + 2 * _val("U1_neg", n, 1)
    else:
        raise ValueError(f"unknown identity {which!r}")
    return _outcome(which, n, r)


def check_galois(fid: str, n: int, ks: Iterable[int] | None = None) -> CheckOutcome:
    _odd(n)
    if catalog_lookup(fid).diagnostic:
        raise ValueError(f"{fid} is a diagnostic entry")
    base = _val(fid, n, 1)
    if ks is None:
        ks = [k for k in range(1, n) if math.gcd(k, n) == 1] if n > 1 else []
    for k in ks:
        r = _val(fid, n, k) - conjugate(base, k)
        if not r.is_zero():
            return CheckOutcome(f"galois:{fid}", n, False, r, {"k": k})
    return CheckOutcome(f"galois:{fid}", n, True)


def check_inversion(primed: str, n: int) -> CheckOutcome:
    _odd(n)
    partner = catalog_lookup(primed).inversion_partner
    if partner is None:
        raise ValueError(f"{primed} has no inversion partner")
    r = _val(primed, n, 1) - _val(partner, n, n - 1)
    return _outcome(f"inversion:{primed}", n, r)


def margin_report(fid: str, n: int, digits: int = 12) -> MarginRecord:
    """Modulus of the terminal term against the modulus of everything before it."""
    if fid not in MARGIN_IDS:
        raise ValueError(f"no terminal-term margin defined for {fid}")
    _odd(n, 7)
    res = evaluate_at_root(fid, n, 1)
    last = res.last_term
    sq = abs_square(last)
    if not sq.is_rational():
        raise ArithmeticError(f"|terminal term|^2 of {fid} at n={n} is not rational")
    with mpmath.workdps(digits + 5):
        terminal = mpmath.sqrt(mpmath.mpf(sq.coeffs[0].numerator) / sq.coeffs[0].denominator)
        partial = abs(embed_mp(res.value - last, digits + 5))
        return MarginRecord(
            fid, n, float(terminal), float(partial), float(terminal - partial), sq.coeffs[0]
        )


def disk_residual(which: str, q: complex, K: int = 80) -> float:
    """|LHS - RHS| of a q-series relation, both sides truncated at K."""
    if abs(q) > 0.6:
        raise ValueError("disk residuals are defined for |q| <= 0.6")
    if K < 40:
        raise ValueError("K must be >= 40")
    q = complex(q)
    q2 = q * q

    def U0(x):
        return evaluate_truncated("U0_neg", -x, K)

    def U1(x):
        return evaluate_truncated("U1_neg", -x, K)

    if which == "u_rel":
        lhs, rhs = evaluate_truncated("u", q, K), U0(q) - 2 * U1(q)
    elif which == "U0_rel":
        S0 = evaluate_truncated("S0_neg", -q2, K)
        S1 = evaluate_truncated("S1_neg", -q2, K)
        lhs, rhs = U0(q), S0 + q * S1
    elif which == "U1_rel":
        T0 = evaluate_truncated("T0", q2, K)
        T1 = evaluate_truncated("T1", q2, K)
        lhs, rhs = U1(q), T0 + q * T1
    else:
        raise ValueError(f"unknown relation {which!r}")
    return abs(lhs - rhs)


# -- suites -----------------------------------------------------------------

SUITES = ("products", "identities", "galois", "inversion", "margins", "disk")


def _checks_for(suite: str, n: int) -> list:
    if suite == "products":
        return [check_unit_product(n), check_n_product(n), check_terminal_term(n),
                check_even_half_product(n)]
    if suite == "identities":
        return [check_linear_identity(w, n) for w in LINEAR_IDENTITIES]
    if suite == "galois":
        return [check_galois(f, n) for f in MAIN_IDS]
    if suite == "inversion":
        return [check_inversion(f, n) for f in PRIMED_IDS]
    if suite == "margins":
        if n < 7:
            return []
        return [margin_report(f, n) for f in MARGIN_IDS]
    raise ValueError(f"unknown suite {suite!r}")


def _suite_task(args):
    suite, n = args
    return n, _checks_for(suite, n)


def run_suite(suite: str, ns: Iterable[int], jobs: int = 1) -> list:
    """Run one suite over the given odd n, merged in ascending n order."""
    ns = sorted(ns)
    tasks = [(suite, n) for n in ns]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_suite_task, tasks))
    else:
        results = [_suite_task(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    return [c for _, checks in results for c in checks]


DISK_POINTS = (0.1, 0.3, 0.5, 0.3 + 0.3j, -0.4)


def run_disk_suite(K: int = 80, points=DISK_POINTS) -> list[tuple[str, complex, float]]:
    return [(w, q, disk_residual(w, q, K)) for w in DISK_RELATIONS for q in points]


__all__ = [
    "CheckOutcome", "MarginRecord", "check_unit_product", "check_n_product",
    "check_terminal_term", "check_even_half_product", "check_linear_identity",
    "check_galois", "check_inversion", "margin_report", "disk_residual", "run_suite",
    "run_disk_suite", "CATALOG",
]
