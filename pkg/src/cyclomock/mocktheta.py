"""Catalog of mock theta functions that terminate at odd roots of unity.

Each entry pairs a :class:`SeriesSpec` with a substitution applied to the
evaluation point: ``sigma_neg`` is sigma evaluated at -q, and so on.

The primed functions f' are built so that f'(q) = f(1/q) holds term by
term. For phi' and psi' this is the textbook series; for the others the
commonly printed displays do not satisfy that relation (see the
``*_display`` diagnostic entries), so the series here are obtained by
substituting 1/q into the base series and clearing the powers of q from
the Pochhammer symbols.

U1 carries (-q^2;q^4)_{k+1} in its denominator. With the length-k symbol
none of U0(q) - 2 U1(q) = u(q), U1(q) = T0(q^2) + q T1(q^2), or the
vanishing of U0(-q) + 2 U1(-q) at odd roots holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .exactfield import CycloElement, make_context
from .qseries import (
    EvaluationResult,
    PochhammerFactor as P,
    SeriesSpec,
    eval_series,
    quadratic,
    series_truncated,
)


class UnknownFunction(KeyError):
    pass


SUBSTITUTIONS = ("identity", "negate", "invert", "square")


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    spec: SeriesSpec
    substitution: str = "identity"
    inversion_partner: str | None = None
    diagnostic: bool = False
    label: str = ""

    def apply(self, q):
        """Apply the substitution to a CycloElement or a complex number."""
        if self.substitution == "identity":
            return q
        if self.substitution == "negate":
            return -q
        if self.substitution == "invert":
            return q ** -1 if isinstance(q, CycloElement) else 1 / q
        if self.substitution == "square":
            return q * q
        raise ValueError(self.substitution)


def _spec(sign, exponent, num=(), den=(), power=1):
    return SeriesSpec(sign, quadratic(exponent), tuple(num), tuple(den), power)


# Pochhammer families used below
q_q2_k = P(1, 1, 2)             # (q;q^2)_k
q_q2_k1 = P(1, 1, 2, 1, 1)      # (q;q^2)_{k+1}
mq_q_k = P(-1, 1, 1)            # (-q;q)_k
mq_q_2k = P(-1, 1, 1, 2, 0)     # (-q;q)_{2k}
mq_q_2k1 = P(-1, 1, 1, 2, 1)    # (-q;q)_{2k+1}
mq_q2_k = P(-1, 1, 2)           # (-q;q^2)_k
mq_q2_k1 = P(-1, 1, 2, 1, 1)    # (-q;q^2)_{k+1}
mq2_q2_k = P(-1, 2, 2)          # (-q^2;q^2)_k
mq4_q4_k = P(-1, 4, 4)          # (-q^4;q^4)_k
mq2_q4_k = P(-1, 2, 4)          # (-q^2;q^4)_k
mq2_q4_k1 = P(-1, 2, 4, 1, 1)   # (-q^2;q^4)_{k+1}
q_q_k = P(1, 1, 1)              # (q;q)_k


def _build() -> dict[str, CatalogEntry]:
    phi = _spec("(-1)^k", lambda k: k * k, [q_q2_k], [mq_q_2k])
    psi = _spec("(-1)^k", lambda k: (k + 1) ** 2, [q_q2_k], [mq_q_2k1])
    lam = _spec("(-1)^k", lambda k: k, [q_q2_k], [mq_q_k])
    mu = _spec("(-1)^k", lambda k: 0, [q_q2_k], [mq_q_k])
    rho = _spec("+", lambda k: k * (k + 1) // 2, [mq_q_k], [q_q2_k1])
    sigma = _spec("+", lambda k: (k + 1) * (k + 2) // 2, [mq_q_k], [q_q2_k1])
    S0 = _spec("+", lambda k: k * k, [mq_q2_k], [mq2_q2_k])
    S1 = _spec("+", lambda k: k * (k + 2), [mq_q2_k], [mq2_q2_k])
    U0 = _spec("+", lambda k: k * k, [mq_q2_k], [mq4_q4_k])
    U1 = _spec("+", lambda k: (k + 1) ** 2, [mq_q2_k], [mq2_q4_k1])
    phi0 = _spec("+", lambda k: k * k, [mq_q2_k])
    phi1 = _spec("+", lambda k: (k + 1) ** 2, [mq_q2_k])
    u = _spec("(-1)^k", lambda k: k * k, [q_q2_k], [mq2_q2_k], power=2)

    # f'(q) = f(1/q), termwise
    phi_p = _spec("+", lambda k: k, [q_q2_k], [mq_q_2k])
    psi_p = _spec("+", lambda k: k, [q_q2_k], [mq_q_2k1])
    mu_p = _spec("+", lambda k: -(k * (k - 1) // 2), [q_q2_k], [mq_q_k])
    lam_p = _spec("+", lambda k: -(k * (k + 1) // 2), [q_q2_k], [mq_q_k])
    sigma_p = _spec("(-1)^(k+1)", lambda k: 0, [mq_q_k], [q_q2_k1])
    rho_p = _spec("(-1)^(k+1)", lambda k: k + 1, [mq_q_k], [q_q2_k1])
    S0_p = _spec("+", lambda k: -k * (k - 1), [mq_q2_k], [mq2_q2_k])
    S1_p = _spec("+", lambda k: -k * (k + 1), [mq_q2_k], [mq2_q2_k])
    U0_p = _spec("+", lambda k: 2 * k, [mq_q2_k], [mq4_q4_k])
    U1_p = _spec("+", lambda k: 2 * k + 1, [mq_q2_k], [mq2_q4_k1])

    T0 = _spec("+", lambda k: (k + 1) * (k + 2), [mq2_q2_k], [mq_q2_k1])
    T1 = _spec("+", lambda k: k * (k + 1), [mq2_q2_k], [mq_q2_k1])
    f3 = _spec("+", lambda k: k * k, [], [mq_q_k], power=2)

    # printed corollary displays, kept to document their disagreement
    lam_p_disp = _spec("+", lambda k: -(k * (k - 1) // 2), [q_q2_k], [mq_q_k])
    sigma_p_disp = _spec("(-1)^k", lambda k: 0, [q_q_k], [mq_q2_k1])
    rho_p_disp = _spec("(-1)^k", lambda k: k + 1, [q_q_k], [mq_q2_k1])
    S0_p_disp = _spec("(-1)^k", lambda k: k * (k + 1), [mq_q2_k], [mq2_q2_k])
    S1_p_disp = _spec("(-1)^k", lambda k: k * (k - 1), [mq_q2_k], [mq2_q2_k])
    U0_p_disp = _spec("(-1)^k", lambda k: 2 * k * (k + 1), [mq_q2_k], [mq4_q4_k])
    U1_p_disp = _spec("(-1)^(k+1)", lambda k: 2 * k * (k + 1) + 1, [mq_q2_k], [mq2_q4_k])

    E = CatalogEntry
    entries = [
        E("phi", phi, label="phi(q)"),
        E("psi", psi, label="psi(q)"),
        E("lambda", lam, label="lambda(q)"),
        E("mu", mu, label="mu(q)"),
        E("rho_neg", rho, "negate", label="rho(-q)"),
        E("sigma_neg", sigma, "negate", label="sigma(-q)"),
        E("S0_neg", S0, "negate", label="S0(-q)"),
        E("S1_neg", S1, "negate", label="S1(-q)"),
        E("U0_neg", U0, "negate", label="U0(-q)"),
        E("U1_neg", U1, "negate", label="U1(-q)"),
        E("phi0_neg", phi0, "negate", label="phi0(-q)"),
        E("phi1_neg", phi1, "negate", label="phi1(-q)"),
        E("u", u, label="u(q)"),
        E("phi_p", phi_p, inversion_partner="phi", label="phi'(q)"),
        E("mu_p", mu_p, inversion_partner="mu", label="mu'(q)"),
        E("sigma_p_neg", sigma_p, "negate", "sigma_neg", label="sigma'(-q)"),
        E("psi_p", psi_p, inversion_partner="psi", label="psi'(q)"),
        E("lambda_p", lam_p, inversion_partner="lambda", label="lambda'(q)"),
        E("rho_p_neg", rho_p, "negate", "rho_neg", label="rho'(-q)"),
        E("S0_p_neg", S0_p, "negate", "S0_neg", label="S0'(-q)"),
        E("S1_p_neg", S1_p, "negate", "S1_neg", label="S1'(-q)"),
        E("U0_p_neg", U0_p, "negate", "U0_neg", label="U0'(-q)"),
        E("U1_p_neg", U1_p, "negate", "U1_neg", label="U1'(-q)"),
        # diagnostics
        E("rho_plain", rho, diagnostic=True, label="rho(q)"),
        E("sigma_plain", sigma, diagnostic=True, label="sigma(q)"),
        E("T0", T0, diagnostic=True, label="T0(q)"),
        E("T1", T1, diagnostic=True, label="T1(q)"),
        E("f_third_order", f3, diagnostic=True, label="f(q)"),
        E("lambda_p_display", lam_p_disp, inversion_partner="lambda", diagnostic=True),
        E("sigma_p_neg_display", sigma_p_disp, inversion_partner="sigma_neg", diagnostic=True),
        E("rho_p_neg_display", rho_p_disp, inversion_partner="rho_neg", diagnostic=True),
        E("S0_p_neg_display", S0_p_disp, "negate", "S0_neg", diagnostic=True),
        E("S1_p_neg_display", S1_p_disp, "negate", "S1_neg", diagnostic=True),
        E("U0_p_neg_display", U0_p_disp, "negate", "U0_neg", diagnostic=True),
        E("U1_p_neg_display", U1_p_disp, "negate", "U1_neg", diagnostic=True),
    ]
    return {e.id: e for e in entries}


CATALOG = _build()
MAIN_IDS = tuple(i for i, e in CATALOG.items() if not e.diagnostic)
PRIMED_IDS = tuple(i for i in MAIN_IDS if CATALOG[i].inversion_partner)
DIAGNOSTIC_IDS = tuple(i for i, e in CATALOG.items() if e.diagnostic)


def catalog_lookup(fid: str) -> CatalogEntry:
    try:
        return CATALOG[fid]
    except KeyError:
        raise UnknownFunction(fid) from None


def root_point(n: int, j: int) -> CycloElement:
    """zeta_n^j as an element of Q(zeta_{n/g}), g = gcd(j, n)."""
    g = math.gcd(j, n)
    ctx = make_context(n // g)
    return ctx.zeta_power(j // g)


def evaluate_at_root(fid: str, n: int, j: int = 1, cap: int | None = None) -> EvaluationResult:
    """Evaluate a catalog function exactly at zeta_n^j (n odd).

    j is taken modulo n. When gcd(j, n) = g > 1 the value lives in
    Q(zeta_{n/g}); j = 0 evaluates at q = 1 in the rational field.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be an odd positive integer, got {n}")
    entry = catalog_lookup(fid)
    j %= n
    point = entry.apply(root_point(n, j))
    if cap is None:
        cap = 4 * n
    return _cached_eval(fid, point.order, point.coeffs, cap)


@lru_cache(maxsize=4096)
def _cached_eval(fid, order, coeffs, cap):
    point = CycloElement(make_context(order), coeffs)
    return eval_series(CATALOG[fid].spec, point, cap)


def evaluate_truncated(fid: str, q: complex, K: int) -> complex:
    """Floating point partial sum through index K at the substituted point."""
    if K < 1:
        raise ValueError("K must be >= 1")
    entry = catalog_lookup(fid)
    return series_truncated(entry.spec, entry.apply(complex(q)), K)


def describe(fid: str) -> str:
    e = catalog_lookup(fid)
    s = e.spec
    a, b, c = s.exponent
    num = "".join(f.describe() for f in s.numerator) or "1"
    den = "".join(f.describe() for f in s.denominator) or "1"
    if s.denominator_power == 2:
        den = f"({den})^2"
    return (
        f"{fid}: sign {s.sign_rule}, exponent {a}k^2 + {b}k + {c}, "
        f"numerator {num}, denominator {den}, substitution {e.substitution}"
    )
